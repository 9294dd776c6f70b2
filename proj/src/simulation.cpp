#include "hllg/simulation.hpp"

#include <cmath>
#include <optional>
#include <sstream>

namespace hllg {

LlgModel build_model(const RunConfig& config, std::shared_ptr<const Operators> ops) {
  const Grid grid(config.grid);
  if (!ops) ops = std::make_shared<const Operators>(grid);
  if (!(ops->grid() == grid)) throw ConfigError("operators do not match the configured grid");
  std::optional<VectorField> velocity;
  if (config.transport.kind != TransportSpec::Kind::none) {
    velocity = sample_transport(config.transport, grid);
  }
  return LlgModel(std::move(ops), config.material, config.system,
                  LowerOrderOperator::uniaxial(config.material.anisotropy), config.applied,
                  std::move(velocity));
}

VectorField initial_field(const RunConfig& config, const Grid& grid) {
  return sample(config.initial, grid);
}

long step_count(double t_end, double dt) {
  const double n = std::ceil(t_end / dt * (1.0 - 1e-12));
  return std::max(1L, long(n));
}

void check_stability(const LlgModel& model, const StepperConfig& stepper, double dt) {
  if (stepper.allow_unstable) return;
  double v_max = 0.0;
  if (model.velocity()) v_max = model.velocity()->values().colwise().norm().maxCoeff();
  const double bound = stable_dt(model.grid(), model.params(), stepper.scheme, v_max);
  if (dt > stepper.cfl_safety * bound) {
    std::ostringstream msg;
    msg << "stepper.dt: step " << dt << " exceeds cfl_safety * stable bound ("
        << stepper.cfl_safety * bound << "); set allow_unstable = true to override";
    throw ConfigError(msg.str());
  }
}

SimulationResult simulate(const LlgModel& model, const VectorField& m0,
                          const StepperConfig& stepper, int snapshot_cadence,
                          SimulationObserver* observer) {
  const long steps = step_count(stepper.t_end, stepper.dt);
  const double dt = stepper.t_end / double(steps);
  check_stability(model, stepper, dt);

  std::optional<ImexEulerStepper> imex;
  if (stepper.scheme == Scheme::imex_euler) imex.emplace(model, dt);

  SimulationResult result{{}, m0, steps, dt};
  VectorField m = m0;

  auto record = [&](double t) {
    result.series.records.push_back(record_diagnostics(model, m, t));
    if (observer) observer->on_record(result.series.records.back());
  };
  auto snapshot = [&](long step, double t) {
    if (observer) observer->on_snapshot(step, t, m);
  };

  record(0.0);
  snapshot(0, 0.0);
  for (long n = 1; n <= steps; ++n) {
    const double t_prev = double(n - 1) * dt;
    const double t = n == steps ? stepper.t_end : double(n) * dt;
    VectorField next = imex ? imex->step(m, t_prev) : rk4_step(model, m, t_prev, dt);
    if (!next.all_finite() || !std::isfinite(next.values().squaredNorm())) {
      std::ostringstream msg;
      msg << "non-finite or overflowing state at step " << n << " (t = " << t << ")";
      if (observer) observer->on_abort(n - 1, t_prev, m, msg.str());
      throw NumericalError(msg.str());
    }
    m = std::move(next);
    if (n % stepper.output_every == 0 || n == steps) record(t);
    if (n % snapshot_cadence == 0 || n == steps) snapshot(n, t);
  }
  result.final_state = m;
  return result;
}

SimulationResult simulate(const RunConfig& config, SimulationObserver* observer) {
  const LlgModel model = build_model(config);
  return simulate(model, initial_field(config, model.grid()), config.stepper,
                  config.output.cadence, observer);
}

}  // namespace hllg
