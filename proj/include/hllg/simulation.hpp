#pragma once

#include <memory>
#include <string>

#include "hllg/config.hpp"
#include "hllg/diagnostics.hpp"

namespace hllg {

/// Receives results as they are produced, so partial output survives an abort.
class SimulationObserver {
 public:
  virtual ~SimulationObserver() = default;
  virtual void on_record(const DiagnosticRecord&) {}
  virtual void on_snapshot(long /*step*/, double /*t*/, const VectorField&) {}
  /// Called with the last finite state before a NumericalError propagates.
  virtual void on_abort(long /*step*/, double /*t*/, const VectorField&, const std::string&) {}
};

struct SimulationResult {
  DiagnosticSeries series;
  VectorField final_state;
  long steps = 0;
  double dt = 0.0;  ///< effective uniform step t_end / steps
};

/// Operators, lower-order term, applied field and sampled transport field.
LlgModel build_model(const RunConfig& config, std::shared_ptr<const Operators> ops = nullptr);

VectorField initial_field(const RunConfig& config, const Grid& grid);

/// Number of uniform steps covering t_end with a step no larger than dt.
long step_count(double t_end, double dt);

/// Rejects a step above cfl_safety * stable_dt unless allow_unstable is set.
void check_stability(const LlgModel& model, const StepperConfig& stepper, double dt);

/// Method-of-lines integration. Diagnostics every output_every steps (plus the
/// final step), snapshots every `snapshot_cadence` steps including t = 0.
SimulationResult simulate(const LlgModel& model, const VectorField& m0,
                          const StepperConfig& stepper, int snapshot_cadence,
                          SimulationObserver* observer = nullptr);

SimulationResult simulate(const RunConfig& config, SimulationObserver* observer = nullptr);

}  // namespace hllg
