#include "hllg/cli.hpp"

#include <cstdio>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "hllg/galerkin.hpp"
#include "hllg/snapshot_io.hpp"
#include "hllg/verification.hpp"
#include "json.hpp"

namespace hllg {

namespace fs = std::filesystem;

namespace {

constexpr double kContinuationEps[] = {1e-1, 1e-2, 1e-3, 1e-4};

int run_simulate(const std::string& config_path, const fs::path& out_dir, bool continuation,
                 std::ostream& out) {
  const RunConfig config = load_config(config_path);
  if (!continuation) {
    RunWriter writer(out_dir, config);
    try {
      const SimulationResult result = simulate(config, &writer);
      writer.finish("ok", &result);
      out << "wrote " << result.series.records.size() << " records and "
          << writer.snapshot_count() << " snapshots to " << out_dir.string() << '\n';
    } catch (const std::exception& e) {
      writer.finish(std::string("failed: ") + e.what());
      throw;
    }
    return exit_ok;
  }

  // Same config at a ladder of viscosities; L2 distances at t_end between
  // neighbouring rungs.
  fs::create_directories(out_dir);
  std::vector<VectorField> finals;
  for (double eps : kContinuationEps) {
    RunConfig c = config;
    c.material.epsilon = eps;
    const fs::path dir = out_dir / ("eps_" + format_double(eps));
    RunWriter writer(dir, c);
    try {
      const SimulationResult result = simulate(c, &writer);
      writer.finish("ok", &result);
      finals.push_back(result.final_state);
    } catch (const std::exception& e) {
      writer.finish(std::string("failed: ") + e.what());
      throw;
    }
  }
  std::ofstream csv(out_dir / "continuation.csv", std::ios::binary);
  csv << "eps,eps_next,l2_distance\n";
  for (std::size_t i = 0; i + 1 < finals.size(); ++i) {
    const VectorField d = finals[i] - finals[i + 1];
    csv << format_double(kContinuationEps[i]) << ',' << format_double(kContinuationEps[i + 1])
        << ',' << format_double(std::sqrt(inner_product(d, d))) << '\n';
  }
  out << "wrote continuation ladder to " << out_dir.string() << '\n';
  return exit_ok;
}

int run_eigs(const std::string& config_path, int k, const fs::path& out_dir, std::ostream& out) {
  const RunConfig config = load_config(config_path);
  const Operators ops{Grid(config.grid)};
  const EigenBasis basis = eigen_basis(ops, k);
  fs::create_directories(out_dir / "modes");
  std::ofstream csv(out_dir / "lambdas.csv", std::ios::binary);
  csv << "index,lambda,residual\n";
  for (int i = 0; i < basis.size(); ++i) {
    csv << i << ',' << format_double(basis.lambdas[i]) << ',' << format_double(basis.residuals[i])
        << '\n';
    char name[32];
    std::snprintf(name, sizeof name, "mode_%05d.hllg", i);
    write_snapshot(out_dir / "modes" / name, basis.mode(i));
  }
  out << "wrote " << basis.size() << " eigenpairs (" << (basis.iterative ? "Lanczos" : "dense")
      << ") to " << out_dir.string() << '\n';
  return exit_ok;
}

int run_galerkin(const std::string& config_path, int k, const std::string& out_dir,
                 std::ostream& out) {
  const RunConfig config = load_config(config_path);
  const LlgModel model = build_model(config);
  const EigenBasis basis = eigen_basis(model.ops(), k);
  const GalerkinModel galerkin(model, basis);
  const Eigen::VectorXd g0 = project(initial_field(config, model.grid()), basis);
  GalerkinConfig gc;
  gc.t_end = config.stepper.t_end;
  gc.initial_dt = config.stepper.dt;
  const GalerkinRun run = integrate_galerkin(galerkin, g0, gc);

  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    std::ofstream csv(fs::path(out_dir) / "galerkin.csv", std::ios::binary);
    csv << "t,l2_sq,h1h_sq,dissipation\n";
    for (const auto& r : run.records) {
      csv << format_double(r.t) << ',' << format_double(r.l2_sq) << ',' << format_double(r.h1h_sq)
          << ',' << format_double(r.dissipation) << '\n';
    }
  }
  const GalerkinRecord& first = run.records.front();
  const GalerkinRecord& last = run.records.back();
  const double residual = last.l2_sq + last.dissipation - first.l2_sq;
  nlohmann::json j;
  j["k"] = k;
  j["t_end"] = last.t;
  j["accepted_steps"] = run.accepted;
  j["rejected_steps"] = run.rejected;
  j["l2_initial"] = first.l2_sq;
  j["l2_final"] = last.l2_sq;
  j["l2_identity_residual"] = residual;
  j["l2_identity_relative"] = first.l2_sq > 0.0 ? std::abs(residual) / first.l2_sq : 0.0;
  out << j.dump() << '\n';
  return exit_ok;
}

int run_verify(const fs::path& dir, const std::string& suite, std::ostream& out) {
  const RunData run = load_run(dir, suite == "weak" || suite == "all" || suite == "estimates");
  bool ok = true;
  for (const CheckResult& c : verify_run(run, suite)) {
    out << to_json_line(c) << '\n';
    if (c.gate && !c.pass) ok = false;
  }
  return ok ? exit_ok : exit_verification;
}

int run_energy(const fs::path& field_path, const std::string& config_path, std::ostream& out) {
  const RunConfig config = load_config(config_path);
  const LlgModel model = build_model(config);
  const VectorField m = read_snapshot(field_path);
  if (!(m.grid() == model.grid())) {
    throw ConfigError("snapshot grid does not match the config grid");
  }
  const DiagnosticRecord r = record_diagnostics(model, m, 0.0);
  out << "e_exchange,e_dmi,e_aniso,e_zeeman,e_applied,e_classical,e_helical\n";
  const double row[] = {r.energy.exchange, r.energy.dmi,          r.energy.anisotropy,
                        r.energy.zeeman,   r.energy.applied,      r.energy.classical_total,
                        r.energy.helical_total};
  for (std::size_t i = 0; i < std::size(row); ++i) out << (i ? "," : "") << format_double(row[i]);
  out << '\n';
  return exit_ok;
}

int run_ops_test(int n, int dim, double extent, std::uint64_t seed, std::ostream& out) {
  GridSpec spec{dim, {extent, extent, dim == 3 ? extent : 0.0}, {n, n, dim == 3 ? n : 1}};
  const Operators ops{Grid(spec)};
  bool ok = true;
  for (const CheckResult& c : operator_identity_suite(ops, seed)) {
    out << to_json_line(c) << '\n';
    ok = ok && c.pass;
  }
  return ok ? exit_ok : exit_verification;
}

}  // namespace

int cli_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Helical Landau-Lifshitz-Gilbert solver and estimate verifier", "hllg"};
  app.require_subcommand(1);

  std::string config_path, out_dir, run_dir, suite = "all", field_path, galerkin_out;
  int k = 0, grid_n = 8, dim = 3;
  double extent = 1.0;
  std::uint64_t seed = 1;
  bool continuation = false;

  auto* simulate_cmd = app.add_subcommand("simulate", "integrate a run config");
  simulate_cmd->add_option("--config", config_path, "run config")->required();
  simulate_cmd->add_option("--out", out_dir, "output directory")->required();
  simulate_cmd->add_flag("--eps-continuation", continuation,
                         "repeat at eps = 1e-1, 1e-2, 1e-3, 1e-4 and compare final states");

  auto* eigs_cmd = app.add_subcommand("eigs", "smallest eigenpairs of I - Lap_h");
  eigs_cmd->add_option("--config", config_path, "run config (grid section used)")->required();
  eigs_cmd->add_option("-k,--count", k, "number of eigenpairs")->required()->check(CLI::PositiveNumber);
  eigs_cmd->add_option("--out", out_dir, "output directory")->required();

  auto* galerkin_cmd = app.add_subcommand("galerkin-run", "integrate the projected coefficient ODE");
  galerkin_cmd->add_option("--config", config_path, "run config")->required();
  galerkin_cmd->add_option("-k,--count", k, "number of modes")->required()->check(CLI::PositiveNumber);
  galerkin_cmd->add_option("--out", galerkin_out, "optional output directory");

  auto* verify_cmd = app.add_subcommand("verify", "check a stored run against the estimates");
  verify_cmd->add_option("--run", run_dir, "run directory")->required();
  verify_cmd->add_option("--suite", suite, "identities|estimates|weak|all")
      ->check(CLI::IsMember({"identities", "estimates", "weak", "all"}));

  auto* energy_cmd = app.add_subcommand("energy", "energy breakdown of a snapshot");
  energy_cmd->add_option("--field", field_path, "snapshot file")->required();
  energy_cmd->add_option("--config", config_path, "run config")->required();

  auto* ops_cmd = app.add_subcommand("ops-test", "machine-precision operator identities");
  ops_cmd->add_option("--grid", grid_n, "cells per axis")->check(CLI::Range(4, 512));
  ops_cmd->add_option("--dim", dim, "2 or 3")->check(CLI::IsMember({2, 3}));
  ops_cmd->add_option("--extent", extent, "box side length")->check(CLI::PositiveNumber);
  ops_cmd->add_option("--seed", seed, "random field seed");

  try {
    std::vector<std::string> args;
    for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return exit_usage;
  }

  try {
    if (*simulate_cmd) return run_simulate(config_path, out_dir, continuation, out);
    if (*eigs_cmd) return run_eigs(config_path, k, out_dir, out);
    if (*galerkin_cmd) return run_galerkin(config_path, k, galerkin_out, out);
    if (*verify_cmd) return run_verify(run_dir, suite, out);
    if (*energy_cmd) return run_energy(field_path, config_path, out);
    if (*ops_cmd) return run_ops_test(grid_n, dim, extent, seed, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return exit_usage;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return exit_numerical;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << '\n';
    return exit_numerical;
  }
  err << app.help();
  return exit_usage;
}

}  // namespace hllg
