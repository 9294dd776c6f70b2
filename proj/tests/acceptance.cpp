// Acceptance suite: one PASS/FAIL line per criterion.
// Usage: hllg_acceptance <configs dir> <scratch dir> [criterion...]

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <set>
#include <sstream>

#include "hllg/galerkin.hpp"
#include "hllg/run_io.hpp"
#include "hllg/simulation.hpp"
#include "hllg/verification.hpp"

using namespace hllg;
namespace fs = std::filesystem;

namespace {

fs::path g_configs, g_scratch;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    detail << (detail.tellp() > 0 ? "; " : "") << what << (ok ? "" : " [fail]");
  }
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Run {
  RunConfig config;
  SimulationResult result;
  fs::path dir;
};

Run run_config(const std::string& name, const std::string& out_name = "") {
  const RunConfig config = load_config(g_configs / name);
  const fs::path dir = g_scratch / (out_name.empty() ? name : out_name);
  fs::remove_all(dir);
  RunWriter writer(dir, config);
  Run r{config, simulate(config, &writer), dir};
  writer.finish("ok", &r.result);
  return r;
}

// 1. Machine-precision identities and the second-order expansion.
void operator_identities(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  for (int n : {8, 16}) {
    const double l = 2.0 * std::numbers::pi;
    const Operators ops(Grid(GridSpec{3, {l, l, l}, {n, n, n}}));
    double worst = 0.0;
    bool ok = true;
    for (const CheckResult& c : operator_identity_suite(ops, 2024)) {
      ok = ok && c.pass && c.tolerance <= 1e-12;
      worst = std::max(worst, c.value);
    }
    o.require(ok, std::to_string(n) + "^3 identities worst " + sci(worst) + " <= 1e-12");
  }
  const double elapsed = seconds_since(t0);
  o.require(elapsed < 5.0, "identity time " + sci(elapsed) + " s < 5 s");
  const ExpansionStudy s = laplacian_expansion_study({8, 16, 32}, 3, 1.0);
  for (std::size_t i = 0; i < s.orders.size(); ++i) {
    o.require(std::abs(s.orders[i] - 2.0) <= 0.2,
              "order " + std::to_string(s.resolutions[i]) + "->" +
                  std::to_string(s.resolutions[i + 1]) + " = " + sci(s.orders[i]));
  }
}

// 2. Dense spectrum of I - Lap_h on 8^3.
void spectral_suite(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const double l = 2.0 * std::numbers::pi;
  const Operators ops(Grid(GridSpec{3, {l, l, l}, {8, 8, 8}}));
  const int dim = int(3 * ops.grid().node_count());
  const EigenBasis b = eigen_basis(ops, dim);
  o.require(!b.iterative, "dense solve");
  o.require(b.lambdas.minCoeff() >= 1.0 - 1e-10, "min lambda " + sci(b.lambdas.minCoeff()));
  const Eigen::MatrixXd gram = ops.grid().cell_volume() * b.modes.transpose() * b.modes;
  const double gram_defect = (gram - Eigen::MatrixXd::Identity(dim, dim)).cwiseAbs().maxCoeff();
  o.require(gram_defect <= 1e-10, "Gram defect " + sci(gram_defect));
  o.require(b.residuals.maxCoeff() <= 1e-8, "max residual " + sci(b.residuals.maxCoeff()));

  const EigenBasis sub = eigen_basis(ops, 64);
  std::mt19937_64 rng(99);
  std::normal_distribution<double> n;
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    VectorField u(ops.grid()), w(ops.grid());
    for (Eigen::Index p = 0; p < u.size(); ++p) {
      u[p] = Vec3(n(rng), n(rng), n(rng));
      w[p] = Vec3(n(rng), n(rng), n(rng));
    }
    const double a = inner_product(reconstruct(project(u, sub), sub), w);
    const double c = inner_product(u, reconstruct(project(w, sub), sub));
    worst = std::max(worst, std::abs(a - c) / (norms(u).l2 * norms(w).l2));
  }
  o.require(worst <= 1e-12, "projection self-adjointness " + sci(worst));
  const double elapsed = seconds_since(t0);
  o.require(elapsed < 60.0, "time " + sci(elapsed) + " s < 60 s");
}

// 3. Galerkin L2 identity with 64 modes, and the k = dim rhs cross-check.
void galerkin_identity(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  for (const char* name : {"galerkin_eps0.cfg", "galerkin_eps001.cfg"}) {
    const RunConfig c = load_config(g_configs / name);
    const LlgModel model = build_model(c);
    const EigenBasis basis = eigen_basis(model.ops(), 64);
    const GalerkinModel gm(model, basis);
    const Eigen::VectorXd g0 = project(initial_field(c, model.grid()), basis);
    GalerkinConfig gc;
    gc.t_end = c.stepper.t_end;
    const GalerkinRun run = integrate_galerkin(gm, g0, gc);
    const GalerkinRecord& last = run.records.back();
    const double rel = std::abs(last.l2_sq + last.dissipation - g0.squaredNorm()) / g0.squaredNorm();
    o.require(rel <= 1e-6, "eps " + sci(c.material.epsilon) + " relative residual " + sci(rel));
  }
  const RunConfig c = load_config(g_configs / "galerkin_eps001.cfg");
  RunConfig small = c;
  small.grid.resolution = {4, 4, 4};
  const LlgModel model = build_model(small);
  const EigenBasis full = eigen_basis(model.ops(), int(3 * model.grid().node_count()));
  const GalerkinModel gm(model, full);
  const Eigen::VectorXd g = project(initial_field(small, model.grid()), full);
  const Eigen::VectorXd via_grid = project(model.rhs(reconstruct(g, full), 0.0), full);
  const double diff = (gm.rhs(g, 0.0) - via_grid).cwiseAbs().maxCoeff() /
                      std::max(1.0, via_grid.cwiseAbs().maxCoeff());
  o.require(diff <= 1e-12, "4^3 rhs agreement " + sci(diff));
  const double elapsed = seconds_since(t0);
  o.require(elapsed < 120.0, "time " + sci(elapsed) + " s < 120 s");
}

// 4. |m| <= 1 along viscous IMEX runs started on the sphere.
void maximum_principle(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  for (const char* name : {"max_principle_helix_3d.cfg", "max_principle_random_3d.cfg",
                           "max_principle_helix_2d.cfg", "max_principle_random_2d.cfg"}) {
    const Run r = run_config(name);
    double max_abs = 0.0, max_phi = 0.0;
    for (const auto& rec : r.result.series.records) {
      max_abs = std::max(max_abs, rec.max_abs_m);
      max_phi = std::max(max_phi, rec.phi);
    }
    o.require(max_abs <= 1.0 + 1e-6 && max_phi <= 1e-12,
              std::string(name) + " max|m|-1 " + sci(max_abs - 1.0) + ", max phi " + sci(max_phi));
  }
  const double elapsed = seconds_since(t0);
  o.require(elapsed < 300.0, "time " + sci(elapsed) + " s < 300 s");
}

// 5. Energy inequality at gamma = 0 and conservation in the Schrodinger case.
void energy_inequality(Outcome& o) {
  {
    const Run r = run_config("energy_helix_damped.cfg");
    const double e0 = r.result.series.records.front().energy.helical_total;
    const EnergyInequalityReport rep = energy_inequality_residual(
        r.result.series, r.config.material, r.config.applied, 1e-3 * std::abs(e0));
    o.require(rep.pass && !rep.conservative,
              "damped: E(T) + diss - E(0) = " + sci(rep.residual) + " <= " + sci(rep.tolerance));
  }
  {
    const Run r = run_config("energy_schrodinger.cfg");
    const double h = r.result.series.records.empty() ? 0.0 : build_model(r.config).grid().min_spacing();
    o.require(std::abs(r.config.stepper.dt - h * h / 10.0) <= 1e-12, "dt = h^2/10");
    const double e0 = r.result.series.records.front().energy.helical_total;
    const EnergyInequalityReport rep = energy_inequality_residual(
        r.result.series, r.config.material, r.config.applied, 1e-4 * std::abs(e0));
    o.require(rep.pass && rep.conservative,
              "schrodinger: |E(T) - E(0)| = " + sci(std::abs(rep.residual)) + " <= " + sci(rep.tolerance));
  }
}

// 6. Transport structure and the type-II L2 balance under stream2d.
void transport_conditions(Outcome& o) {
  const double l = 2.0 * std::numbers::pi;
  const Grid box(GridSpec{3, {l, l, l}, {16, 16, 16}});
  TransportSpec rigid;
  rigid.kind = TransportSpec::Kind::rigid;
  rigid.omega = Vec3(0, 0, 1);
  const TransportReport rr = check_transport_condition(rigid, box, 'a');
  o.require(rr.antisymmetry_defect <= 1e-12 && rr.divergence_defect <= 1e-12,
            "rigid antisymmetry " + sci(rr.antisymmetry_defect) + ", div " + sci(rr.divergence_defect));
  o.require(!rr.tangency_ok && !rr.pass, "rigid reported tangency-failing (" + sci(rr.tangency_defect) + ")");

  const Run r = run_config("transport_stream2d.cfg");
  const TransportReport sr = check_transport_condition(r.config.transport, build_model(r.config).grid(), 'c');
  o.require(sr.divergence_ok && sr.tangency_ok,
            "stream2d div " + sci(sr.divergence_defect) + " (allowance " +
                sci(sr.truncation_allowance) + "), tangency " + sci(sr.tangency_defect));
  const double m0 = r.result.series.records.front().l2_sq;
  const double rel = std::abs(l2_identity_residual(r.result.series, r.config.material.epsilon)) / m0;
  o.require(rel <= 1e-4, "type-II L2 balance " + sci(rel) + " <= 1e-4");
}

// 7. Weak residuals under simultaneous (h, dt) halving.
void weak_residuals(Outcome& o) {
  for (const char* family : {"type1", "type2"}) {
    double res[2];
    for (int k = 0; k < 2; ++k) {
      const std::string name = std::string("weak_") + family + (k ? "_64.cfg" : "_32.cfg");
      run_config(name);
      const RunData data = load_run(g_scratch / name);
      const LlgModel model = build_model(data.config);
      const WeakResidualReport rep = family[4] == '1'
                                         ? weak_residual_type1(data.snapshots, model, 16, 77)
                                         : weak_residual_type2(data.snapshots, model, 16, 77);
      res[k] = rep.max_residual;
    }
    o.require(res[0] / res[1] >= 3.0, std::string(family) + " " + sci(res[0]) + " -> " + sci(res[1]) +
                                          " (factor " + sci(res[0] / res[1]) + ")");
  }
}

// 8. The viscosity ladder approaches a limit.
void eps_continuation(Outcome& o) {
  const double ladder[] = {1e-1, 1e-2, 1e-3};
  std::vector<VectorField> finals;
  for (double eps : ladder) {
    RunConfig c = load_config(g_configs / "continuation_helix.cfg");
    c.material.epsilon = eps;
    finals.push_back(simulate(c).final_state);
  }
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < finals.size(); ++i) {
    const VectorField d = finals[i] - finals[i + 1];
    const double dist = std::sqrt(inner_product(d, d));
    o.require(dist < prev, "||m_" + sci(ladder[i]) + " - m_" + sci(ladder[i + 1]) + "|| = " + sci(dist));
    prev = dist;
  }
}

// 9. Norm equivalence on random smooth fields; elliptic ratio under refinement.
void norm_equivalence(Outcome& o) {
  const double l = 2.0 * std::numbers::pi;
  double c_grid[2];
  for (int k = 0; k < 2; ++k) {
    const int n = k ? 16 : 8;
    const Operators ops(Grid(GridSpec{3, {l, l, l}, {n, n, n}}));
    std::mt19937_64 rng(500 + n);
    int violations = 0;
    double lo = 1e300, hi = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
      const NormEquivalenceReport r = norm_equivalence_check(ops, random_smooth_field(ops.grid(), rng));
      if (!(r.ratio_h1 >= 0.2 && r.ratio_h1 <= 5.0)) ++violations;
      lo = std::min(lo, r.ratio_h1);
      hi = std::max(hi, r.ratio_h1);
    }
    o.require(violations == 0, std::to_string(n) + "^3 H1 ratio^2 in [" + sci(lo) + ", " + sci(hi) +
                                   "], " + std::to_string(violations) + " violations");
    const EigenBasis b = eigen_basis(ops, 8);
    c_grid[k] = 0.0;
    for (int i = 0; i < b.size(); ++i) c_grid[k] = std::max(c_grid[k], elliptic_ratio(ops, b.mode(i)));
  }
  o.require(std::abs(c_grid[1] / c_grid[0] - 1.0) <= 0.2,
            "elliptic C_grid " + sci(c_grid[0]) + " -> " + sci(c_grid[1]));
}

// 10. Repeated runs give byte-identical diagnostics.
void determinism(Outcome& o) {
  for (const char* name : {"max_principle_random_2d.cfg", "transport_stream2d.cfg"}) {
    run_config(name, std::string(name) + ".a");
    run_config(name, std::string(name) + ".b");
    const std::string a = read_file(g_scratch / (std::string(name) + ".a") / "diagnostics.csv");
    const std::string b = read_file(g_scratch / (std::string(name) + ".b") / "diagnostics.csv");
    o.require(a == b && !a.empty(), std::string(name) + " " + git_blob_sha1(a).substr(0, 12));
  }
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: hllg_acceptance <configs dir> <scratch dir> [criterion...]\n";
    return 2;
  }
  g_configs = argv[1];
  g_scratch = argv[2];
  fs::create_directories(g_scratch);
  std::set<int> only;
  for (int i = 3; i < argc; ++i) only.insert(std::atoi(argv[i]));

  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
      {"operator identities", operator_identities},
      {"spectral suite", spectral_suite},
      {"Galerkin L2 identity", galerkin_identity},
      {"maximum principle", maximum_principle},
      {"energy inequality", energy_inequality},
      {"transport conditions", transport_conditions},
      {"weak residuals", weak_residuals},
      {"eps continuation", eps_continuation},
      {"norm equivalence", norm_equivalence},
      {"determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = int(i + 1);
    if (!only.empty() && !only.count(id)) continue;
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << " (" << criteria[i].first
              << ", " << sci(seconds_since(t0)) << " s): " << o.detail.str() << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
