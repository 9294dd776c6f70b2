#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hllg/run_io.hpp"

namespace hllg {

struct CheckResult {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  bool gate = true;  ///< informational checks never fail a verification
  std::string detail;
};

/// One JSON object per line: name, value, tolerance, pass, gate, detail.
std::string to_json_line(const CheckResult& check);

/// Machine-precision identities of the discrete helical calculus on one grid,
/// evaluated on seeded random (non-smooth) fields:
///   skew-matrix algebra, G_i = D_i - M_i, commutators away from the boundary,
///   pointwise energy decomposition, summation by parts, exact symmetry of
///   Lap_h, and the face-midpoint chiral condition of the ghost values.
std::vector<CheckResult> operator_identity_suite(const Operators& ops, std::uint64_t seed);

/// Observed order of Lap_h - laplacian_expanded over a sequence of cubic grids
/// of the given extent, measured on the interior region 2.5 coarsest cells
/// away from every face.
struct ExpansionStudy {
  std::vector<int> resolutions;
  std::vector<double> errors;
  std::vector<double> orders;  ///< between consecutive grids
};
ExpansionStudy laplacian_expansion_study(const std::vector<int>& resolutions, int dim,
                                         double extent);

/// Post-run checks on a stored run. `suite` is identities, estimates, weak or all.
std::vector<CheckResult> verify_run(const RunData& run, const std::string& suite);

}  // namespace hllg
