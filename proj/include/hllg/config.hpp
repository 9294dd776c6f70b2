#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "hllg/dynamics.hpp"

namespace hllg {

struct OutputConfig {
  int cadence = 10;   ///< snapshot every this many steps (t = 0 included)
  bool vtk = false;   ///< also write legacy VTK snapshots

  bool operator==(const OutputConfig&) const = default;
};

/// Everything needed to reproduce a run.
///
/// Text form: `key = value` lines grouped under [grid], [material], [initial],
/// [transport], [applied_field], [stepper], [output]; a top-level `seed`.
/// `#` starts a comment. Vectors are comma separated. Axes are 1-based.
struct RunConfig {
  GridSpec grid{3, {1.0, 1.0, 1.0}, {16, 16, 16}};
  MaterialParams material;
  SystemKind system = SystemKind::type_one;
  FieldSpec initial = UniformSpec{};
  TransportSpec transport;
  AppliedFieldSpec applied;
  StepperConfig stepper;
  OutputConfig output;
  std::uint64_t seed = 0;
  bool has_seed = false;

  bool operator==(const RunConfig&) const = default;
};

/// Parses and validates. Errors are ConfigError with "line N: section.key: ..."
/// (or "section.key: ..." for cross-field invariants without a single line).
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

/// Canonical text form: fixed key order, shortest round-trip doubles.
/// parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& config);

/// Shortest decimal string that reads back to the same double.
std::string format_double(double v);

std::string to_string(SystemKind kind);
std::string to_string(Scheme scheme);

}  // namespace hllg
