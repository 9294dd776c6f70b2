#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>

#include "hllg/simulation.hpp"

namespace hllg {

inline constexpr std::string_view kDiagnosticsHeader =
    "t,l2_sq,h1h_sq,max_abs_m,phi,e_exchange,e_dmi,e_aniso,e_zeeman,e_applied,e_classical,"
    "e_helical,dt_m_l2_sq";

/// One CSV row in header order, shortest round-trip doubles.
std::string format_record(const DiagnosticRecord& r);

DiagnosticSeries read_diagnostics_csv(const std::filesystem::path& path);

/// Git object id of a blob: SHA-1 over "blob <size>\0" + content, lowercase hex.
std::string git_blob_sha1(std::string_view content);

std::string read_file(const std::filesystem::path& path);

/// Streams a run into a directory:
///   diagnostics.csv      flushed after every row
///   snapshots/NNNNNNNN.hllg (+ .vtk) and snapshots.csv (index,step,t,file)
///   manifest.json        config echo, seed, hashes, status
class RunWriter : public SimulationObserver {
 public:
  RunWriter(std::filesystem::path dir, const RunConfig& config);

  void on_record(const DiagnosticRecord& r) override;
  void on_snapshot(long step, double t, const VectorField& m) override;
  void on_abort(long step, double t, const VectorField& m, const std::string& why) override;

  /// Writes manifest.json; status is "ok" or the failure message.
  void finish(const std::string& status, const SimulationResult* result = nullptr);

  int snapshot_count() const { return snapshots_; }
  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
  RunConfig config_;
  std::ofstream csv_;
  std::ofstream index_;
  int snapshots_ = 0;
};

struct RunData {
  std::string config_text;
  RunConfig config;
  DiagnosticSeries series;
  Trajectory snapshots;
  std::string status;
};

/// Loads manifest config, diagnostics and all indexed snapshots.
RunData load_run(const std::filesystem::path& dir, bool with_snapshots = true);

}  // namespace hllg
