#include "hllg/run_io.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <cstdio>
#include <iomanip>
#include <sstream>

#include "hllg/snapshot_io.hpp"
#include "json.hpp"

namespace hllg {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_record(const DiagnosticRecord& r) {
  const double values[] = {r.t,
                           r.l2_sq,
                           r.h1h_sq,
                           r.max_abs_m,
                           r.phi,
                           r.energy.exchange,
                           r.energy.dmi,
                           r.energy.anisotropy,
                           r.energy.zeeman,
                           r.energy.applied,
                           r.energy.classical_total,
                           r.energy.helical_total,
                           r.dt_m_l2_sq};
  std::string line;
  for (std::size_t i = 0; i < std::size(values); ++i) {
    if (i) line += ',';
    line += format_double(values[i]);
  }
  return line;
}

DiagnosticSeries read_diagnostics_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  if (line != kDiagnosticsHeader) throw ConfigError(path.string() + ": unexpected CSV header");
  DiagnosticSeries series;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> v;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      const auto comma = line.find(',', pos);
      const std::string cell =
          line.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
      double x = 0.0;
      const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), x);
      if (res.ec != std::errc() || res.ptr != cell.data() + cell.size()) {
        // from_chars rejects "inf"/"nan" spellings written by to_chars on some
        // platforms; fall back to strtod for those.
        char* end = nullptr;
        x = std::strtod(cell.c_str(), &end);
        if (cell.empty() || end != cell.c_str() + cell.size()) {
          throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": bad number '" +
                            cell + "'");
        }
      }
      v.push_back(x);
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (v.size() != 13) {
      throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": expected 13 columns");
    }
    DiagnosticRecord r;
    r.t = v[0];
    r.l2_sq = v[1];
    r.h1h_sq = v[2];
    r.max_abs_m = v[3];
    r.phi = v[4];
    r.energy.exchange = v[5];
    r.energy.dmi = v[6];
    r.energy.anisotropy = r.energy.lower_order = v[7];
    r.energy.zeeman = v[8];
    r.energy.applied = v[9];
    r.energy.classical_total = v[10];
    r.energy.helical_total = v[11];
    r.dt_m_l2_sq = v[12];
    series.records.push_back(r);
  }
  return series;
}

std::string git_blob_sha1(std::string_view content) {
  const std::string header = "blob " + std::to_string(content.size()) + '\0';
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  const bool ok = ctx && EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr) == 1 &&
                  EVP_DigestUpdate(ctx, header.data(), header.size()) == 1 &&
                  EVP_DigestUpdate(ctx, content.data(), content.size()) == 1 &&
                  EVP_DigestFinal_ex(ctx, digest, &len) == 1;
  EVP_MD_CTX_free(ctx);
  if (!ok) throw std::runtime_error("SHA-1 digest failed");
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  }
  return hex.str();
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

void check_stream(const std::ios& s, const fs::path& path) {
  if (!s) throw std::runtime_error("I/O failure writing " + path.string());
}

}  // namespace

RunWriter::RunWriter(fs::path dir, const RunConfig& config)
    : dir_(std::move(dir)), config_(config) {
  fs::create_directories(dir_ / "snapshots");
  csv_.open(dir_ / "diagnostics.csv", std::ios::binary | std::ios::trunc);
  check_stream(csv_, dir_ / "diagnostics.csv");
  csv_ << kDiagnosticsHeader << '\n';
  index_.open(dir_ / "snapshots.csv", std::ios::binary | std::ios::trunc);
  check_stream(index_, dir_ / "snapshots.csv");
  index_ << "index,step,t,file\n";
}

void RunWriter::on_record(const DiagnosticRecord& r) {
  csv_ << format_record(r) << '\n';
  csv_.flush();
  check_stream(csv_, dir_ / "diagnostics.csv");
}

void RunWriter::on_snapshot(long step, double t, const VectorField& m) {
  char name[32];
  std::snprintf(name, sizeof name, "%08ld", step);
  const fs::path rel = fs::path("snapshots") / (std::string(name) + ".hllg");
  write_snapshot(dir_ / rel, m);
  if (config_.output.vtk) write_vtk(dir_ / "snapshots" / (std::string(name) + ".vtk"), m);
  index_ << snapshots_ << ',' << step << ',' << format_double(t) << ',' << rel.generic_string()
         << '\n';
  index_.flush();
  check_stream(index_, dir_ / "snapshots.csv");
  ++snapshots_;
}

void RunWriter::on_abort(long step, double t, const VectorField& m, const std::string& why) {
  write_snapshot(dir_ / "abort_state.hllg", m);
  std::ofstream note(dir_ / "abort.txt", std::ios::trunc);
  note << why << "\nlast finite state: step " << step << ", t = " << format_double(t) << '\n';
}

void RunWriter::finish(const std::string& status, const SimulationResult* result) {
  csv_.flush();
  index_.flush();
  const std::string text = serialize_config(config_);
  json manifest;
  manifest["format"] = "hllg-run/1";
  manifest["status"] = status;
  manifest["config"] = text;
  manifest["config_sha1"] = git_blob_sha1(text);
  manifest["seed"] = config_.seed;
  manifest["snapshots"] = snapshots_;
  if (result) {
    manifest["steps"] = result->steps;
    manifest["dt"] = result->dt;
  }
  std::error_code ec;
  if (fs::exists(dir_ / "diagnostics.csv", ec)) {
    manifest["diagnostics_sha1"] = git_blob_sha1(read_file(dir_ / "diagnostics.csv"));
  }
  std::ofstream out(dir_ / "manifest.json", std::ios::binary | std::ios::trunc);
  out << manifest.dump(2) << '\n';
  check_stream(out, dir_ / "manifest.json");
}

RunData load_run(const fs::path& dir, bool with_snapshots) {
  RunData data;
  const json manifest = json::parse(read_file(dir / "manifest.json"));
  data.config_text = manifest.at("config").get<std::string>();
  data.status = manifest.value("status", std::string("unknown"));
  data.config = parse_config(data.config_text);
  data.series = read_diagnostics_csv(dir / "diagnostics.csv");
  if (with_snapshots) {
    std::ifstream index(dir / "snapshots.csv");
    if (!index) throw ConfigError("cannot open " + (dir / "snapshots.csv").string());
    std::string line;
    std::getline(index, line);
    while (std::getline(index, line)) {
      if (line.empty()) continue;
      std::stringstream ss(line);
      std::string idx, step, t, file;
      std::getline(ss, idx, ',');
      std::getline(ss, step, ',');
      std::getline(ss, t, ',');
      std::getline(ss, file, ',');
      data.snapshots.push_back(Snapshot{std::stod(t), read_snapshot(dir / file)});
    }
  }
  return data;
}

}  // namespace hllg
