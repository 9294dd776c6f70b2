#include "hllg/snapshot_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <ostream>

namespace hllg {

namespace {

void put_u32(std::ostream& os, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = char((v >> (8 * i)) & 0xffu);
  os.write(b, 4);
}

void put_f64(std::ostream& os, double d) {
  const auto v = std::bit_cast<std::uint64_t>(d);
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = char((v >> (8 * i)) & 0xffu);
  os.write(b, 8);
}

std::uint32_t get_u32(std::istream& is) {
  unsigned char b[4];
  if (!is.read(reinterpret_cast<char*>(b), 4)) throw ConfigError("snapshot: truncated header");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= std::uint32_t(b[i]) << (8 * i);
  return v;
}

double get_f64(std::istream& is) {
  unsigned char b[8];
  if (!is.read(reinterpret_cast<char*>(b), 8)) throw ConfigError("snapshot: truncated data");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t(b[i]) << (8 * i);
  return std::bit_cast<double>(v);
}

}  // namespace

void write_snapshot(std::ostream& os, const VectorField& field) {
  const Grid& g = field.grid();
  os.write("HLLG", 4);
  put_u32(os, kSnapshotVersion);
  put_u32(os, std::uint32_t(g.dim()));
  for (int a = 0; a < 3; ++a) put_u32(os, std::uint32_t(g.n(a)));
  for (int a = 0; a < 3; ++a) put_f64(os, g.extent(a));
  const double* data = field.values().data();
  for (Eigen::Index i = 0; i < field.values().size(); ++i) put_f64(os, data[i]);
}

VectorField read_snapshot(std::istream& is) {
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, "HLLG", 4) != 0) {
    throw ConfigError("snapshot: bad magic bytes");
  }
  const auto version = get_u32(is);
  if (version != kSnapshotVersion) throw ConfigError("snapshot: unsupported version");
  GridSpec spec;
  spec.dim = int(get_u32(is));
  for (int a = 0; a < 3; ++a) spec.resolution[a] = int(get_u32(is));
  for (int a = 0; a < 3; ++a) spec.extents[a] = get_f64(is);
  Grid grid(spec);
  Eigen::Matrix3Xd values(3, grid.node_count());
  for (Eigen::Index i = 0; i < values.size(); ++i) values.data()[i] = get_f64(is);
  return VectorField(grid, std::move(values));
}

void write_snapshot(const std::filesystem::path& path, const VectorField& field) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_snapshot(os, field);
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

VectorField read_snapshot(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot open snapshot " + path.string());
  return read_snapshot(is);
}

void write_vtk(std::ostream& os, const VectorField& field, const std::string& name) {
  const Grid& g = field.grid();
  os << "# vtk DataFile Version 3.0\n"
     << "hllg field snapshot\n"
     << "ASCII\n"
     << "DATASET STRUCTURED_POINTS\n"
     << "DIMENSIONS " << g.n(0) << ' ' << g.n(1) << ' ' << g.n(2) << '\n'
     << "ORIGIN " << 0.5 * g.h(0) << ' ' << 0.5 * g.h(1) << ' ' << 0.5 * g.h(2) << '\n'
     << "SPACING " << g.h(0) << ' ' << g.h(1) << ' ' << (g.dim() == 3 ? g.h(2) : 1.0) << '\n'
     << "POINT_DATA " << g.node_count() << '\n'
     << "VECTORS " << name << " double\n";
  os << std::setprecision(17);
  for (Eigen::Index p = 0; p < field.size(); ++p) {
    os << field[p][0] << ' ' << field[p][1] << ' ' << field[p][2] << '\n';
  }
}

void write_vtk(const std::filesystem::path& path, const VectorField& field,
               const std::string& name) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_vtk(os, field, name);
}

}  // namespace hllg
