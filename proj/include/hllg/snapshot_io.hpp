#pragma once

#include <filesystem>
#include <iosfwd>

#include "hllg/grid_field.hpp"

namespace hllg {

/// Binary field snapshot:
///   bytes 0-3   "HLLG"
///   u32         format version (1)
///   u32         dim
///   u32 x 3     N_1, N_2, N_3 (N_3 = 1 in 2D)
///   f64 x 3     L_1, L_2, L_3 (L_3 = 0 in 2D)
///   f64 x 3N    node-major value triples
/// All integers and floats little-endian.
inline constexpr std::uint32_t kSnapshotVersion = 1;

void write_snapshot(std::ostream& os, const VectorField& field);
VectorField read_snapshot(std::istream& is);

void write_snapshot(const std::filesystem::path& path, const VectorField& field);
VectorField read_snapshot(const std::filesystem::path& path);

/// Legacy VTK structured-points file (ASCII) with one VECTORS array.
void write_vtk(std::ostream& os, const VectorField& field, const std::string& name = "m");
void write_vtk(const std::filesystem::path& path, const VectorField& field,
               const std::string& name = "m");

}  // namespace hllg
