#pragma once

#include "tripreg/geometry.hpp"

#include <filesystem>
#include <iosfwd>

namespace tripreg {

/// Reads the vertex element of an ASCII or binary little-endian PLY file:
/// x, y, z (any scalar type) and nx, ny, nz when all three are present.
/// Other elements (faces, ...) and properties are skipped. A
/// `comment viewpoint X Y Z` header line sets PointCloud::viewpoint.
PointCloud read_ply(const std::filesystem::path& path);
PointCloud read_ply(std::istream& in);

/// ASCII PLY with double x, y, z (and nx, ny, nz when present), written in
/// shortest round-trip form.
void write_ply(const PointCloud& cloud, const std::filesystem::path& path);
void write_ply(const PointCloud& cloud, std::ostream& out);

}  // namespace tripreg
