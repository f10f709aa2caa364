#pragma once

#include "tripreg/geometry.hpp"

#include <cstdint>
#include <string_view>

namespace tripreg {

// Synthetic closed surfaces with analytic outward normals, sampled
// uniformly by area with a seeded generator.

/// Unit sphere about the origin.
PointCloud make_sphere(std::size_t count, std::uint64_t seed = 1);

/// Union of five overlapping spheres of different radii; the creases where
/// they meet carry the high-curvature structure.
PointCloud make_sphere_union(std::size_t count, std::uint64_t seed = 1);

/// Cube [-1, 1]^3 with Gaussian bumps of assorted sizes on its faces.
PointCloud make_cube_with_bumps(std::size_t count, std::uint64_t seed = 1);

/// "sphere", "sphere-union" or "cube-bumps"; throws InvalidInput otherwise.
PointCloud make_fixture(std::string_view name, std::size_t count, std::uint64_t seed = 1);

}  // namespace tripreg
