#pragma once

#include "tripreg/geometry.hpp"

#include <array>
#include <span>
#include <vector>

namespace tripreg {

struct ConvexHull {
    // Outward-oriented (counter-clockwise seen from outside) triangles.
    std::vector<std::array<std::size_t, 3>> faces;
    // Sorted indices of input points that are hull vertices.
    std::vector<std::size_t> vertices;
};

/// 3D quickhull. Throws InvalidInput when fewer than four points or all
/// points are coplanar.
ConvexHull convex_hull(std::span<const Vec3> points);

}  // namespace tripreg
