#pragma once

#include "tripreg/features.hpp"
#include "tripreg/geometry.hpp"

#include <vector>

namespace tripreg {

/// Approximate curvature l3 / (l1 + l2 + l3) from cached covariance
/// eigenvalues. A zero eigenvalue sum yields curvature 0 and the index is
/// recorded in `degenerate`.
PointCloud compute_curvatures(const PointCloud& cloud);

/// The `count` points with largest curvature, in descending curvature order
/// with ties broken by ascending index. Descriptors are left empty.
std::vector<Keypoint> detect_keypoints(const PointCloud& cloud, std::size_t count);

}  // namespace tripreg
