#pragma once

#include "tripreg/geometry.hpp"

#include <optional>

namespace tripreg {

/// PCA normals from the k nearest neighbours of each point (the point itself
/// included). The covariance is taken about the query point rather than the
/// neighbourhood mean. The normal is the eigenvector of the smallest
/// eigenvalue, flipped so that n . (viewpoint - x) >= 0; without a viewpoint
/// (argument or cloud.viewpoint) normals are oriented towards +z.
///
/// Eigenvalues are cached on the returned cloud for curvature computation.
/// Points whose neighbourhood collapses to a single location are listed in
/// `degenerate` and receive the default orientation as normal.
PointCloud estimate_normals(const PointCloud& cloud, std::size_t neighbor_count,
                            std::optional<Vec3> viewpoint = std::nullopt);

/// Median nearest-neighbour distance of one cloud (self excluded).
double median_nn_distance(const PointCloud& cloud);

/// (median_nn_distance(x) + median_nn_distance(y)) / 2.
double compute_medD(const PointCloud& cloud_x, const PointCloud& cloud_y);

}  // namespace tripreg
