#include "tripreg/normals.hpp"

#include "tripreg/error.hpp"
#include "tripreg/parallel.hpp"
#include "tripreg/spatial_index.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <string>

namespace tripreg {

PointCloud estimate_normals(const PointCloud& cloud, std::size_t neighbor_count, std::optional<Vec3> viewpoint) {
    if (cloud.size() < 3) {
        throw Error(ErrorKind::InvalidInput, "normal estimation needs at least 3 points, got " +
                                                 std::to_string(cloud.size()));
    }
    if (neighbor_count < 3) throw Error(ErrorKind::InvalidInput, "neighbor_count must be >= 3");
    if (cloud.size() < neighbor_count) {
        throw Error(ErrorKind::InvalidInput, "cloud has fewer points than neighbor_count");
    }
    if (!viewpoint) viewpoint = cloud.viewpoint;

    const KdTree tree(cloud.points);
    const std::size_t n = cloud.size();

    PointCloud out = cloud;
    out.normals.assign(n, Vec3::UnitZ());
    out.eigenvalues.assign(n, Vec3::Zero());
    out.curvatures.clear();
    out.degenerate.clear();
    out.viewpoint = viewpoint;
    std::vector<char> flagged(n, 0);

    parallel_for(n, [&](std::size_t i) {
        const Vec3& x = cloud.points[i];
        const auto nbrs = tree.knn(x, neighbor_count);
        Mat3 cov = Mat3::Zero();
        for (const auto& nb : nbrs) {
            const Vec3 d = cloud.points[nb.index] - x;
            cov.noalias() += d * d.transpose();
        }
        cov /= static_cast<double>(nbrs.size());

        const Vec3 toward = viewpoint ? Vec3(*viewpoint - x) : Vec3::UnitZ();
        if (cov.isZero(0.0)) {
            flagged[i] = 1;
            return;
        }
        Eigen::SelfAdjointEigenSolver<Mat3> solver(cov);
        const Vec3 ev = solver.eigenvalues();  // ascending
        Vec3 normal = solver.eigenvectors().col(0).normalized();
        if (normal.dot(toward) < 0.0) normal = -normal;
        out.normals[i] = normal;
        out.eigenvalues[i] = Vec3(std::max(ev[2], 0.0), std::max(ev[1], 0.0), std::max(ev[0], 0.0));
    });

    for (std::size_t i = 0; i < n; ++i) {
        if (flagged[i]) out.degenerate.push_back(i);
    }
    return out;
}

double median_nn_distance(const PointCloud& cloud) {
    if (cloud.size() < 2) {
        throw Error(ErrorKind::InvalidInput, "median nearest-neighbour distance needs at least 2 points");
    }
    const KdTree tree(cloud.points);
    std::vector<double> dist(cloud.size());
    parallel_for(cloud.size(), [&](std::size_t i) {
        for (const auto& nb : tree.knn(cloud.points[i], 2)) {
            if (nb.index != i) {
                dist[i] = std::sqrt(nb.squared_distance);
                return;
            }
        }
    });
    // Lower and upper middle averaged for even counts.
    const std::size_t mid = dist.size() / 2;
    std::nth_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(mid), dist.end());
    const double upper = dist[mid];
    if (dist.size() % 2 == 1) return upper;
    const double lower = *std::max_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

double compute_medD(const PointCloud& cloud_x, const PointCloud& cloud_y) {
    return 0.5 * (median_nn_distance(cloud_x) + median_nn_distance(cloud_y));
}

}  // namespace tripreg
