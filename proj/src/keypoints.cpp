#include "tripreg/keypoints.hpp"

#include "tripreg/error.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace tripreg {

PointCloud compute_curvatures(const PointCloud& cloud) {
    if (!cloud.has_eigenvalues() || cloud.eigenvalues.size() != cloud.size()) {
        throw Error(ErrorKind::InvalidInput, "curvature needs eigenvalues cached by normal estimation");
    }
    PointCloud out = cloud;
    out.curvatures.assign(cloud.size(), 0.0);
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const Vec3& ev = cloud.eigenvalues[i];
        const double sum = ev.sum();
        if (sum > 0.0) {
            out.curvatures[i] = std::clamp(ev[2] / sum, 0.0, 1.0 / 3.0);
        } else if (!std::binary_search(out.degenerate.begin(), out.degenerate.end(), i)) {
            out.degenerate.insert(std::upper_bound(out.degenerate.begin(), out.degenerate.end(), i), i);
        }
    }
    return out;
}

std::vector<Keypoint> detect_keypoints(const PointCloud& cloud, std::size_t count) {
    if (!cloud.has_curvatures()) throw Error(ErrorKind::InvalidInput, "keypoint detection needs curvatures");
    if (!cloud.has_normals()) throw Error(ErrorKind::InvalidInput, "keypoint detection needs normals");
    if (count == 0 || count > cloud.size()) {
        throw Error(ErrorKind::InvalidInput, "keypoint count " + std::to_string(count) + " not in [1, " +
                                                 std::to_string(cloud.size()) + "]");
    }
    std::vector<std::size_t> order(cloud.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(count), order.end(),
                      [&](std::size_t a, std::size_t b) {
                          const double ca = cloud.curvatures[a];
                          const double cb = cloud.curvatures[b];
                          return ca > cb || (ca == cb && a < b);
                      });

    std::vector<Keypoint> keypoints(count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t idx = order[i];
        keypoints[i].index = idx;
        keypoints[i].position = cloud.points[idx];
        keypoints[i].normal = cloud.normals[idx];
        keypoints[i].curvature = cloud.curvatures[idx];
    }
    return keypoints;
}

}  // namespace tripreg
