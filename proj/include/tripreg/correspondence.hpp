#pragma once

#include "tripreg/features.hpp"
#include "tripreg/geometry.hpp"

#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace tripreg {

/// A keypoint pair (p_x, p_y). Geometry is copied from the keypoints so the
/// triplet search can run without the descriptor payload.
struct Correspondence {
    std::size_t src = 0;  // index into the X keypoint list
    std::size_t dst = 0;  // index into the Y keypoint list
    std::size_t src_point = 0;  // index into the X cloud
    std::size_t dst_point = 0;  // index into the Y cloud
    Vec3 src_position = Vec3::Zero();
    Vec3 dst_position = Vec3::Zero();
    Vec3 src_normal = Vec3::UnitZ();
    Vec3 dst_normal = Vec3::UnitZ();
    double src_curvature = 0.0;
    double dst_curvature = 0.0;
    double descriptor_distance = 0.0;
    double reliability = std::numeric_limits<double>::quiet_NaN();
    // Position in the pre-score (keypoint-major, neighbour-minor) order.
    std::size_t build_order = 0;
};

struct CorrespondenceSet {
    std::vector<Correspondence> items;
    double medD = 1.0;
    bool scored = false;
    std::size_t divisions_used = 0;
    bool divisions_clamped = false;

    std::size_t size() const noexcept { return items.size(); }
    bool empty() const noexcept { return items.empty(); }
    const Correspondence& operator[](std::size_t i) const { return items[i]; }
};

/// Optional extra admissibility test applied after the curvature constraint.
using PairPredicate = std::function<bool(const Keypoint& px, const Keypoint& py)>;

/// For every X keypoint, the k nearest Y keypoints in FPFH space (exact L2,
/// ties to the lower index), kept when |curv(px) - curv(py)| < threshold.
/// Throws InvalidInput on empty keypoint lists and EmptySet when nothing
/// survives.
CorrespondenceSet build_correspondences(std::span<const Keypoint> px, std::span<const Keypoint> py, std::size_t k,
                                        double curvature_threshold, const PairPredicate& extra = {});

/// Length-consistency reliability. The set is split round-robin (by build
/// order) into `divisions` subsets; inside subset S each correspondence i
/// scores (|C|/|S|) * sum_{j in S} 1 / (1 + (dx^2 - dy^2)^2 / h^2) with
/// h = h_r * medD, dx = |x_i - x_j|, dy = |y_i - y_j| and j = i included.
/// Returns the set sorted by descending reliability, ties by build order.
CorrespondenceSet score_reliability(CorrespondenceSet set, double h_r, std::size_t divisions);

}  // namespace tripreg
