#pragma once

#include "tripreg/geometry.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

namespace tripreg {

class KdTree;

inline constexpr std::size_t kFpfhBinsPerFeature = 11;
inline constexpr std::size_t kFpfhSize = 3 * kFpfhBinsPerFeature;

/// Three concatenated 11-bin angular histograms, each summing to 100
/// (or all zero for an isolated point).
struct FpfhDescriptor {
    std::array<double, kFpfhSize> bins{};
    bool isolated = false;

    double distance(const FpfhDescriptor& other) const;
};

struct Keypoint {
    std::size_t index = 0;
    Vec3 position = Vec3::Zero();
    Vec3 normal = Vec3::UnitZ();
    double curvature = 0.0;
    FpfhDescriptor descriptor;
};

/// Point pair feature: distance and the three angles (radians, [0, pi]).
struct PpfDescriptor {
    double distance = 0.0;      // |p2 - p1|
    double normal1_angle = 0.0; // angle(n1, p2 - p1)
    double normal2_angle = 0.0; // angle(n2, p2 - p1)
    double normals_angle = 0.0; // angle(n1, n2)
};

/// Throws DegeneratePair when p1 == p2.
PpfDescriptor compute_ppf(const Vec3& p1, const Vec3& n1, const Vec3& p2, const Vec3& n2);

/// Non-throwing variant; nullopt for coincident points.
std::optional<PpfDescriptor> try_compute_ppf(const Vec3& p1, const Vec3& n1, const Vec3& p2, const Vec3& n2);

/// Darboux-frame angle triple (alpha, phi, theta) for an oriented point pair.
/// The source is the point whose normal makes the smaller angle with the
/// connecting line. Returns nullopt for coincident points; a source normal
/// parallel to the connecting line yields all-zero features.
std::optional<std::array<double, 3>> darboux_features(const Vec3& p1, const Vec3& n1, const Vec3& p2,
                                                       const Vec3& n2);

/// FPFH at each keypoint over a radius neighbourhood. Simplified point
/// feature histograms are computed only for points within `radius` of some
/// keypoint. Neighbours contribute with weight 1/distance. Keypoints with no
/// neighbour inside `radius` get a zero descriptor with `isolated` set.
std::vector<Keypoint> compute_fpfh(const PointCloud& cloud, std::vector<Keypoint> keypoints, double radius);
std::vector<Keypoint> compute_fpfh(const PointCloud& cloud, const KdTree& tree, std::vector<Keypoint> keypoints,
                                   double radius);

}  // namespace tripreg
