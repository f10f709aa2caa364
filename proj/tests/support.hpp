#pragma once

#include "tripreg/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace testing {

using tripreg::Mat3;
using tripreg::PointCloud;
using tripreg::RigidTransform;
using tripreg::Vec3;

inline Vec3 random_unit(std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Vec3 v;
    do {
        v = Vec3(g(rng), g(rng), g(rng));
    } while (v.norm() < 1e-6);
    return v.normalized();
}

inline Vec3 random_point(std::mt19937_64& rng, double half_extent = 1.0) {
    std::uniform_real_distribution<double> u(-half_extent, half_extent);
    return Vec3(u(rng), u(rng), u(rng));
}

// Uniformly distributed rotation from a random unit quaternion.
inline Mat3 random_rotation(std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::Quaterniond q(g(rng), g(rng), g(rng), g(rng));
    q.normalize();
    return q.toRotationMatrix();
}

inline RigidTransform random_transform(std::mt19937_64& rng, double translation_scale = 1.0) {
    return {random_rotation(rng), random_point(rng, translation_scale)};
}

inline std::vector<Vec3> random_points(std::mt19937_64& rng, std::size_t n, double half_extent = 1.0) {
    std::vector<Vec3> pts(n);
    for (auto& p : pts) p = random_point(rng, half_extent);
    return pts;
}

// Indices of the k nearest points by a linear scan, ties to the lower index.
inline std::vector<std::size_t> brute_knn(const std::vector<Vec3>& pts, const Vec3& q, std::size_t k) {
    std::vector<std::pair<double, std::size_t>> d;
    d.reserve(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) d.emplace_back((pts[i] - q).squaredNorm(), i);
    std::sort(d.begin(), d.end());
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < std::min(k, d.size()); ++i) out.push_back(d[i].second);
    return out;
}

// Interior angle at vertex a of triangle (a, b, c), in radians.
inline double vertex_angle(const Vec3& a, const Vec3& b, const Vec3& c) {
    const Vec3 u = (b - a).normalized();
    const Vec3 v = (c - a).normalized();
    return std::acos(std::clamp(u.dot(v), -1.0, 1.0));
}

inline double clamped_acos_angle(const Vec3& a, const Vec3& b) {
    return std::acos(std::clamp(a.dot(b) / (a.norm() * b.norm()), -1.0, 1.0));
}

// Regular grid of nx * ny points on the plane z = 0.
inline PointCloud grid_plane(std::size_t nx, std::size_t ny, double spacing) {
    PointCloud c;
    for (std::size_t i = 0; i < nx; ++i) {
        for (std::size_t j = 0; j < ny; ++j) c.points.emplace_back(i * spacing, j * spacing, 0.0);
    }
    return c;
}

}  // namespace testing
