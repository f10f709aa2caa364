#include "tripreg/features.hpp"

#include "tripreg/error.hpp"
#include "tripreg/parallel.hpp"
#include "tripreg/spatial_index.hpp"

#include <algorithm>
#include <cmath>

namespace tripreg {

double FpfhDescriptor::distance(const FpfhDescriptor& other) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < kFpfhSize; ++i) {
        const double d = bins[i] - other.bins[i];
        acc += d * d;
    }
    return std::sqrt(acc);
}

std::optional<PpfDescriptor> try_compute_ppf(const Vec3& p1, const Vec3& n1, const Vec3& p2, const Vec3& n2) {
    const Vec3 d = p2 - p1;
    const double len = d.norm();
    if (len == 0.0) return std::nullopt;
    const Vec3 u = d / len;
    PpfDescriptor f;
    f.distance = len;
    f.normal1_angle = std::acos(std::clamp(n1.dot(u), -1.0, 1.0));
    f.normal2_angle = std::acos(std::clamp(n2.dot(u), -1.0, 1.0));
    f.normals_angle = std::acos(std::clamp(n1.dot(n2), -1.0, 1.0));
    return f;
}

PpfDescriptor compute_ppf(const Vec3& p1, const Vec3& n1, const Vec3& p2, const Vec3& n2) {
    if (auto f = try_compute_ppf(p1, n1, p2, n2)) return *f;
    throw Error(ErrorKind::DegeneratePair, "point pair feature of coincident points");
}

std::optional<std::array<double, 3>> darboux_features(const Vec3& p1, const Vec3& n1, const Vec3& p2,
                                                       const Vec3& n2) {
    Vec3 d = p2 - p1;
    const double len = d.norm();
    if (len == 0.0) return std::nullopt;

    const double c1 = n1.dot(d) / len;
    const double c2 = n2.dot(d) / len;
    const Vec3* src_n = &n1;
    const Vec3* dst_n = &n2;
    double theta = c1;
    // acos(|c1|) > acos(|c2|)
    if (std::abs(c1) < std::abs(c2)) {
        src_n = &n2;
        dst_n = &n1;
        d = -d;
        theta = -c2;
    }
    Vec3 v = d.cross(*src_n);
    const double v_norm = v.norm();
    if (v_norm == 0.0) return std::array<double, 3>{0.0, 0.0, 0.0};
    v /= v_norm;
    const Vec3 w = src_n->cross(v);
    const double phi = v.dot(*dst_n);
    const double alpha = std::atan2(w.dot(*dst_n), src_n->dot(*dst_n));
    return std::array<double, 3>{alpha, phi, theta};
}

namespace {

using Spfh = std::array<double, kFpfhSize>;

std::size_t bin_of(double value, double lo, double hi) {
    const double t = (value - lo) / (hi - lo);
    const auto b = static_cast<long>(std::floor(static_cast<double>(kFpfhBinsPerFeature) * t));
    return static_cast<std::size_t>(std::clamp<long>(b, 0, static_cast<long>(kFpfhBinsPerFeature) - 1));
}

Spfh compute_spfh(const PointCloud& cloud, std::size_t idx, const std::vector<Neighbor>& nbrs) {
    Spfh hist{};
    std::vector<std::array<double, 3>> feats;
    feats.reserve(nbrs.size());
    const Vec3& p = cloud.points[idx];
    const Vec3& n = cloud.normals[idx];
    for (const auto& nb : nbrs) {
        if (nb.index == idx) continue;
        if (auto f = darboux_features(p, n, cloud.points[nb.index], cloud.normals[nb.index])) feats.push_back(*f);
    }
    if (feats.empty()) return hist;
    const double inc = 100.0 / static_cast<double>(feats.size());
    for (const auto& f : feats) {
        hist[bin_of(f[0], -kPi, kPi)] += inc;
        hist[kFpfhBinsPerFeature + bin_of(f[1], -1.0, 1.0)] += inc;
        hist[2 * kFpfhBinsPerFeature + bin_of(f[2], -1.0, 1.0)] += inc;
    }
    return hist;
}

}  // namespace

std::vector<Keypoint> compute_fpfh(const PointCloud& cloud, std::vector<Keypoint> keypoints, double radius) {
    const KdTree tree(cloud.points);
    return compute_fpfh(cloud, tree, std::move(keypoints), radius);
}

std::vector<Keypoint> compute_fpfh(const PointCloud& cloud, const KdTree& tree, std::vector<Keypoint> keypoints,
                                   double radius) {
    if (!cloud.has_normals()) throw Error(ErrorKind::InvalidInput, "FPFH needs normals");
    if (!(radius > 0.0)) throw Error(ErrorKind::InvalidInput, "FPFH radius must be positive");
    if (tree.size() != cloud.size()) throw Error(ErrorKind::InvalidInput, "spatial index does not match cloud");
    const std::size_t n = cloud.size();

    std::vector<std::vector<Neighbor>> key_nbrs(keypoints.size());
    parallel_for(keypoints.size(), [&](std::size_t k) {
        if (keypoints[k].index >= n) throw Error(ErrorKind::InvalidInput, "keypoint index out of range");
        key_nbrs[k] = tree.radius(cloud.points[keypoints[k].index], radius);
    });

    // SPFH slots for the union of keypoint neighbourhoods, in ascending index.
    std::vector<std::size_t> slot(n, SIZE_MAX);
    std::vector<std::size_t> members;
    for (const auto& nbrs : key_nbrs) {
        for (const auto& nb : nbrs) {
            if (slot[nb.index] == SIZE_MAX) {
                slot[nb.index] = 0;
                members.push_back(nb.index);
            }
        }
    }
    std::sort(members.begin(), members.end());
    for (std::size_t s = 0; s < members.size(); ++s) slot[members[s]] = s;

    std::vector<Spfh> spfh(members.size());
    parallel_for(members.size(), [&](std::size_t s) {
        const std::size_t idx = members[s];
        spfh[s] = compute_spfh(cloud, idx, tree.radius(cloud.points[idx], radius));
    });

    parallel_for(keypoints.size(), [&](std::size_t k) {
        Keypoint& kp = keypoints[k];
        const std::size_t idx = kp.index;
        FpfhDescriptor desc;
        std::array<double, kFpfhSize> acc{};
        std::size_t count = 0;
        for (const auto& nb : key_nbrs[k]) {
            if (nb.index == idx || nb.squared_distance == 0.0) continue;
            const double w = 1.0 / std::sqrt(nb.squared_distance);
            const Spfh& h = spfh[slot[nb.index]];
            for (std::size_t b = 0; b < kFpfhSize; ++b) acc[b] += w * h[b];
            ++count;
        }
        if (count == 0) {
            desc.isolated = true;
            kp.descriptor = desc;
            return;
        }
        const Spfh& own = spfh[slot[idx]];
        const double scale = 1.0 / static_cast<double>(count);
        for (std::size_t b = 0; b < kFpfhSize; ++b) desc.bins[b] = own[b] + scale * acc[b];
        for (std::size_t f = 0; f < 3; ++f) {
            double sum = 0.0;
            for (std::size_t b = 0; b < kFpfhBinsPerFeature; ++b) sum += desc.bins[f * kFpfhBinsPerFeature + b];
            if (sum > 0.0) {
                for (std::size_t b = 0; b < kFpfhBinsPerFeature; ++b) {
                    desc.bins[f * kFpfhBinsPerFeature + b] *= 100.0 / sum;
                }
            }
        }
        kp.descriptor = desc;
    });
    return keypoints;
}

}  // namespace tripreg
