#include "tripreg/correspondence.hpp"

#include "tripreg/error.hpp"
#include "tripreg/parallel.hpp"
#include "tripreg/simd/kernels.hpp"
#include "tripreg/spatial_index.hpp"

#include <algorithm>
#include <cmath>

namespace tripreg {

CorrespondenceSet build_correspondences(std::span<const Keypoint> px, std::span<const Keypoint> py, std::size_t k,
                                        double curvature_threshold, const PairPredicate& extra) {
    if (px.empty() || py.empty()) throw Error(ErrorKind::InvalidInput, "correspondences need keypoints on both sides");
    if (k == 0) throw Error(ErrorKind::InvalidInput, "knn_k must be positive");

    std::vector<double> rows;
    rows.reserve(py.size() * kFpfhSize);
    for (const auto& kp : py) rows.insert(rows.end(), kp.descriptor.bins.begin(), kp.descriptor.bins.end());
    const DescriptorIndex index(std::move(rows), kFpfhSize);

    std::vector<std::vector<Correspondence>> per_key(px.size());
    parallel_for(px.size(), [&](std::size_t a) {
        const Keypoint& kx = px[a];
        for (const auto& nb : index.knn(kx.descriptor.bins, k)) {
            const Keypoint& ky = py[nb.index];
            if (!(std::abs(kx.curvature - ky.curvature) < curvature_threshold)) continue;
            if (extra && !extra(kx, ky)) continue;
            Correspondence c;
            c.src = a;
            c.dst = nb.index;
            c.src_point = kx.index;
            c.dst_point = ky.index;
            c.src_position = kx.position;
            c.dst_position = ky.position;
            c.src_normal = kx.normal;
            c.dst_normal = ky.normal;
            c.src_curvature = kx.curvature;
            c.dst_curvature = ky.curvature;
            c.descriptor_distance = std::sqrt(nb.squared_distance);
            per_key[a].push_back(c);
        }
    });

    CorrespondenceSet set;
    for (auto& list : per_key) {
        for (auto& c : list) {
            c.build_order = set.items.size();
            set.items.push_back(c);
        }
    }
    if (set.items.empty()) throw Error(ErrorKind::EmptySet, "no correspondence passed the curvature constraint");
    return set;
}

CorrespondenceSet score_reliability(CorrespondenceSet set, double h_r, std::size_t divisions) {
    const std::size_t n = set.items.size();
    if (n == 0) throw Error(ErrorKind::InvalidInput, "reliability needs at least one correspondence");
    if (divisions == 0) throw Error(ErrorKind::InvalidInput, "divisions must be positive");
    const double h = h_r * set.medD;
    if (!(h > 0.0)) throw Error(ErrorKind::InvalidInput, "reliability range h_r * medD must be positive");
    set.divisions_clamped = divisions > n;
    divisions = std::min(divisions, n);
    set.divisions_used = divisions;
    const double inv_h2 = 1.0 / (h * h);

    // Subsets in build order; the set may arrive in any order.
    std::vector<std::size_t> by_build(n);
    for (std::size_t i = 0; i < n; ++i) by_build[i] = i;
    std::sort(by_build.begin(), by_build.end(),
              [&](std::size_t a, std::size_t b) { return set.items[a].build_order < set.items[b].build_order; });

    for (std::size_t part = 0; part < divisions; ++part) {
        std::vector<std::size_t> members;
        for (std::size_t m = part; m < n; m += divisions) members.push_back(by_build[m]);
        const std::size_t size = members.size();
        std::vector<double> cols(6 * size);
        double* sx = cols.data();
        double* sy = sx + size;
        double* sz = sy + size;
        double* dx = sz + size;
        double* dy = dx + size;
        double* dz = dy + size;
        for (std::size_t m = 0; m < size; ++m) {
            const auto& c = set.items[members[m]];
            sx[m] = c.src_position.x();
            sy[m] = c.src_position.y();
            sz[m] = c.src_position.z();
            dx[m] = c.dst_position.x();
            dy[m] = c.dst_position.y();
            dz[m] = c.dst_position.z();
        }
        const simd::Columns3 src{sx, sy, sz, size};
        const simd::Columns3 dst{dx, dy, dz, size};
        const double coeff = static_cast<double>(n) / static_cast<double>(size);
        parallel_for(size, [&](std::size_t m) {
            auto& c = set.items[members[m]];
            const double s[3] = {sx[m], sy[m], sz[m]};
            const double d[3] = {dx[m], dy[m], dz[m]};
            c.reliability = coeff * simd::consistency_sum(src, dst, s, d, inv_h2);
        });
    }

    std::sort(set.items.begin(), set.items.end(), [](const Correspondence& a, const Correspondence& b) {
        if (a.reliability != b.reliability) return a.reliability > b.reliability;
        return a.build_order < b.build_order;
    });
    set.scored = true;
    return set;
}

}  // namespace tripreg
