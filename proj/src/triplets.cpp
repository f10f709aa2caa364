#include "tripreg/triplets.hpp"

#include "tripreg/error.hpp"

#include <cmath>
#include <cstdint>

namespace tripreg {

void TripletSearchConfig::validate() const {
    auto fail = [](const char* msg) { throw Error(ErrorKind::InvalidInput, msg); };
    if (!(ppf.ratio > 0.0 && ppf.ratio < 1.0)) fail("ppf ratio threshold must be in (0, 1)");
    if (!(ppf.angle > 0.0 && ppf.angle <= kPi)) fail("ppf angle threshold must be in (0, pi]");
    if (!(ppf.normal_angle > 0.0 && ppf.normal_angle <= kPi)) fail("ppf normal angle threshold must be in (0, pi]");
    if (!(triangle_angle >= 0.0 && triangle_angle < kPi)) fail("triangle threshold must be in [0, pi)");
    if (min_triplets < 1) fail("min_triplets must be >= 1");
    if (!(scan_fraction > 0.0 && scan_fraction <= 1.0)) fail("scan_fraction must be in (0, 1]");
}

bool ppf_similar(const PpfDescriptor& f, const PpfDescriptor& g, const PpfThresholds& t) {
    if (g.distance == 0.0) throw Error(ErrorKind::DegeneratePair, "PPF similarity with zero reference distance");
    const double ratio = f.distance / g.distance;
    return t.ratio < ratio && ratio < 1.0 / t.ratio &&
           std::abs(f.normal1_angle - g.normal1_angle) < t.angle &&
           std::abs(f.normal2_angle - g.normal2_angle) < t.angle &&
           std::abs(f.normals_angle - g.normals_angle) < t.normal_angle;
}

bool triangle_ok(const Vec3& pa, const Vec3& pb, const Vec3& pc, double min_angle) {
    const double e0 = (pa - pb).squaredNorm();
    const double e1 = (pb - pc).squaredNorm();
    const double e2 = (pc - pa).squaredNorm();
    if (e0 == 0.0 || e1 == 0.0 || e2 == 0.0) return false;
    double a2 = e0, b2 = e1, c2 = e2;
    if (b2 < a2) std::swap(a2, b2);
    if (c2 < a2) std::swap(a2, c2);
    return b2 + c2 - a2 < 2.0 * std::sqrt(b2 * c2) * std::cos(min_angle);
}

bool correspondences_compatible(const Correspondence& a, const Correspondence& b, const PpfThresholds& t) {
    if (a.src == b.src || a.dst == b.dst) return false;
    // Cheap distance-ratio rejection before the angle terms.
    const double f1 = (b.src_position - a.src_position).norm();
    const double g1 = (b.dst_position - a.dst_position).norm();
    if (f1 == 0.0 || g1 == 0.0) return false;
    const double ratio = f1 / g1;
    if (!(t.ratio < ratio && ratio < 1.0 / t.ratio)) return false;
    const auto f = try_compute_ppf(a.src_position, a.src_normal, b.src_position, b.src_normal);
    const auto g = try_compute_ppf(a.dst_position, a.dst_normal, b.dst_position, b.dst_normal);
    return f && g && ppf_similar(*f, *g, t);
}

TripletSearchResult generate_triplets(const CorrespondenceSet& set, const TripletSearchConfig& cfg) {
    cfg.validate();
    TripletSearchResult result;
    const std::size_t n = set.size();
    if (n < 3) {
        result.too_few_correspondences = true;
        return result;
    }

    std::vector<std::vector<std::uint32_t>> out(n);  // ascending targets
    std::vector<std::uint8_t> is_target(n, 0);
    const double stop_at = cfg.scan_fraction * static_cast<double>(n);

    for (std::size_t i = 0; i < n; ++i) {
        const Correspondence& ci = set[i];
        auto& edges = out[i];
        for (std::size_t j = 0; j < i; ++j) {
            if (correspondences_compatible(ci, set[j], cfg.ppf)) edges.push_back(static_cast<std::uint32_t>(j));
        }
        result.edges += edges.size();
        for (auto j : edges) is_target[j] = 1;

        for (auto jt = edges.rbegin(); jt != edges.rend(); ++jt) {
            const std::size_t j = *jt;
            const Correspondence& cj = set[j];
            const auto& next = out[j];
            for (auto kt = next.rbegin(); kt != next.rend(); ++kt) {
                const std::size_t k = *kt;
                if (!is_target[k]) continue;
                const Correspondence& ck = set[k];
                if (ci.src == ck.src || ci.dst == ck.dst || cj.src == ck.src || cj.dst == ck.dst) continue;
                if (!triangle_ok(ci.src_position, cj.src_position, ck.src_position, cfg.triangle_angle)) continue;
                if (!triangle_ok(ci.dst_position, cj.dst_position, ck.dst_position, cfg.triangle_angle)) continue;
                result.triplets.push_back({i, j, k});
            }
        }

        for (auto j : edges) is_target[j] = 0;
        result.nodes_scanned = i + 1;
        if (result.triplets.size() >= cfg.min_triplets) {
            result.reached_min_triplets = true;
            break;
        }
        if (static_cast<double>(i + 1) >= stop_at) break;
    }

    if (result.triplets.empty()) {
        throw Error(ErrorKind::EmptySet, "no triplet passed the PPF and triangle gates after scanning " +
                                             std::to_string(result.nodes_scanned) + " correspondences");
    }
    return result;
}

}  // namespace tripreg
