#pragma once

#include "tripreg/correspondence.hpp"
#include "tripreg/features.hpp"

#include <cstddef>
#include <limits>
#include <vector>

namespace tripreg {

struct PpfThresholds {
    double ratio = 0.95;                   // distance ratio bound, in (0, 1)
    double angle = deg_to_rad(3.0);        // normal-to-segment angles
    double normal_angle = deg_to_rad(5.0); // normal-to-normal angle
};

struct TripletSearchConfig {
    PpfThresholds ppf;
    double triangle_angle = deg_to_rad(20.0);
    std::size_t min_triplets = 150000;
    double scan_fraction = 0.6;

    /// A configuration that never stops early: every node is scanned.
    static TripletSearchConfig untruncated(TripletSearchConfig base) {
        base.min_triplets = std::numeric_limits<std::size_t>::max();
        base.scan_fraction = 1.0;
        return base;
    }

    void validate() const;
};

/// Three correspondences by position in the reliability-sorted set, i > j > k.
struct Triplet {
    std::size_t i = 0;
    std::size_t j = 0;
    std::size_t k = 0;

    friend bool operator==(const Triplet&, const Triplet&) = default;
    friend auto operator<=>(const Triplet&, const Triplet&) = default;
};

struct TripletSearchResult {
    std::vector<Triplet> triplets;
    std::size_t nodes_scanned = 0;
    std::size_t edges = 0;
    bool reached_min_triplets = false;
    bool too_few_correspondences = false;
};

/// ratio < F1/G1 < 1/ratio, |F2-G2| < angle, |F3-G3| < angle,
/// |F4-G4| < normal_angle. Throws DegeneratePair when G1 == 0.
bool ppf_similar(const PpfDescriptor& f, const PpfDescriptor& g, const PpfThresholds& t);

/// Minimum-angle test on the shortest edge a: passes iff
/// b^2 + c^2 - a^2 < 2 sqrt(b^2 c^2) cos(min_angle), i.e. the smallest
/// interior angle exceeds `min_angle`. Coincident vertices fail.
bool triangle_ok(const Vec3& pa, const Vec3& pb, const Vec3& pc, double min_angle);

/// PPF(src_a, src_b) against PPF(dst_a, dst_b); false when either pair is
/// coincident or a keypoint repeats.
bool correspondences_compatible(const Correspondence& a, const Correspondence& b, const PpfThresholds& t);

/// Directed-graph triplet search over a reliability-sorted set. Node i gets
/// an edge to every j < i with compatible PPFs; each two-hop path i->j->k is
/// accepted when i->k is also an edge and both triangles pass. Output order is
/// i ascending, then j descending, then k descending. The search stops after
/// a node once min_triplets is reached or i >= scan_fraction * |C|.
///
/// Fewer than 3 correspondences give an empty result with
/// `too_few_correspondences`; otherwise an empty outcome throws EmptySet.
TripletSearchResult generate_triplets(const CorrespondenceSet& set, const TripletSearchConfig& cfg);

}  // namespace tripreg
