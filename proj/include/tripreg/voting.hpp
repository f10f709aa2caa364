#pragma once

#include "tripreg/correspondence.hpp"
#include "tripreg/geometry.hpp"
#include "tripreg/triplets.hpp"

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace tripreg {

/// Least-squares rigid transform T with T(dst[i]) ~ src[i] (SVD method with
/// reflection correction). Throws DegenerateTriplet when either side is
/// collinear or coincident.
RigidTransform estimate_rigid_transform(std::span<const Vec3> src, std::span<const Vec3> dst);

/// Transform mapping the Y-side keypoints of the triplet onto the X side.
RigidTransform estimate_triplet_transform(const CorrespondenceSet& set, const Triplet& triplet);

enum class VoteKind { Rotation, Translation };

struct VoteSet {
    VoteKind kind = VoteKind::Rotation;
    std::vector<Vec3> vectors;

    std::size_t size() const noexcept { return vectors.size(); }
};

struct VoteCollection {
    VoteSet rotations{VoteKind::Rotation, {}};
    VoteSet translations{VoteKind::Translation, {}};
    std::size_t degenerate_triplets = 0;
};

/// One rotation vector and one translation per non-degenerate triplet, in
/// triplet order. Throws EmptySet when every triplet is degenerate.
VoteCollection collect_votes(const CorrespondenceSet& set, std::span<const Triplet> triplets);

/// PCA frame of a vote set: covariance about the mean, eigenvectors as
/// columns of `basis` (descending eigenvalue, sign fixed so the largest
/// component of each column is positive) and coordinates basis^T v per axis.
struct DecorrelatedFrame {
    Mat3 basis = Mat3::Identity();
    Vec3 variances = Vec3::Zero();
    std::array<std::vector<double>, 3> transformed;
    bool identity_fallback = false;

    Vec3 restore(const Vec3& coords) const { return basis * coords; }
};

/// Fewer than two votes or a vanishing covariance fall back to the
/// identity basis.
DecorrelatedFrame decorrelate(const VoteSet& votes);

/// Histogram anchored at the median: value v lands in
/// floor(v/h - med/h + B/2); values outside [0, B) are discarded.
struct VoteHistogram {
    std::size_t bin_count = 0;
    double width = 0.0;
    double median = 0.0;
    std::vector<std::size_t> counts;
    std::vector<std::vector<double>> members;
    std::size_t discarded = 0;

    /// Bin index per the anchoring formula; may fall outside [0, B).
    long bin_of(double v) const;
};

/// Freedman-Diaconis width 2 IQR n^(-1/3) with linearly interpolated quartiles.
double freedman_diaconis_width(std::span<const double> values);

/// Linear-interpolation quantile of sorted data, q in [0, 1].
double quantile_sorted(std::span<const double> sorted, double q);

/// Bin count covering every value around the median anchor, capped at 1024.
std::size_t covering_bin_count(std::span<const double> values, double width, double median);

VoteHistogram build_histogram(std::span<const double> values, double width, std::size_t bin_count);

struct ModeEstimate {
    double value = 0.0;
    // Width was zero (more than half the values share the quartiles); the
    // median is returned.
    bool zero_width = false;
    VoteHistogram histogram;
    std::size_t mode_bin = 0;
    std::size_t first_bin = 0;  // selected neighbourhood, inclusive
    std::size_t last_bin = 0;

    /// Whether v falls into the selected neighbourhood of bins.
    bool selects(double v) const;
};

/// Mean of the values in bins [b* - delta, b* + delta] around the fullest bin
/// b* (ties: nearest the median bin, then the lower index). bin_count == 0
/// picks covering_bin_count. Throws InvalidInput on an empty input.
ModeEstimate histogram_mode(std::span<const double> values, std::size_t delta, std::size_t bin_count = 0);

struct PoseEstimate {
    RigidTransform transform;
    Vec3 rotation_vector = Vec3::Zero();
    DecorrelatedFrame rotation_frame;
    DecorrelatedFrame translation_frame;
    std::array<ModeEstimate, 3> rotation_modes;
    std::array<ModeEstimate, 3> translation_modes;
    std::size_t canonicalized_votes = 0;
    // Fraction of vote pairs that fall in the selected bins on all six axes.
    double consensus = 0.0;
    std::size_t discarded = 0;
};

/// Rotation votes with angle above pi/2 that point away from the
/// component-wise median direction are replaced by the equivalent vector
/// (2 pi - theta) * (-axis). Returns the number of votes rewritten.
std::size_t canonicalize_rotation_votes(std::vector<Vec3>& rotations);

/// Mode of each decorrelated axis for both vote sets, mapped back through
/// the PCA bases. Rotation and translation sets must have equal size.
PoseEstimate estimate_pose(const VoteSet& rotations, const VoteSet& translations, std::size_t delta,
                           std::size_t bin_count = 0);

}  // namespace tripreg
