#include "tripreg/voting.hpp"

#include "tripreg/error.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace tripreg {

RigidTransform estimate_rigid_transform(std::span<const Vec3> src, std::span<const Vec3> dst) {
    if (src.size() != dst.size() || src.size() < 3) {
        throw Error(ErrorKind::DegenerateTriplet, "rigid fit needs at least 3 matched points");
    }
    Vec3 src_mean = Vec3::Zero();
    Vec3 dst_mean = Vec3::Zero();
    for (std::size_t i = 0; i < src.size(); ++i) {
        src_mean += src[i];
        dst_mean += dst[i];
    }
    src_mean /= static_cast<double>(src.size());
    dst_mean /= static_cast<double>(dst.size());

    Mat3 cross = Mat3::Zero();
    for (std::size_t i = 0; i < src.size(); ++i) {
        cross.noalias() += (dst[i] - dst_mean) * (src[i] - src_mean).transpose();
    }
    Eigen::JacobiSVD<Mat3> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Vec3 sv = svd.singularValues();
    if (!(sv[0] > 0.0) || sv[1] <= 1e-12 * sv[0]) {
        throw Error(ErrorKind::DegenerateTriplet, "collinear or coincident points in rigid fit");
    }
    const Mat3& u = svd.matrixU();
    const Mat3& v = svd.matrixV();
    Vec3 signs(1.0, 1.0, (v * u.transpose()).determinant() < 0.0 ? -1.0 : 1.0);

    RigidTransform t;
    t.rotation = v * signs.asDiagonal() * u.transpose();
    t.translation = src_mean - t.rotation * dst_mean;
    return t;
}

RigidTransform estimate_triplet_transform(const CorrespondenceSet& set, const Triplet& triplet) {
    const Correspondence& a = set[triplet.i];
    const Correspondence& b = set[triplet.j];
    const Correspondence& c = set[triplet.k];
    const std::array<Vec3, 3> src{a.src_position, b.src_position, c.src_position};
    const std::array<Vec3, 3> dst{a.dst_position, b.dst_position, c.dst_position};
    return estimate_rigid_transform(src, dst);
}

VoteCollection collect_votes(const CorrespondenceSet& set, std::span<const Triplet> triplets) {
    if (triplets.empty()) throw Error(ErrorKind::EmptySet, "no triplets to vote with");
    VoteCollection votes;
    votes.rotations.vectors.reserve(triplets.size());
    votes.translations.vectors.reserve(triplets.size());
    for (const auto& t : triplets) {
        try {
            const RigidTransform pose = estimate_triplet_transform(set, t);
            votes.rotations.vectors.push_back(rotation_to_vector(pose.rotation).r);
            votes.translations.vectors.push_back(pose.translation);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::DegenerateTriplet) throw;
            ++votes.degenerate_triplets;
        }
    }
    if (votes.rotations.vectors.empty()) throw Error(ErrorKind::EmptySet, "every triplet was degenerate");
    return votes;
}

DecorrelatedFrame decorrelate(const VoteSet& votes) {
    DecorrelatedFrame frame;
    const std::size_t n = votes.vectors.size();
    if (n >= 2) {
        Vec3 mean = Vec3::Zero();
        for (const auto& v : votes.vectors) mean += v;
        mean /= static_cast<double>(n);
        Mat3 cov = Mat3::Zero();
        for (const auto& v : votes.vectors) cov.noalias() += (v - mean) * (v - mean).transpose();
        cov /= static_cast<double>(n);

        if (cov.norm() > 1e-24 * std::max(1.0, mean.squaredNorm())) {
            Eigen::SelfAdjointEigenSolver<Mat3> solver(cov);
            for (int c = 0; c < 3; ++c) {
                Vec3 col = solver.eigenvectors().col(2 - c);
                Eigen::Index big = 0;
                col.cwiseAbs().maxCoeff(&big);
                if (col[big] < 0.0) col = -col;
                frame.basis.col(c) = col;
                frame.variances[c] = solver.eigenvalues()[2 - c];
            }
            // Keep a right-handed frame.
            if (frame.basis.determinant() < 0.0) frame.basis.col(2) = -frame.basis.col(2);
        } else {
            frame.identity_fallback = true;
        }
    } else {
        frame.identity_fallback = true;
    }

    for (auto& axis : frame.transformed) axis.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3 coords = frame.basis.transpose() * votes.vectors[i];
        for (int a = 0; a < 3; ++a) frame.transformed[a][i] = coords[a];
    }
    return frame;
}

double quantile_sorted(std::span<const double> sorted, double q) {
    if (sorted.empty()) throw Error(ErrorKind::InvalidInput, "quantile of an empty sample");
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

double freedman_diaconis_width(std::span<const double> values) {
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const double iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);
    return 2.0 * iqr * std::pow(static_cast<double>(sorted.size()), -1.0 / 3.0);
}

std::size_t covering_bin_count(std::span<const double> values, double width, double median) {
    constexpr std::size_t kMaxBins = 1024;
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    const double reach = std::max(median - *lo, *hi - median) / width;
    if (!(reach < static_cast<double>(kMaxBins))) return kMaxBins;
    return std::min(kMaxBins, 2 * static_cast<std::size_t>(std::ceil(reach)) + 2);
}

long VoteHistogram::bin_of(double v) const {
    const double b = std::floor(v / width - median / width + static_cast<double>(bin_count) / 2.0);
    if (b < -1.0) return -1;
    if (b > static_cast<double>(bin_count)) return static_cast<long>(bin_count);
    return static_cast<long>(b);
}

VoteHistogram build_histogram(std::span<const double> values, double width, std::size_t bin_count) {
    if (values.empty()) throw Error(ErrorKind::InvalidInput, "histogram of an empty sample");
    if (!(width > 0.0) || bin_count == 0) throw Error(ErrorKind::InvalidInput, "histogram needs h > 0 and B > 0");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());

    VoteHistogram hist;
    hist.width = width;
    hist.bin_count = bin_count;
    hist.median = quantile_sorted(sorted, 0.5);
    hist.counts.assign(bin_count, 0);
    hist.members.assign(bin_count, {});
    for (double v : values) {
        const long b = hist.bin_of(v);
        if (b < 0 || b >= static_cast<long>(bin_count)) {
            ++hist.discarded;
            continue;
        }
        ++hist.counts[static_cast<std::size_t>(b)];
        hist.members[static_cast<std::size_t>(b)].push_back(v);
    }
    return hist;
}

bool ModeEstimate::selects(double v) const {
    if (zero_width) return v == value;
    const long b = histogram.bin_of(v);
    return b >= static_cast<long>(first_bin) && b <= static_cast<long>(last_bin);
}

ModeEstimate histogram_mode(std::span<const double> values, std::size_t delta, std::size_t bin_count) {
    if (values.empty()) throw Error(ErrorKind::InvalidInput, "mode of an empty sample");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const double median = quantile_sorted(sorted, 0.5);
    const double width =
        2.0 * (quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25)) *
        std::pow(static_cast<double>(sorted.size()), -1.0 / 3.0);

    ModeEstimate est;
    if (!(width > 0.0) || !std::isfinite(width)) {
        est.zero_width = true;
        est.value = median;
        est.histogram.median = median;
        return est;
    }
    if (bin_count == 0) bin_count = covering_bin_count(values, width, median);
    est.histogram = build_histogram(values, width, bin_count);
    const VoteHistogram& hist = est.histogram;

    const std::size_t center = bin_count / 2;
    auto center_gap = [center](std::size_t b) { return b > center ? b - center : center - b; };
    std::size_t best = center;
    for (std::size_t b = 0; b < bin_count; ++b) {
        const std::size_t cb = hist.counts[b];
        const std::size_t cbest = hist.counts[best];
        if (cb > cbest || (cb == cbest && (center_gap(b) < center_gap(best) ||
                                           (center_gap(b) == center_gap(best) && b < best)))) {
            best = b;
        }
    }
    est.mode_bin = best;
    est.first_bin = best >= delta ? best - delta : 0;
    est.last_bin = std::min(bin_count - 1, best + delta);

    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t b = est.first_bin; b <= est.last_bin; ++b) {
        for (double v : hist.members[b]) sum += v;
        count += hist.counts[b];
    }
    est.value = count > 0 ? sum / static_cast<double>(count) : median;
    return est;
}

std::size_t canonicalize_rotation_votes(std::vector<Vec3>& rotations) {
    if (rotations.empty()) return 0;
    Vec3 median_dir;
    std::vector<double> comp(rotations.size());
    for (int a = 0; a < 3; ++a) {
        for (std::size_t i = 0; i < rotations.size(); ++i) comp[i] = rotations[i][a];
        std::sort(comp.begin(), comp.end());
        median_dir[a] = quantile_sorted(comp, 0.5);
    }
    if (median_dir.norm() == 0.0) return 0;

    std::size_t rewritten = 0;
    for (auto& r : rotations) {
        const double theta = r.norm();
        if (theta > kPi / 2.0 && r.dot(median_dir) < 0.0) {
            r = -(2.0 * kPi - theta) / theta * r;
            ++rewritten;
        }
    }
    return rewritten;
}

namespace {

std::array<ModeEstimate, 3> axis_modes(const DecorrelatedFrame& frame, std::size_t delta, std::size_t bin_count) {
    std::array<ModeEstimate, 3> modes;
    for (int a = 0; a < 3; ++a) modes[a] = histogram_mode(frame.transformed[a], delta, bin_count);
    return modes;
}

Vec3 mode_coords(const std::array<ModeEstimate, 3>& modes) {
    return {modes[0].value, modes[1].value, modes[2].value};
}

}  // namespace

PoseEstimate estimate_pose(const VoteSet& rotations, const VoteSet& translations, std::size_t delta,
                           std::size_t bin_count) {
    if (rotations.vectors.empty() || translations.vectors.empty()) {
        throw Error(ErrorKind::InvalidInput, "pose estimation needs at least one vote");
    }
    if (rotations.size() != translations.size()) {
        throw Error(ErrorKind::InvalidInput, "rotation and translation vote counts differ");
    }

    PoseEstimate pose;
    VoteSet canonical = rotations;
    pose.canonicalized_votes = canonicalize_rotation_votes(canonical.vectors);

    pose.rotation_frame = decorrelate(canonical);
    pose.translation_frame = decorrelate(translations);
    pose.rotation_modes = axis_modes(pose.rotation_frame, delta, bin_count);
    pose.translation_modes = axis_modes(pose.translation_frame, delta, bin_count);

    pose.rotation_vector = pose.rotation_frame.restore(mode_coords(pose.rotation_modes));
    pose.transform.rotation = vector_to_rotation({pose.rotation_vector});
    pose.transform.translation = pose.translation_frame.restore(mode_coords(pose.translation_modes));

    std::size_t agree = 0;
    for (std::size_t i = 0; i < rotations.size(); ++i) {
        bool ok = true;
        for (int a = 0; a < 3 && ok; ++a) {
            ok = pose.rotation_modes[a].selects(pose.rotation_frame.transformed[a][i]) &&
                 pose.translation_modes[a].selects(pose.translation_frame.transformed[a][i]);
        }
        if (ok) ++agree;
    }
    pose.consensus = static_cast<double>(agree) / static_cast<double>(rotations.size());
    for (int a = 0; a < 3; ++a) {
        pose.discarded += pose.rotation_modes[a].histogram.discarded + pose.translation_modes[a].histogram.discarded;
    }
    return pose;
}

}  // namespace tripreg
