#pragma once

#include "tripreg/geometry.hpp"
#include "tripreg/triplets.hpp"
#include "tripreg/voting.hpp"

#include <array>
#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace tripreg {

/// Every threshold of the registration pipeline. Angles are in degrees;
/// lengths are multiples of medD.
struct RegistrationConfig {
    std::size_t keypoint_count = 1500;
    double fpfh_radius_factor = 10.0;
    std::size_t knn_k = 15;
    double curvature_threshold = 0.05;
    double reliability_range = 10.0;
    std::size_t divisions = 4;
    std::array<double, 3> ppf_thresholds{0.95, 3.0, 5.0};
    double triangle_threshold = 20.0;
    std::size_t min_triplets = 150000;
    double scan_fraction = 0.6;
    std::size_t mode_delta = 1;
    std::size_t normal_k = 20;
    std::size_t threads = 0;  // 0: hardware concurrency

    TripletSearchConfig triplet_config() const;
    void validate() const;

    /// Applies one `key = value` assignment. Unknown keys and malformed
    /// values throw Parse errors.
    void set(std::string_view key, std::string_view value);

    /// Flat text: one `key = value` per line, `#` comments, blank lines ok.
    static RegistrationConfig parse(std::string_view text);
    static RegistrationConfig parse(std::string_view text, RegistrationConfig base);
    static RegistrationConfig load(const std::filesystem::path& path);
    static RegistrationConfig load(const std::filesystem::path& path, RegistrationConfig base);
    std::string to_text() const;
};

struct StageTiming {
    std::string stage;
    double seconds = 0.0;
};

struct RegistrationDiagnostics {
    double medD = 0.0;
    std::size_t keypoints_x = 0;
    std::size_t keypoints_y = 0;
    std::size_t isolated_keypoints = 0;
    std::size_t degenerate_normals = 0;
    std::size_t correspondences = 0;
    bool divisions_clamped = false;
    std::size_t triplets = 0;
    std::size_t nodes_scanned = 0;
    std::size_t graph_edges = 0;
    std::size_t degenerate_triplets = 0;
    std::size_t votes = 0;
    std::size_t discarded_votes = 0;
    std::size_t canonicalized_votes = 0;
    double consensus = 0.0;
    std::vector<StageTiming> timings;
};

struct RegistrationResult {
    RigidTransform transform;  // maps Y onto X
    RegistrationDiagnostics diagnostics;
    VoteCollection votes;
    PoseEstimate pose;
};

/// Full pipeline: normals, medD, curvature keypoints, FPFH, correspondences,
/// reliability ordering, triplets, per-triplet SVD and histogram voting.
/// The returned transform maps points of `y` into the frame of `x`. Errors
/// carry the label of the failing stage.
RegistrationResult register_clouds(const PointCloud& x, const PointCloud& y, const RegistrationConfig& cfg = {});

}  // namespace tripreg
