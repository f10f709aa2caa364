#pragma once

#include "tripreg/evaluation.hpp"
#include "tripreg/geometry.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace tripreg {

/// Indices of points visible from `camera` by spherical flipping about the
/// camera with radius max|p - camera| * 10^radius_exponent followed by a
/// convex hull of the flipped set plus the camera.
std::vector<std::size_t> hidden_point_removal(std::span<const Vec3> points, const Vec3& camera,
                                              double radius_exponent = 2.0);

struct RingViewOptions {
    std::size_t views = 18;
    double step_degrees = 20.0;
    Vec3 camera = Vec3::Zero();
    double hpr_radius_exponent = 2.0;
};

/// View i is the model rotated by i * step about the global Y axis and cut
/// down to the points that face the camera and survive hidden-point removal.
/// ground_truth[i] maps model coordinates into view i.
struct RingDataset {
    std::string model_name;
    PointCloud model;
    std::vector<PointCloud> views;
    std::vector<TransformRecord> ground_truth;
    // Indices into `model` retained by each view.
    std::vector<std::vector<std::size_t>> retained;
};

/// Camera inside the model's bounding sphere (about the origin) or
/// views * step != 360 throw InvalidInput. Models without normals get normals
/// pointing away from the centroid.
RingDataset generate_ring_views(const PointCloud& model, const RingViewOptions& options,
                                std::string model_name = "model");

/// Default camera: on +z at three times the largest point norm.
Vec3 default_camera(const PointCloud& model);

std::string view_stem(std::size_t index);

/// model.ply, view_NN.ply and view_NN.gt in `dir` (created if missing).
void write_ring_dataset(const RingDataset& data, const std::filesystem::path& dir);

}  // namespace tripreg
