#include "tripreg/ring.hpp"

#include "tripreg/convex_hull.hpp"
#include "tripreg/error.hpp"
#include "tripreg/normals.hpp"
#include "tripreg/parallel.hpp"
#include "tripreg/ply.hpp"

#include <cmath>
#include <cstdio>

namespace tripreg {

std::vector<std::size_t> hidden_point_removal(std::span<const Vec3> points, const Vec3& camera,
                                              double radius_exponent) {
    if (points.size() < 4) throw Error(ErrorKind::InvalidInput, "hidden point removal needs at least 4 points");
    double max_dist = 0.0;
    for (const auto& p : points) max_dist = std::max(max_dist, (p - camera).norm());
    const double radius = max_dist * std::pow(10.0, radius_exponent);

    // Flipped points relative to the camera; the camera itself is the last entry.
    std::vector<Vec3> flipped(points.size() + 1, Vec3::Zero());
    for (std::size_t i = 0; i < points.size(); ++i) {
        const Vec3 d = points[i] - camera;
        const double len = d.norm();
        if (len == 0.0) throw Error(ErrorKind::InvalidInput, "a point coincides with the camera");
        flipped[i] = d * ((2.0 * radius - len) / len);
    }
    const ConvexHull hull = convex_hull(flipped);
    std::vector<std::size_t> visible;
    for (auto v : hull.vertices) {
        if (v < points.size()) visible.push_back(v);
    }
    return visible;
}

Vec3 default_camera(const PointCloud& model) {
    double reach = 0.0;
    for (const auto& p : model.points) reach = std::max(reach, p.norm());
    return {0.0, 0.0, 3.0 * reach};
}

std::string view_stem(std::size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "view_%02zu", index);
    return buf;
}

RingDataset generate_ring_views(const PointCloud& model, const RingViewOptions& options, std::string model_name) {
    if (model.size() < 4) throw Error(ErrorKind::InvalidInput, "ring views need a model with at least 4 points");
    if (options.views == 0 || std::abs(static_cast<double>(options.views) * options.step_degrees - 360.0) > 1e-9) {
        throw Error(ErrorKind::InvalidInput, "views * step must equal 360 degrees");
    }
    double reach = 0.0;
    for (const auto& p : model.points) reach = std::max(reach, p.norm());
    if (options.camera.norm() <= reach) {
        throw Error(ErrorKind::InvalidInput, "camera lies inside the model's bounding sphere");
    }

    RingDataset data;
    data.model_name = std::move(model_name);
    data.model = model;
    if (!data.model.has_normals()) {
        Vec3 centroid = Vec3::Zero();
        for (const auto& p : model.points) centroid += p;
        centroid /= static_cast<double>(model.size());
        data.model = estimate_normals(model, std::min<std::size_t>(20, model.size()), centroid);
        for (auto& n : data.model.normals) n = -n;
        data.model.eigenvalues.clear();
        data.model.degenerate.clear();
    }
    data.model.viewpoint.reset();

    data.views.resize(options.views);
    data.ground_truth.resize(options.views);
    data.retained.resize(options.views);
    parallel_for(options.views, [&](std::size_t v) {
        const RigidTransform pose{rotation_about_y(deg_to_rad(options.step_degrees * static_cast<double>(v))),
                                  Vec3::Zero()};
        PointCloud rotated = apply_transform(pose, data.model);

        std::vector<std::size_t> facing;
        std::vector<Vec3> facing_points;
        for (std::size_t i = 0; i < rotated.size(); ++i) {
            if (rotated.normals[i].dot(options.camera - rotated.points[i]) > 0.0) {
                facing.push_back(i);
                facing_points.push_back(rotated.points[i]);
            }
        }
        std::vector<std::size_t> keep;
        if (facing_points.size() >= 4) {
            for (auto k : hidden_point_removal(facing_points, options.camera, options.hpr_radius_exponent)) {
                keep.push_back(facing[k]);
            }
        }

        PointCloud view;
        view.viewpoint = options.camera;
        view.points.reserve(keep.size());
        view.normals.reserve(keep.size());
        for (auto i : keep) {
            view.points.push_back(rotated.points[i]);
            view.normals.push_back(rotated.normals[i]);
        }
        data.views[v] = std::move(view);
        data.ground_truth[v] = TransformRecord(pose);
        data.retained[v] = std::move(keep);
    });
    return data;
}

void write_ring_dataset(const RingDataset& data, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorKind::Io, "cannot create " + dir.string() + ": " + ec.message());
    write_ply(data.model, dir / "model.ply");
    for (std::size_t v = 0; v < data.views.size(); ++v) {
        write_ply(data.views[v], dir / (view_stem(v) + ".ply"));
        data.ground_truth[v].save(dir / (view_stem(v) + ".gt"));
    }
}

}  // namespace tripreg
