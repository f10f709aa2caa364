#pragma once

#include "tripreg/geometry.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace tripreg {

/// 4x4 homogeneous rigid transform as stored on disk: four rows of four
/// whitespace-separated decimals.
struct TransformRecord {
    Mat4 matrix = Mat4::Identity();

    TransformRecord() = default;
    explicit TransformRecord(const Mat4& m) : matrix(m) {}
    explicit TransformRecord(const RigidTransform& t) : matrix(t.matrix()) {}

    RigidTransform rigid() const { return RigidTransform::from_matrix(matrix); }

    /// Throws Parse unless the bottom row is (0,0,0,1) and the rotation block
    /// is orthonormal with determinant +1 within 1e-6.
    void validate() const;

    static TransformRecord parse(std::string_view text);
    static TransformRecord load(const std::filesystem::path& path);
    std::string to_text() const;
    void save(const std::filesystem::path& path) const;
};

/// Error transform E = gt^-1 * estimated, then
/// sqrt((sum_x |E^-1 x - x|^2 + sum_y |E y - y|^2) / (|X| + |Y|)).
/// Throws InvalidInput for empty clouds or a singular matrix.
double rmse(const PointCloud& x, const PointCloud& y, const TransformRecord& estimated,
            const TransformRecord& ground_truth);

}  // namespace tripreg
