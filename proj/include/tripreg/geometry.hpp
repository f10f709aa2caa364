#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace tripreg {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;

/// Point positions plus optional per-point attributes. Attribute arrays are
/// either empty or parallel to `points`.
struct PointCloud {
    std::vector<Vec3> points;
    std::vector<Vec3> normals;
    std::vector<double> curvatures;
    // Covariance eigenvalues (l1 >= l2 >= l3) cached by normal estimation.
    std::vector<Vec3> eigenvalues;
    // Indices whose neighborhood covariance vanished during normal estimation.
    std::vector<std::size_t> degenerate;
    std::optional<Vec3> viewpoint;

    PointCloud() = default;
    explicit PointCloud(std::vector<Vec3> pts) : points(std::move(pts)) {}

    std::size_t size() const noexcept { return points.size(); }
    bool empty() const noexcept { return points.empty(); }
    bool has_normals() const noexcept { return !normals.empty(); }
    bool has_curvatures() const noexcept { return !curvatures.empty(); }
    bool has_eigenvalues() const noexcept { return !eigenvalues.empty(); }

    /// Throws InvalidInput when parallel arrays disagree in length, a normal
    /// is not unit length, or a curvature leaves [0, 1/3].
    void validate() const;
};

/// Axis-angle vector r = theta * axis.
struct RotationVector {
    Vec3 r = Vec3::Zero();

    double angle() const { return r.norm(); }
};

struct RigidTransform {
    Mat3 rotation = Mat3::Identity();
    Vec3 translation = Vec3::Zero();

    static RigidTransform identity() { return {}; }
    static RigidTransform from_matrix(const Mat4& m);

    Mat4 matrix() const;
    RigidTransform inverse() const;
    Vec3 apply(const Vec3& p) const { return rotation * p + translation; }

    /// Orthonormal with determinant +1 within `tol`.
    bool is_valid(double tol = 1e-9) const;

    friend RigidTransform operator*(const RigidTransform& a, const RigidTransform& b) {
        return {a.rotation * b.rotation, a.rotation * b.translation + a.translation};
    }
};

/// Matrix logarithm on SO(3). theta == 0 maps to the zero vector; rotations
/// close to pi use the symmetric-part axis extraction.
RotationVector rotation_to_vector(const Mat3& rotation);
inline RotationVector rotation_to_vector(const RigidTransform& t) { return rotation_to_vector(t.rotation); }

/// Rodrigues exponential. Accepts any norm.
Mat3 vector_to_rotation(const RotationVector& v);

Mat3 axis_angle(const Vec3& axis, double angle);
Mat3 rotation_about_y(double angle);

/// Angle of rotation a^T b, in radians.
double rotation_angle_between(const Mat3& a, const Mat3& b);

/// Points map x -> R x + t; normals rotate only. Curvature and eigenvalue
/// caches are carried over unchanged; the viewpoint is transformed.
PointCloud apply_transform(const RigidTransform& transform, const PointCloud& cloud);

/// Angle between two vectors with the dot product clamped to [-1, 1].
double angle_between(const Vec3& a, const Vec3& b);

constexpr double kPi = 3.14159265358979323846;
constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

}  // namespace tripreg
