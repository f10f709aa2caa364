#include "tripreg/geometry.hpp"

#include "tripreg/error.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <string>

namespace tripreg {

const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::InvalidInput: return "invalid-input";
    case ErrorKind::DegenerateNeighborhood: return "degenerate-neighborhood";
    case ErrorKind::DegeneratePair: return "degenerate-pair";
    case ErrorKind::DegenerateTriplet: return "degenerate-triplet";
    case ErrorKind::EmptySet: return "empty-set";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Io: return "io";
    }
    return "unknown";
}

void PointCloud::validate() const {
    const auto n = points.size();
    auto check_len = [n](std::size_t len, const char* what) {
        if (len != 0 && len != n) {
            throw Error(ErrorKind::InvalidInput,
                        std::string(what) + " has " + std::to_string(len) + " entries for " +
                            std::to_string(n) + " points");
        }
    };
    check_len(normals.size(), "normals");
    check_len(curvatures.size(), "curvatures");
    check_len(eigenvalues.size(), "eigenvalues");
    for (std::size_t i = 0; i < normals.size(); ++i) {
        if (std::abs(normals[i].norm() - 1.0) > 1e-6) {
            throw Error(ErrorKind::InvalidInput, "normal " + std::to_string(i) + " is not unit length");
        }
    }
    for (std::size_t i = 0; i < curvatures.size(); ++i) {
        const double c = curvatures[i];
        if (!(c >= 0.0 && c <= 1.0 / 3.0 + 1e-12)) {
            throw Error(ErrorKind::InvalidInput, "curvature " + std::to_string(i) + " outside [0, 1/3]");
        }
    }
}

RigidTransform RigidTransform::from_matrix(const Mat4& m) {
    RigidTransform t;
    t.rotation = m.topLeftCorner<3, 3>();
    t.translation = m.topRightCorner<3, 1>();
    return t;
}

Mat4 RigidTransform::matrix() const {
    Mat4 m = Mat4::Identity();
    m.topLeftCorner<3, 3>() = rotation;
    m.topRightCorner<3, 1>() = translation;
    return m;
}

RigidTransform RigidTransform::inverse() const {
    RigidTransform inv;
    inv.rotation = rotation.transpose();
    inv.translation = -(inv.rotation * translation);
    return inv;
}

bool RigidTransform::is_valid(double tol) const {
    if (!rotation.allFinite() || !translation.allFinite()) return false;
    const double ortho = (rotation.transpose() * rotation - Mat3::Identity()).cwiseAbs().maxCoeff();
    return ortho <= tol && std::abs(rotation.determinant() - 1.0) <= tol;
}

namespace {

Vec3 vee_skew(const Mat3& m) {
    return {m(2, 1) - m(1, 2), m(0, 2) - m(2, 0), m(1, 0) - m(0, 1)};
}

Mat3 hat(const Vec3& v) {
    Mat3 m;
    m << 0.0, -v.z(), v.y(),
         v.z(), 0.0, -v.x(),
        -v.y(), v.x(), 0.0;
    return m;
}

}  // namespace

RotationVector rotation_to_vector(const Mat3& rotation) {
    const Vec3 skew = vee_skew(rotation);  // 2 sin(theta) axis
    const double s = 0.5 * skew.norm();
    const double c = std::clamp(0.5 * (rotation.trace() - 1.0), -1.0, 1.0);
    const double theta = std::atan2(s, c);

    if (s == 0.0 && c > 0.0) return {};

    if (theta < kPi - 1e-2) {
        return {skew * (0.5 * theta / s)};
    }

    // Near pi sin(theta) vanishes; recover the axis from the symmetric part,
    // (R + R^T)/2 = cos(theta) I + (1 - cos(theta)) a a^T.
    const Mat3 sym = 0.5 * (rotation + rotation.transpose());
    const Mat3 outer = (sym - c * Mat3::Identity()) / (1.0 - c);
    Eigen::Index col = 0;
    outer.diagonal().maxCoeff(&col);
    Vec3 axis = outer.col(col) / std::sqrt(std::max(outer(col, col), 0.0));
    axis.normalize();
    if (axis.dot(skew) < 0.0) axis = -axis;
    return {axis * theta};
}

Mat3 vector_to_rotation(const RotationVector& v) {
    const double theta = v.r.norm();
    const Mat3 k = hat(v.r);
    if (theta < 1e-8) {
        return Mat3::Identity() + k + 0.5 * k * k;
    }
    const double a = std::sin(theta) / theta;
    const double b = (1.0 - std::cos(theta)) / (theta * theta);
    return Mat3::Identity() + a * k + b * k * k;
}

Mat3 axis_angle(const Vec3& axis, double angle) {
    return vector_to_rotation({axis.normalized() * angle});
}

Mat3 rotation_about_y(double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    Mat3 m;
    m << c, 0.0, s,
         0.0, 1.0, 0.0,
         -s, 0.0, c;
    return m;
}

double rotation_angle_between(const Mat3& a, const Mat3& b) {
    return rotation_to_vector(a.transpose() * b).angle();
}

PointCloud apply_transform(const RigidTransform& transform, const PointCloud& cloud) {
    PointCloud out = cloud;
    for (auto& p : out.points) p = transform.apply(p);
    for (auto& n : out.normals) n = transform.rotation * n;
    if (out.viewpoint) out.viewpoint = transform.apply(*out.viewpoint);
    return out;
}

double angle_between(const Vec3& a, const Vec3& b) {
    const double denom = a.norm() * b.norm();
    return std::acos(std::clamp(a.dot(b) / denom, -1.0, 1.0));
}

}  // namespace tripreg
