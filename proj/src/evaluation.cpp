#include "tripreg/evaluation.hpp"

#include "tripreg/error.hpp"

#include <Eigen/LU>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace tripreg {

namespace {

struct CompensatedSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double v) {
        const double t = sum + v;
        carry += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
        sum = t;
    }
    double value() const { return sum + carry; }
};

}  // namespace

void TransformRecord::validate() const {
    if (!matrix.allFinite()) throw Error(ErrorKind::Parse, "transform has non-finite entries");
    const Eigen::RowVector4d bottom = matrix.row(3);
    if (bottom != Eigen::RowVector4d(0.0, 0.0, 0.0, 1.0)) {
        throw Error(ErrorKind::Parse, "transform bottom row must be 0 0 0 1");
    }
    if (!rigid().is_valid(1e-6)) {
        throw Error(ErrorKind::Parse, "transform rotation block is not a proper rotation");
    }
}

TransformRecord TransformRecord::parse(std::string_view text) {
    std::istringstream in{std::string(text)};
    TransformRecord rec;
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            if (!(in >> rec.matrix(r, c))) {
                throw Error(ErrorKind::Parse, "transform needs 16 numbers, got " + std::to_string(4 * r + c));
            }
        }
    }
    std::string extra;
    if (in >> extra) throw Error(ErrorKind::Parse, "trailing data after 4x4 transform");
    rec.validate();
    return rec;
}

TransformRecord TransformRecord::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return parse(buf.str());
    } catch (const Error& e) {
        throw Error(e.kind(), path.string() + ": " + e.what());
    }
}

std::string TransformRecord::to_text() const {
    std::string out;
    char buf[64];
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), matrix(r, c));
            out.append(buf, ptr);
            out.push_back(c == 3 ? '\n' : ' ');
        }
    }
    return out;
}

void TransformRecord::save(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
    out << to_text();
    if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

double rmse(const PointCloud& x, const PointCloud& y, const TransformRecord& estimated,
            const TransformRecord& ground_truth) {
    if (x.empty() || y.empty()) throw Error(ErrorKind::InvalidInput, "RMSE needs non-empty clouds");
    Eigen::FullPivLU<Mat4> gt_lu(ground_truth.matrix);
    if (!gt_lu.isInvertible() || !Eigen::FullPivLU<Mat4>(estimated.matrix).isInvertible()) {
        throw Error(ErrorKind::InvalidInput, "RMSE needs invertible transforms");
    }
    if (estimated.matrix == ground_truth.matrix) return 0.0;
    const Mat3 gt_rt = ground_truth.matrix.topLeftCorner<3, 3>().transpose();
    const Mat3 delta = gt_rt * estimated.matrix.topLeftCorner<3, 3>() - Mat3::Identity();
    const Vec3 shift = gt_rt * (estimated.matrix.topRightCorner<3, 1>() - ground_truth.matrix.topRightCorner<3, 1>());
    const Mat3 delta_inv = delta.transpose();
    const Vec3 shift_inv = -(delta_inv + Mat3::Identity()) * shift;

    CompensatedSum total;
    for (const auto& p : x.points) total.add((delta_inv * p + shift_inv).squaredNorm());
    for (const auto& p : y.points) total.add((delta * p + shift).squaredNorm());
    return std::sqrt(total.value() / static_cast<double>(x.size() + y.size()));
}

}  // namespace tripreg
