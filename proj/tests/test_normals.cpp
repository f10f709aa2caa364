#include "support.hpp"
#include "tripreg/error.hpp"
#include "tripreg/fixtures.hpp"
#include "tripreg/keypoints.hpp"
#include "tripreg/normals.hpp"

#include <doctest.h>

using namespace tripreg;
using namespace testing;

namespace {

// Eigenvalues of a symmetric 3x3 matrix from the trigonometric solution of
// its characteristic polynomial, descending.
Vec3 characteristic_eigenvalues(const Mat3& a) {
    const double p1 = a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2);
    const double q = a.trace() / 3.0;
    const double p2 = (a(0, 0) - q) * (a(0, 0) - q) + (a(1, 1) - q) * (a(1, 1) - q) +
                      (a(2, 2) - q) * (a(2, 2) - q) + 2.0 * p1;
    if (p2 == 0.0) return Vec3(q, q, q);
    const double p = std::sqrt(p2 / 6.0);
    const Mat3 b = (a - q * Mat3::Identity()) / p;
    const double r = std::clamp(b.determinant() / 2.0, -1.0, 1.0);
    const double phi = std::acos(r) / 3.0;
    const double e1 = q + 2.0 * p * std::cos(phi);
    const double e3 = q + 2.0 * p * std::cos(phi + 2.0 * kPi / 3.0);
    return Vec3(e1, 3.0 * q - e1 - e3, e3);
}

double oracle_curvature(const std::vector<Vec3>& pts, std::size_t i, std::size_t k) {
    Mat3 cov = Mat3::Zero();
    const auto nbrs = brute_knn(pts, pts[i], k);
    for (auto j : nbrs) cov += (pts[j] - pts[i]) * (pts[j] - pts[i]).transpose();
    cov /= static_cast<double>(nbrs.size());
    const Vec3 ev = characteristic_eigenvalues(cov);
    const double sum = ev.sum();
    return sum > 0.0 ? std::max(ev[2], 0.0) / sum : 0.0;
}

double oracle_median_nn(const std::vector<Vec3>& pts) {
    std::vector<double> d;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < pts.size(); ++j) {
            if (j != i) best = std::min(best, (pts[i] - pts[j]).norm());
        }
        d.push_back(best);
    }
    std::sort(d.begin(), d.end());
    const std::size_t n = d.size();
    return n % 2 ? d[n / 2] : 0.5 * (d[n / 2 - 1] + d[n / 2]);
}

}  // namespace

TEST_CASE("plane grid normals face the viewpoint") {
    const PointCloud plane = grid_plane(10, 10, 1.0);
    const PointCloud out = estimate_normals(plane, 20, Vec3(0, 0, 1));
    for (const auto& n : out.normals) CHECK((n - Vec3(0, 0, 1)).norm() < 1e-6);
    const PointCloud down = estimate_normals(plane, 20, Vec3(4, 4, -10));
    for (const auto& n : down.normals) CHECK((n - Vec3(0, 0, -1)).norm() < 1e-6);
    const PointCloud fallback = estimate_normals(plane, 20);
    for (const auto& n : fallback.normals) CHECK(n.z() == doctest::Approx(1.0));
}

TEST_CASE("normal estimation preconditions") {
    PointCloud two(std::vector<Vec3>{Vec3::Zero(), Vec3::UnitX()});
    CHECK_THROWS_AS(estimate_normals(two, 20), Error);
    const PointCloud small = grid_plane(3, 3, 1.0);
    CHECK_THROWS_AS(estimate_normals(small, 20), Error);
    CHECK_THROWS_AS(estimate_normals(small, 2), Error);
}

TEST_CASE("sphere normals point inward towards an interior viewpoint") {
    const PointCloud sphere = make_sphere(500, 17);
    const PointCloud out = estimate_normals(sphere, 10, Vec3::Zero());
    for (std::size_t i = 0; i < out.size(); ++i) CHECK(out.normals[i].dot(sphere.points[i]) < 0.0);
}

TEST_CASE("dense sphere normals match the analytic radial direction") {
    const PointCloud sphere = make_sphere(20000, 17);
    const PointCloud out = estimate_normals(sphere, 10, Vec3::Zero());
    double worst = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        worst = std::max(worst, rad_to_deg(angle_between(out.normals[i], -sphere.points[i])));
    }
    CHECK(worst < 5.0);
}

TEST_CASE("normals are equivariant under rigid motion") {
    std::mt19937_64 rng(19);
    PointCloud base = make_cube_with_bumps(3000, 2);
    base.normals.clear();
    base.viewpoint = Vec3(0.5, -0.2, 6.0);
    const PointCloud a = estimate_normals(base, 20);
    for (int t = 0; t < 10; ++t) {
        const RigidTransform m = random_transform(rng, 4.0);
        const PointCloud b = estimate_normals(apply_transform(m, base), 20);
        for (std::size_t i = 0; i < a.size(); ++i) CHECK((b.normals[i] - m.rotation * a.normals[i]).norm() < 1e-6);
        CHECK(compute_medD(a, a) == doctest::Approx(compute_medD(apply_transform(m, a), a)).epsilon(1e-12));
    }
}

TEST_CASE("coincident neighbourhoods are flagged as degenerate") {
    PointCloud c;
    for (int i = 0; i < 25; ++i) c.points.push_back(Vec3(1, 2, 3));
    for (int i = 0; i < 25; ++i) c.points.emplace_back(i, i * i, 0.5 * i);
    const PointCloud out = estimate_normals(c, 20);
    CHECK(out.degenerate.size() >= 20);
    for (auto i : out.degenerate) CHECK(out.normals[i] == Vec3::UnitZ());
    const PointCloud curv = compute_curvatures(out);
    for (auto i : out.degenerate) CHECK(curv.curvatures[i] == 0.0);
}

TEST_CASE("medD on grids") {
    const PointCloud a = grid_plane(10, 10, 1.0);
    const PointCloud b = grid_plane(10, 10, 3.0);
    CHECK(compute_medD(a, a) == doctest::Approx(1.0));
    CHECK(compute_medD(a, b) == doctest::Approx(2.0));
}

TEST_CASE("medD equals an all-pairs scan") {
    std::mt19937_64 rng(31);
    for (std::size_t n : {1000, 999}) {
        const auto x = random_points(rng, n);
        const auto y = random_points(rng, 1000, 3.0);
        const double want = 0.5 * (oracle_median_nn(x) + oracle_median_nn(y));
        CHECK(compute_medD(PointCloud(x), PointCloud(y)) == doctest::Approx(want).epsilon(1e-14));
    }
}

TEST_CASE("curvature matches a characteristic-polynomial eigenvalue oracle") {
    std::mt19937_64 rng(41);
    const auto pts = random_points(rng, 800);
    const PointCloud c = compute_curvatures(estimate_normals(PointCloud(pts), 20));
    for (std::size_t i = 0; i < pts.size(); ++i) {
        CHECK(c.curvatures[i] == doctest::Approx(oracle_curvature(pts, i, 20)).epsilon(1e-9).scale(1e-12));
        CHECK(c.curvatures[i] <= 1.0 / 3.0 + 1e-12);
        CHECK(c.curvatures[i] >= 0.0);
    }
    CHECK_NOTHROW(c.validate());
}

TEST_CASE("plane curvature vanishes") {
    const PointCloud c = compute_curvatures(estimate_normals(grid_plane(12, 12, 0.5), 20, Vec3(0, 0, 1)));
    for (double s : c.curvatures) CHECK(std::abs(s) < 1e-6);
}

TEST_CASE("curvature requires cached eigenvalues") {
    CHECK_THROWS_AS(compute_curvatures(grid_plane(4, 4, 1.0)), Error);
}
