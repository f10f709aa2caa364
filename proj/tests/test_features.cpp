#include "support.hpp"
#include "tripreg/error.hpp"
#include "tripreg/features.hpp"
#include "tripreg/fixtures.hpp"
#include "tripreg/keypoints.hpp"
#include "tripreg/normals.hpp"
#include "tripreg/spatial_index.hpp"

#include <doctest.h>

#include <numeric>

using namespace tripreg;
using namespace testing;

namespace {

PointCloud prepared(const PointCloud& c, std::size_t k = 20) {
    return compute_curvatures(estimate_normals(c, k));
}

std::vector<Keypoint> all_keypoints(const PointCloud& c) {
    return detect_keypoints(c, c.size());
}

}  // namespace

TEST_CASE("keypoints cover the cloud in descending curvature order") {
    std::mt19937_64 rng(1);
    const PointCloud c = prepared(PointCloud(random_points(rng, 300)));
    const auto kp = all_keypoints(c);
    REQUIRE(kp.size() == c.size());
    for (std::size_t i = 1; i < kp.size(); ++i) {
        CHECK(kp[i - 1].curvature >= kp[i].curvature);
        if (kp[i - 1].curvature == kp[i].curvature) CHECK(kp[i - 1].index < kp[i].index);
    }
    for (const auto& k : kp) {
        CHECK(k.curvature == c.curvatures[k.index]);
        CHECK(k.position == c.points[k.index]);
    }
    CHECK_THROWS_AS(detect_keypoints(c, 0), Error);
    CHECK_THROWS_AS(detect_keypoints(c, c.size() + 1), Error);
}

TEST_CASE("a spike on a plane is the strongest keypoint") {
    PointCloud c = grid_plane(15, 15, 1.0);
    c.points.emplace_back(7.0, 7.0, 2.0);
    const PointCloud p = prepared(c);
    std::size_t best = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p.curvatures[i] > p.curvatures[best]) best = i;
    }
    const auto kp = detect_keypoints(p, 1);
    REQUIRE(kp.size() == 1);
    CHECK(kp[0].index == best);
    CHECK((p.points[best] - Vec3(7, 7, 0)).norm() < 2.0 + 1e-9);
}

TEST_CASE("PPF of perpendicular geometry") {
    const auto f = compute_ppf(Vec3::Zero(), Vec3::UnitZ(), Vec3::UnitX(), Vec3::UnitZ());
    CHECK(f.distance == doctest::Approx(1.0));
    CHECK(f.normal1_angle == doctest::Approx(kPi / 2));
    CHECK(f.normal2_angle == doctest::Approx(kPi / 2));
    CHECK(f.normals_angle == doctest::Approx(0.0));
    CHECK_THROWS_AS(compute_ppf(Vec3::UnitX(), Vec3::UnitZ(), Vec3::UnitX(), Vec3::UnitY()), Error);
    CHECK_FALSE(try_compute_ppf(Vec3::UnitX(), Vec3::UnitZ(), Vec3::UnitX(), Vec3::UnitY()).has_value());
}

TEST_CASE("PPF matches clamped acos angles and is rigid-invariant") {
    std::mt19937_64 rng(9);
    for (int t = 0; t < 1000; ++t) {
        const Vec3 p1 = random_point(rng), p2 = random_point(rng);
        const Vec3 n1 = random_unit(rng), n2 = random_unit(rng);
        const auto f = compute_ppf(p1, n1, p2, n2);
        const Vec3 d = p2 - p1;
        CHECK(std::abs(f.distance - d.norm()) < 1e-12);
        CHECK(std::abs(f.normal1_angle - clamped_acos_angle(n1, d)) < 1e-9);
        CHECK(std::abs(f.normal2_angle - clamped_acos_angle(n2, d)) < 1e-9);
        CHECK(std::abs(f.normals_angle - clamped_acos_angle(n1, n2)) < 1e-9);

        const RigidTransform m = random_transform(rng, 10.0);
        const auto g = compute_ppf(m.apply(p1), m.rotation * n1, m.apply(p2), m.rotation * n2);
        CHECK(std::abs(f.distance - g.distance) < 1e-9);
        CHECK(std::abs(f.normal1_angle - g.normal1_angle) < 1e-9);
        CHECK(std::abs(f.normal2_angle - g.normal2_angle) < 1e-9);
        CHECK(std::abs(f.normals_angle - g.normals_angle) < 1e-9);
    }
}

TEST_CASE("Darboux features are symmetric in the pair") {
    std::mt19937_64 rng(10);
    for (int t = 0; t < 200; ++t) {
        const Vec3 p1 = random_point(rng), p2 = random_point(rng);
        const Vec3 n1 = random_unit(rng), n2 = random_unit(rng);
        const auto a = darboux_features(p1, n1, p2, n2);
        const auto b = darboux_features(p2, n2, p1, n1);
        REQUIRE(a.has_value());
        REQUIRE(b.has_value());
        for (int i = 0; i < 3; ++i) CHECK((*a)[i] == doctest::Approx((*b)[i]).epsilon(1e-12));
        CHECK(std::abs((*a)[0]) <= kPi);
        CHECK(std::abs((*a)[1]) <= 1.0);
        CHECK(std::abs((*a)[2]) <= 1.0);
    }
    CHECK_FALSE(darboux_features(Vec3::Zero(), Vec3::UnitZ(), Vec3::Zero(), Vec3::UnitX()).has_value());
}

TEST_CASE("FPFH blocks are normalised histograms") {
    const PointCloud c = prepared(make_cube_with_bumps(4000, 3));
    auto kp = compute_fpfh(c, detect_keypoints(c, 50), 0.3);
    for (const auto& k : kp) {
        REQUIRE_FALSE(k.descriptor.isolated);
        for (std::size_t b = 0; b < 3; ++b) {
            double s = 0.0;
            for (std::size_t i = 0; i < kFpfhBinsPerFeature; ++i) {
                const double v = k.descriptor.bins[b * kFpfhBinsPerFeature + i];
                CHECK(v >= 0.0);
                s += v;
            }
            CHECK(s == doctest::Approx(100.0));
        }
    }
}

TEST_CASE("FPFH is invariant under rigid motion") {
    PointCloud base = make_cube_with_bumps(3000, 4);
    base.normals.clear();
    base.viewpoint = Vec3(0.3, 0.2, 5.0);
    const PointCloud a = prepared(base);
    const auto ka = compute_fpfh(a, detect_keypoints(a, 60), 0.25);
    std::mt19937_64 rng(12);
    for (int t = 0; t < 5; ++t) {
        const RigidTransform m = random_transform(rng, 3.0);
        const PointCloud b = prepared(apply_transform(m, base));
        std::vector<Keypoint> kb;
        for (const auto& k : ka) {
            Keypoint q;
            q.index = k.index;
            q.position = b.points[k.index];
            q.normal = b.normals[k.index];
            kb.push_back(q);
        }
        kb = compute_fpfh(b, kb, 0.25);
        for (std::size_t i = 0; i < ka.size(); ++i) {
            const auto& bins = ka[i].descriptor.bins;
            const double norm = std::sqrt(std::inner_product(bins.begin(), bins.end(), bins.begin(), 0.0));
            CHECK(ka[i].descriptor.distance(kb[i].descriptor) <= 1e-6 * norm);
        }
    }
}

TEST_CASE("plane and corner descriptors differ") {
    PointCloud c = grid_plane(30, 30, 0.1);
    for (int i = 1; i < 30; ++i) {
        for (int j = 0; j < 30; ++j) c.points.emplace_back(0.0, j * 0.1, i * 0.1);
    }
    const PointCloud p = prepared(c, 12);
    std::vector<Keypoint> kp(2);
    kp[0].index = 15 * 30 + 15;   // middle of the floor
    kp[1].index = 15;             // on the crease
    for (auto& k : kp) {
        k.position = p.points[k.index];
        k.normal = p.normals[k.index];
    }
    kp = compute_fpfh(p, kp, 0.35);
    CHECK(kp[0].descriptor.distance(kp[1].descriptor) > 1.0);
}

TEST_CASE("isolated keypoints get a flagged zero descriptor") {
    PointCloud c = grid_plane(5, 5, 1.0);
    const PointCloud p = prepared(c, 5);
    std::vector<Keypoint> kp(1);
    kp[0].index = 12;
    kp[0].position = p.points[12];
    kp[0].normal = p.normals[12];
    const KdTree tree(p.points);
    kp = compute_fpfh(p, tree, kp, 0.5);
    CHECK(kp[0].descriptor.isolated);
    for (double v : kp[0].descriptor.bins) CHECK(v == 0.0);
}
