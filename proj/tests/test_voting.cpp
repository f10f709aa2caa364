#include "oracles.hpp"
#include "tripreg/error.hpp"
#include "tripreg/voting.hpp"

#include <doctest.h>

#include <numeric>

using namespace tripreg;
using namespace testing;

namespace {

std::array<Vec3, 3> random_triangle(std::mt19937_64& rng) {
    for (;;) {
        std::array<Vec3, 3> t{random_point(rng), random_point(rng), random_point(rng)};
        if (oracle_triangle(t[0], t[1], t[2], deg_to_rad(10.0))) return t;
    }
}

CorrespondenceSet triangle_set(const std::array<Vec3, 3>& src, const std::array<Vec3, 3>& dst) {
    CorrespondenceSet set;
    for (std::size_t i = 0; i < 3; ++i) set.items.push_back(make_correspondence(i, src[i], Vec3::UnitZ(), dst[i], Vec3::UnitZ()));
    return set;
}

}  // namespace

TEST_CASE("identical triangles give the identity") {
    std::mt19937_64 rng(1);
    const auto t = random_triangle(rng);
    const RigidTransform r = estimate_triplet_transform(triangle_set(t, t), {2, 1, 0});
    CHECK((r.matrix() - Mat4::Identity()).norm() < 1e-12);
}

TEST_CASE("planted rotation about Y is recovered") {
    std::mt19937_64 rng(2);
    const RigidTransform g{rotation_about_y(deg_to_rad(20.0)), Vec3(0.3, -0.1, 0.2)};
    const auto src = random_triangle(rng);
    std::array<Vec3, 3> dst;
    for (int i = 0; i < 3; ++i) dst[i] = g.apply(src[i]);
    // The estimate maps the Y side (dst) onto the X side (src): g^-1.
    const RigidTransform r = estimate_triplet_transform(triangle_set(src, dst), {2, 1, 0});
    CHECK((r.rotation - rotation_about_y(deg_to_rad(-20.0))).norm() < 1e-9);
    CHECK((r.matrix() - g.inverse().matrix()).norm() < 1e-9);
}

TEST_CASE("reflected triangles still give a proper rotation") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 50; ++t) {
        const auto src = random_triangle(rng);
        std::array<Vec3, 3> dst;
        for (int i = 0; i < 3; ++i) dst[i] = Vec3(-src[i].x(), src[i].y(), src[i].z());
        const RigidTransform r = estimate_rigid_transform(src, dst);
        CHECK(r.rotation.determinant() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(r.is_valid(1e-9));
    }
}

TEST_CASE("collinear triplets are degenerate") {
    const std::array<Vec3, 3> line{Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(2, 0, 0)};
    std::mt19937_64 rng(4);
    const auto tri = random_triangle(rng);
    CHECK_THROWS_AS(estimate_rigid_transform(line, tri), Error);
    CHECK_THROWS_AS(estimate_rigid_transform(tri, line), Error);
}

TEST_CASE("vote collection counts non-degenerate triplets") {
    std::mt19937_64 rng(5);
    RigidTransform m;
    CorrespondenceSet set = planted_set(rng, 12, 0, 0.0, &m);
    // Two extra correspondences collinear with the first one on the X side.
    const Vec3 base = set[0].src_position, dir = random_unit(rng);
    for (int s = 1; s <= 2; ++s) {
        auto c = make_correspondence(set.size(), base + 0.3 * s * dir, Vec3::UnitZ(), random_point(rng), Vec3::UnitZ());
        set.items.push_back(c);
    }
    std::vector<Triplet> triplets;
    std::size_t degenerate = 0;
    for (std::size_t i = 0; i < set.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            for (std::size_t k = 0; k < j; ++k) {
                triplets.push_back({i, j, k});
                if (i == 13 && j == 12 && k == 0) ++degenerate;
            }
        }
    }
    const VoteCollection votes = collect_votes(set, triplets);
    CHECK(votes.degenerate_triplets == degenerate);
    CHECK(votes.rotations.size() == triplets.size() - degenerate);
    CHECK(votes.translations.size() == votes.rotations.size());

    const VoteCollection one = collect_votes(set, std::vector<Triplet>{{2, 1, 0}});
    CHECK(one.rotations.size() == 1);
    CHECK((one.rotations.vectors[0] - rotation_to_vector(m.rotation).r).norm() < 1e-9);
    CHECK((one.translations.vectors[0] - m.translation).norm() < 1e-9);

    CHECK_THROWS_AS(collect_votes(set, std::vector<Triplet>{{13, 12, 0}}), Error);
}

TEST_CASE("decorrelation of degenerate and rank-one vote sets") {
    VoteSet same{VoteKind::Translation, std::vector<Vec3>(10, Vec3(1, 2, 3))};
    const auto f = decorrelate(same);
    CHECK(f.identity_fallback);
    CHECK(f.basis == Mat3::Identity());
    CHECK(f.transformed[1][4] == 2.0);

    VoteSet line{VoteKind::Translation, {}};
    for (int i = 0; i < 40; ++i) line.vectors.push_back(0.1 * i * Vec3(1, 1, 1).normalized() + Vec3(0.5, 0, 0));
    const auto g = decorrelate(line);
    CHECK_FALSE(g.identity_fallback);
    CHECK(std::abs(std::abs(g.basis.col(0).dot(Vec3(1, 1, 1).normalized())) - 1.0) < 1e-6);

    std::mt19937_64 rng(6);
    VoteSet cloud{VoteKind::Rotation, random_points(rng, 300)};
    const auto h = decorrelate(cloud);
    CHECK((h.basis.transpose() * h.basis - Mat3::Identity()).norm() < 1e-12);
    CHECK(h.basis.determinant() == doctest::Approx(1.0));
    CHECK(h.variances[0] >= h.variances[1]);
    CHECK(h.variances[1] >= h.variances[2]);
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const Vec3 coords(h.transformed[0][i], h.transformed[1][i], h.transformed[2][i]);
        CHECK((h.restore(coords) - cloud.vectors[i]).norm() < 1e-12);
    }
}

TEST_CASE("quantiles and Freedman-Diaconis width") {
    const std::vector<double> v{1, 2, 3, 4, 5, 6, 7, 8};
    CHECK(quantile_sorted(v, 0.5) == 4.5);
    CHECK(quantile_sorted(v, 0.25) == doctest::Approx(2.75));
    CHECK(quantile_sorted(v, 0.75) == doctest::Approx(6.25));
    CHECK(freedman_diaconis_width(v) == doctest::Approx(2.0 * 3.5 / 2.0));
}

TEST_CASE("histogram binning around the median anchor") {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> g(3.0, 2.0);
    std::vector<double> v(999);
    for (auto& x : v) x = g(rng);
    std::vector<double> sorted = v;
    std::sort(sorted.begin(), sorted.end());
    const double h = freedman_diaconis_width(v);
    const double med = quantile_sorted(sorted, 0.5);
    const std::size_t b = covering_bin_count(v, h, med);
    const VoteHistogram hist = build_histogram(v, h, b);
    CHECK(hist.discarded == 0);
    CHECK(std::accumulate(hist.counts.begin(), hist.counts.end(), std::size_t{0}) == v.size());
    for (double x : v) {
        const long bin = hist.bin_of(x);
        CHECK(bin == static_cast<long>(std::floor(x / h - med / h + static_cast<double>(b / 2))));
    }
    const VoteHistogram small = build_histogram(v, h, 4);
    CHECK(small.discarded > 0);
    CHECK(small.discarded + std::accumulate(small.counts.begin(), small.counts.end(), std::size_t{0}) == v.size());
}

TEST_CASE("mode of constant and single-value samples") {
    const std::vector<double> same(50, 1.25);
    const auto m = histogram_mode(same, 1);
    CHECK(m.value == 1.25);
    CHECK(m.zero_width);
    CHECK(histogram_mode(std::vector<double>{-0.5}, 1).value == -0.5);
    CHECK_THROWS_AS(histogram_mode(std::vector<double>{}, 1), Error);
}

TEST_CASE("mode of a two-cluster mixture") {
    std::mt19937_64 rng(9);
    std::normal_distribution<double> a(0.0, 0.01), b(5.0, 0.01);
    std::vector<double> v;
    for (int i = 0; i < 700; ++i) v.push_back(a(rng));
    for (int i = 0; i < 300; ++i) v.push_back(b(rng));
    std::shuffle(v.begin(), v.end(), rng);
    const auto m = histogram_mode(v, 1);
    CHECK(std::abs(m.value) < 0.02);
    CHECK(m.histogram.discarded == 0);
    CHECK(m.selects(m.value));
    CHECK_FALSE(m.selects(5.0));
}

TEST_CASE("canonicalisation keeps the rotation and flips to the median side") {
    std::mt19937_64 rng(10);
    std::vector<Vec3> votes;
    const Vec3 axis = random_unit(rng);
    for (int i = 0; i < 20; ++i) votes.push_back(2.8 * axis);
    votes.push_back(-3.0 * axis);
    const Mat3 before = vector_to_rotation({votes.back()});
    const std::size_t n = canonicalize_rotation_votes(votes);
    CHECK(n == 1);
    CHECK((votes.back() - (2.0 * kPi - 3.0) * axis).norm() < 1e-12);
    CHECK((vector_to_rotation({votes.back()}) - before).norm() < 1e-12);
}

TEST_CASE("pose from exact and single votes") {
    std::mt19937_64 rng(11);
    const RigidTransform g = random_transform(rng, 2.0);
    const Vec3 r = rotation_to_vector(g.rotation).r;
    const VoteSet rot{VoteKind::Rotation, std::vector<Vec3>(30, r)};
    const VoteSet tr{VoteKind::Translation, std::vector<Vec3>(30, g.translation)};
    const auto pose = estimate_pose(rot, tr, 1);
    CHECK((pose.rotation_vector - r).norm() < 1e-12);
    CHECK((pose.transform.translation - g.translation).norm() < 1e-12);
    CHECK(pose.consensus == 1.0);

    const auto single = estimate_pose(VoteSet{VoteKind::Rotation, {r}}, VoteSet{VoteKind::Translation, {g.translation}}, 1);
    CHECK(single.rotation_vector == r);
    CHECK(single.transform.translation == g.translation);

    CHECK_THROWS_AS(estimate_pose(rot, VoteSet{VoteKind::Translation, {g.translation}}, 1), Error);
}

TEST_CASE("pose from 70 percent inlier votes") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::normal_distribution<double> noise(0.0, 1e-3);
    auto in_ball = [&](double radius) {
        return random_unit(rng) * radius * std::cbrt(u(rng));
    };
    for (int trial = 0; trial < 20; ++trial) {
        const RigidTransform g = random_transform(rng, 1.0);
        const Vec3 r = rotation_to_vector(g.rotation).r;
        VoteSet rot{VoteKind::Rotation, {}}, tr{VoteKind::Translation, {}};
        for (int i = 0; i < 2000; ++i) {
            if (i % 10 < 7) {
                rot.vectors.push_back(r + Vec3(noise(rng), noise(rng), noise(rng)));
                tr.vectors.push_back(g.translation + Vec3(noise(rng), noise(rng), noise(rng)));
            } else {
                rot.vectors.push_back(in_ball(kPi));
                tr.vectors.push_back(in_ball(2.0));
            }
        }
        const auto pose = estimate_pose(rot, tr, 1);
        CHECK(rad_to_deg(rotation_angle_between(pose.transform.rotation, g.rotation)) < 1.0);
        CHECK((pose.transform.translation - g.translation).norm() < 0.05 * std::max(1.0, g.translation.norm()));
    }
}
