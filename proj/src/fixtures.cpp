#include "tripreg/fixtures.hpp"

#include "tripreg/error.hpp"

#include <array>
#include <cmath>
#include <random>
#include <string>
#include <vector>

namespace tripreg {
namespace {

Vec3 random_unit(std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vec3 v;
    do {
        v = Vec3(gauss(rng), gauss(rng), gauss(rng));
    } while (v.squaredNorm() < 1e-12);
    return v.normalized();
}

struct Sphere {
    Vec3 center;
    double radius;
};

struct Bump {
    int face;  // 0..5: +x, -x, +y, -y, +z, -z
    double u, v;
    double height;
    double sigma;
};

}  // namespace

PointCloud make_sphere(std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    PointCloud cloud;
    cloud.points.reserve(count);
    cloud.normals.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const Vec3 u = random_unit(rng);
        cloud.points.push_back(u);
        cloud.normals.push_back(u);
    }
    return cloud;
}

PointCloud make_sphere_union(std::size_t count, std::uint64_t seed) {
    const std::array<Sphere, 5> spheres{{
        {{0.0, 0.0, 0.0}, 1.0},
        {{0.9, 0.35, 0.1}, 0.55},
        {{-0.5, 0.8, 0.3}, 0.45},
        {{0.1, -0.6, 0.75}, 0.4},
        {{-0.7, -0.4, -0.6}, 0.5},
    }};
    std::vector<double> areas;
    for (const auto& s : spheres) areas.push_back(s.radius * s.radius);
    std::discrete_distribution<std::size_t> pick(areas.begin(), areas.end());
    std::mt19937_64 rng(seed);

    PointCloud cloud;
    cloud.points.reserve(count);
    cloud.normals.reserve(count);
    while (cloud.size() < count) {
        const std::size_t s = pick(rng);
        const Vec3 u = random_unit(rng);
        const Vec3 p = spheres[s].center + spheres[s].radius * u;
        bool buried = false;
        for (std::size_t o = 0; o < spheres.size() && !buried; ++o) {
            buried = o != s && (p - spheres[o].center).norm() < spheres[o].radius;
        }
        if (buried) continue;
        cloud.points.push_back(p);
        cloud.normals.push_back(u);
    }
    return cloud;
}

PointCloud make_cube_with_bumps(std::size_t count, std::uint64_t seed) {
    const std::array<Bump, 11> bumps{{
        {0, 0.3, -0.2, 0.35, 0.22},
        {0, -0.5, 0.55, 0.2, 0.12},
        {1, -0.1, 0.4, 0.3, 0.3},
        {2, 0.45, 0.45, 0.25, 0.15},
        {2, -0.4, -0.3, 0.4, 0.25},
        {3, 0.0, 0.0, 0.3, 0.35},
        {4, -0.35, 0.25, 0.45, 0.2},
        {4, 0.5, -0.5, 0.15, 0.1},
        {5, 0.2, 0.3, 0.35, 0.18},
        {5, -0.55, -0.4, 0.25, 0.22},
        {1, 0.55, -0.55, 0.2, 0.14},
    }};
    // Face frames: normal, u axis, v axis.
    const std::array<std::array<Vec3, 3>, 6> frames{{
        {Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()},
        {-Vec3::UnitX(), Vec3::UnitZ(), Vec3::UnitY()},
        {Vec3::UnitY(), Vec3::UnitZ(), Vec3::UnitX()},
        {-Vec3::UnitY(), Vec3::UnitX(), Vec3::UnitZ()},
        {Vec3::UnitZ(), Vec3::UnitX(), Vec3::UnitY()},
        {-Vec3::UnitZ(), Vec3::UnitY(), Vec3::UnitX()},
    }};

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> face_pick(0, 5);
    std::uniform_real_distribution<double> coord(-1.0, 1.0);
    PointCloud cloud;
    cloud.points.reserve(count);
    cloud.normals.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const int f = face_pick(rng);
        const double u = coord(rng);
        const double v = coord(rng);
        double h = 0.0, dhdu = 0.0, dhdv = 0.0;
        for (const auto& b : bumps) {
            if (b.face != f) continue;
            const double du = u - b.u;
            const double dv = v - b.v;
            const double g = b.height * std::exp(-(du * du + dv * dv) / (2.0 * b.sigma * b.sigma));
            h += g;
            dhdu += -g * du / (b.sigma * b.sigma);
            dhdv += -g * dv / (b.sigma * b.sigma);
        }
        const auto& [n, eu, ev] = frames[f];
        cloud.points.push_back(n + u * eu + v * ev + h * n);
        cloud.normals.push_back((n - dhdu * eu - dhdv * ev).normalized());
    }
    return cloud;
}

PointCloud make_fixture(std::string_view name, std::size_t count, std::uint64_t seed) {
    if (name == "sphere") return make_sphere(count, seed);
    if (name == "sphere-union") return make_sphere_union(count, seed);
    if (name == "cube-bumps") return make_cube_with_bumps(count, seed);
    throw Error(ErrorKind::InvalidInput, "unknown fixture '" + std::string(name) + "'");
}

}  // namespace tripreg
