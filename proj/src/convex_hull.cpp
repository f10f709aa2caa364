#include "tripreg/convex_hull.hpp"

#include "tripreg/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

namespace tripreg {
namespace {

struct Face {
    std::array<std::size_t, 3> v{};
    // adj[e] is the face across edge v[e] -> v[(e + 1) % 3].
    std::array<std::size_t, 3> adj{};
    Vec3 normal = Vec3::Zero();
    double offset = 0.0;
    std::vector<std::size_t> outside;
    bool alive = true;
    std::size_t visit = 0;
};

class QuickHull {
public:
    explicit QuickHull(std::span<const Vec3> pts) : pts_(pts) {
        double scale = 0.0;
        for (int a = 0; a < 3; ++a) {
            double m = 0.0;
            for (const auto& p : pts_) m = std::max(m, std::abs(p[a]));
            scale += m;
        }
        eps_ = 3.0 * std::numeric_limits<double>::epsilon() * scale;
    }

    ConvexHull run() {
        initial_simplex();
        std::vector<std::size_t> stack;
        for (std::size_t f = 0; f < faces_.size(); ++f) stack.push_back(f);
        while (!stack.empty()) {
            const std::size_t f = stack.back();
            stack.pop_back();
            if (!faces_[f].alive || faces_[f].outside.empty()) continue;
            for (std::size_t nf : add_point(f)) stack.push_back(nf);
        }

        ConvexHull hull;
        std::vector<char> on_hull(pts_.size(), 0);
        for (const auto& face : faces_) {
            if (!face.alive) continue;
            hull.faces.push_back(face.v);
            for (auto v : face.v) on_hull[v] = 1;
        }
        for (std::size_t i = 0; i < pts_.size(); ++i) {
            if (on_hull[i]) hull.vertices.push_back(i);
        }
        return hull;
    }

private:
    double distance(const Face& f, std::size_t p) const { return f.normal.dot(pts_[p]) - f.offset; }

    std::size_t make_face(std::size_t a, std::size_t b, std::size_t c) {
        Face f;
        f.v = {a, b, c};
        const Vec3 n = (pts_[b] - pts_[a]).cross(pts_[c] - pts_[a]);
        f.normal = n.normalized();
        f.offset = f.normal.dot(pts_[a]);
        faces_.push_back(std::move(f));
        return faces_.size() - 1;
    }

    void initial_simplex() {
        const std::size_t n = pts_.size();
        if (n < 4) throw Error(ErrorKind::InvalidInput, "convex hull needs at least 4 points");

        std::array<std::size_t, 6> extremes{};
        for (int a = 0; a < 3; ++a) {
            for (std::size_t i = 0; i < n; ++i) {
                if (pts_[i][a] < pts_[extremes[2 * a]][a]) extremes[2 * a] = i;
                if (pts_[i][a] > pts_[extremes[2 * a + 1]][a]) extremes[2 * a + 1] = i;
            }
        }
        std::size_t i0 = 0, i1 = 0;
        double best = -1.0;
        for (auto a : extremes) {
            for (auto b : extremes) {
                const double d = (pts_[a] - pts_[b]).squaredNorm();
                if (d > best) {
                    best = d;
                    i0 = a;
                    i1 = b;
                }
            }
        }
        const Vec3 dir = (pts_[i1] - pts_[i0]).normalized();
        std::size_t i2 = i0;
        best = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            const Vec3 d = pts_[i] - pts_[i0];
            const double dist = (d - d.dot(dir) * dir).squaredNorm();
            if (dist > best) {
                best = dist;
                i2 = i;
            }
        }
        const Vec3 pn = (pts_[i1] - pts_[i0]).cross(pts_[i2] - pts_[i0]).normalized();
        std::size_t i3 = i0;
        best = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double dist = std::abs(pn.dot(pts_[i] - pts_[i0]));
            if (dist > best) {
                best = dist;
                i3 = i;
            }
        }
        if (!(best > eps_) || !pn.allFinite()) {
            throw Error(ErrorKind::InvalidInput, "convex hull input is degenerate (coplanar)");
        }

        // Orient so the fourth vertex lies below the base.
        if (pn.dot(pts_[i3] - pts_[i0]) > 0.0) std::swap(i1, i2);
        const std::size_t f0 = make_face(i0, i1, i2);
        const std::size_t f1 = make_face(i0, i3, i1);
        const std::size_t f2 = make_face(i1, i3, i2);
        const std::size_t f3 = make_face(i2, i3, i0);
        faces_[f0].adj = {f1, f2, f3};
        faces_[f1].adj = {f3, f2, f0};
        faces_[f2].adj = {f1, f3, f0};
        faces_[f3].adj = {f2, f1, f0};

        for (std::size_t i = 0; i < n; ++i) {
            if (i == i0 || i == i1 || i == i2 || i == i3) continue;
            for (std::size_t f = 0; f < 4; ++f) {
                if (distance(faces_[f], i) > eps_) {
                    faces_[f].outside.push_back(i);
                    break;
                }
            }
        }
    }

    std::vector<std::size_t> add_point(std::size_t start) {
        const Face& sf = faces_[start];
        std::size_t apex = sf.outside.front();
        double far = distance(sf, apex);
        for (auto p : sf.outside) {
            const double d = distance(sf, p);
            if (d > far) {
                far = d;
                apex = p;
            }
        }

        // Flood the faces visible from the apex and record the horizon.
        ++stamp_;
        struct HorizonEdge {
            std::size_t a, b, across;
        };
        std::vector<HorizonEdge> horizon;
        std::vector<std::size_t> visible{start};
        faces_[start].visit = stamp_;
        std::vector<std::size_t> todo{start};
        while (!todo.empty()) {
            const std::size_t f = todo.back();
            todo.pop_back();
            for (int e = 0; e < 3; ++e) {
                const std::size_t g = faces_[f].adj[e];
                if (faces_[g].visit == stamp_) continue;
                if (distance(faces_[g], apex) > eps_) {
                    faces_[g].visit = stamp_;
                    visible.push_back(g);
                    todo.push_back(g);
                } else {
                    horizon.push_back({faces_[f].v[e], faces_[f].v[(e + 1) % 3], g});
                }
            }
        }

        std::vector<std::size_t> created;
        std::unordered_map<std::size_t, std::size_t> by_start, by_end;
        for (const auto& h : horizon) {
            const std::size_t nf = make_face(h.a, h.b, apex);
            created.push_back(nf);
            by_start[h.a] = nf;
            by_end[h.b] = nf;
            faces_[nf].adj[0] = h.across;
            Face& other = faces_[h.across];
            for (int e = 0; e < 3; ++e) {
                if (other.v[e] == h.b && other.v[(e + 1) % 3] == h.a) other.adj[e] = nf;
            }
        }
        for (auto nf : created) {
            Face& f = faces_[nf];
            // edge b -> apex borders the face starting at b; apex -> a the face ending at a
            f.adj[1] = by_start.at(f.v[1]);
            f.adj[2] = by_end.at(f.v[0]);
        }

        for (auto vf : visible) {
            Face& f = faces_[vf];
            f.alive = false;
            for (auto p : f.outside) {
                if (p == apex) continue;
                for (auto nf : created) {
                    if (distance(faces_[nf], p) > eps_) {
                        faces_[nf].outside.push_back(p);
                        break;
                    }
                }
            }
            f.outside.clear();
            f.outside.shrink_to_fit();
        }
        return created;
    }

    std::span<const Vec3> pts_;
    std::vector<Face> faces_;
    double eps_ = 0.0;
    std::size_t stamp_ = 0;
};

}  // namespace

ConvexHull convex_hull(std::span<const Vec3> points) { return QuickHull(points).run(); }

}  // namespace tripreg
