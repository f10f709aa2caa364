#pragma once

#include "tripreg/geometry.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace tripreg {

struct Neighbor {
    std::size_t index = 0;
    double squared_distance = 0.0;

    friend bool operator<(const Neighbor& a, const Neighbor& b) {
        if (a.squared_distance != b.squared_distance) return a.squared_distance < b.squared_distance;
        return a.index < b.index;
    }
    friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// Exact kd-tree over 3D points. Results are ordered by (distance, index),
/// so ties resolve to the lower index exactly as a linear scan would.
class KdTree {
public:
    explicit KdTree(std::span<const Vec3> points, std::size_t leaf_size = 12);

    std::size_t size() const noexcept { return points_.size(); }
    const Vec3& point(std::size_t i) const { return points_[i]; }

    /// The min(k, size()) nearest points.
    std::vector<Neighbor> knn(const Vec3& query, std::size_t k) const;

    /// All points with |p - query| <= radius.
    std::vector<Neighbor> radius(const Vec3& query, double radius) const;

private:
    struct Node {
        std::size_t begin = 0;
        std::size_t end = 0;
        int axis = -1;  // -1 marks a leaf
        double split = 0.0;
        std::size_t left = 0;
        std::size_t right = 0;
    };

    std::size_t build(std::size_t begin, std::size_t end);
    void knn_recurse(std::size_t node, const Vec3& q, std::size_t k, std::vector<Neighbor>& heap) const;
    void radius_recurse(std::size_t node, const Vec3& q, double r2, std::vector<Neighbor>& out) const;

    std::vector<Vec3> points_;
    std::vector<std::size_t> order_;
    std::vector<Node> nodes_;
    std::size_t leaf_size_;
};

/// Exact k-nearest-neighbour search in a d-dimensional feature space
/// (row-major storage) using the dispatched squared-distance kernel.
class DescriptorIndex {
public:
    DescriptorIndex(std::vector<double> rows, std::size_t dim);

    std::size_t size() const noexcept { return dim_ == 0 ? 0 : rows_.size() / dim_; }
    std::size_t dim() const noexcept { return dim_; }

    std::vector<Neighbor> knn(std::span<const double> query, std::size_t k) const;

private:
    std::vector<double> rows_;
    std::size_t dim_;
};

}  // namespace tripreg
