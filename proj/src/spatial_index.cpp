#include "tripreg/spatial_index.hpp"

#include "tripreg/error.hpp"
#include "tripreg/simd/kernels.hpp"

#include <algorithm>
#include <numeric>

namespace tripreg {

KdTree::KdTree(std::span<const Vec3> points, std::size_t leaf_size)
    : points_(points.begin(), points.end()), order_(points.size()), leaf_size_(std::max<std::size_t>(1, leaf_size)) {
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    if (!points_.empty()) {
        nodes_.reserve(2 * points_.size() / leaf_size_ + 1);
        build(0, points_.size());
    }
}

std::size_t KdTree::build(std::size_t begin, std::size_t end) {
    const std::size_t id = nodes_.size();
    nodes_.push_back({begin, end});
    if (end - begin <= leaf_size_) return id;

    Vec3 lo = points_[order_[begin]];
    Vec3 hi = lo;
    for (std::size_t i = begin + 1; i < end; ++i) {
        lo = lo.cwiseMin(points_[order_[i]]);
        hi = hi.cwiseMax(points_[order_[i]]);
    }
    int axis = 0;
    (hi - lo).maxCoeff(&axis);
    if (hi[axis] == lo[axis]) return id;  // all coincident: keep as leaf

    const std::size_t mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + static_cast<std::ptrdiff_t>(begin),
                     order_.begin() + static_cast<std::ptrdiff_t>(mid),
                     order_.begin() + static_cast<std::ptrdiff_t>(end), [&](std::size_t a, std::size_t b) {
                         const double ca = points_[a][axis];
                         const double cb = points_[b][axis];
                         return ca < cb || (ca == cb && a < b);
                     });
    const double split = points_[order_[mid]][axis];
    const std::size_t left = build(begin, mid);
    const std::size_t right = build(mid, end);
    Node& node = nodes_[id];
    node.axis = axis;
    node.split = split;
    node.left = left;
    node.right = right;
    return id;
}

std::vector<Neighbor> KdTree::knn(const Vec3& query, std::size_t k) const {
    std::vector<Neighbor> heap;
    k = std::min(k, points_.size());
    if (k == 0) return heap;
    heap.reserve(k + 1);
    knn_recurse(0, query, k, heap);
    std::sort_heap(heap.begin(), heap.end());
    return heap;
}

void KdTree::knn_recurse(std::size_t id, const Vec3& q, std::size_t k, std::vector<Neighbor>& heap) const {
    const Node& node = nodes_[id];
    if (node.axis < 0) {
        for (std::size_t i = node.begin; i < node.end; ++i) {
            const std::size_t idx = order_[i];
            const Neighbor cand{idx, (points_[idx] - q).squaredNorm()};
            if (heap.size() < k) {
                heap.push_back(cand);
                std::push_heap(heap.begin(), heap.end());
            } else if (cand < heap.front()) {
                std::pop_heap(heap.begin(), heap.end());
                heap.back() = cand;
                std::push_heap(heap.begin(), heap.end());
            }
        }
        return;
    }
    // Points equal to the split value may sit on either side, so the far
    // side is visited whenever the plane distance does not exceed the worst.
    const double diff = q[node.axis] - node.split;
    const std::size_t near = diff < 0.0 ? node.left : node.right;
    const std::size_t far = diff < 0.0 ? node.right : node.left;
    knn_recurse(near, q, k, heap);
    if (heap.size() < k || diff * diff <= heap.front().squared_distance) {
        knn_recurse(far, q, k, heap);
    }
}

std::vector<Neighbor> KdTree::radius(const Vec3& query, double radius) const {
    std::vector<Neighbor> out;
    if (points_.empty() || radius < 0.0) return out;
    radius_recurse(0, query, radius * radius, out);
    std::sort(out.begin(), out.end());
    return out;
}

void KdTree::radius_recurse(std::size_t id, const Vec3& q, double r2, std::vector<Neighbor>& out) const {
    const Node& node = nodes_[id];
    if (node.axis < 0) {
        for (std::size_t i = node.begin; i < node.end; ++i) {
            const std::size_t idx = order_[i];
            const double d2 = (points_[idx] - q).squaredNorm();
            if (d2 <= r2) out.push_back({idx, d2});
        }
        return;
    }
    const double diff = q[node.axis] - node.split;
    const std::size_t near = diff < 0.0 ? node.left : node.right;
    const std::size_t far = diff < 0.0 ? node.right : node.left;
    radius_recurse(near, q, r2, out);
    if (diff * diff <= r2) radius_recurse(far, q, r2, out);
}

DescriptorIndex::DescriptorIndex(std::vector<double> rows, std::size_t dim) : rows_(std::move(rows)), dim_(dim) {
    if (dim_ == 0 || rows_.size() % dim_ != 0) {
        throw Error(ErrorKind::InvalidInput, "descriptor storage is not a whole number of rows");
    }
}

std::vector<Neighbor> DescriptorIndex::knn(std::span<const double> query, std::size_t k) const {
    if (query.size() != dim_) throw Error(ErrorKind::InvalidInput, "descriptor query has wrong dimension");
    const std::size_t n = size();
    std::vector<double> d2(n);
    simd::squared_distances(query, rows_, d2);
    std::vector<Neighbor> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = {i, d2[i]};
    k = std::min(k, n);
    std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k), all.end());
    all.resize(k);
    return all;
}

}  // namespace tripreg
