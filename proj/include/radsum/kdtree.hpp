#pragma once
// Bucketed kd-tree over a point set under an L_p norm. Supports the two
// queries the accelerated path needs: nearest neighbor excluding the query
// point itself, and enumeration of all balls overlapping a given ball, with
// pruning by per-subtree maximum radius.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "radsum/metric.hpp"

namespace radsum {

class KdTree {
  public:
    KdTree(const MetricInstance& inst, int leaf_size = 16)
        : inst_(inst), dim_(inst.dimension()), leaf_size_(std::max(1, leaf_size)) {
        if (!inst.has_coordinates())
            throw std::invalid_argument("KdTree: coordinate instance required");
        const int n = inst.size();
        order_.resize(n);
        std::iota(order_.begin(), order_.end(), 0);
        nodes_.reserve(2 * n / leaf_size_ + 4);
        root_ = build(0, n);
    }

    // Index and distance of the nearest point other than `self`.
    std::pair<int, double> nearest_excluding(int self) const {
        int best = -1;
        double best_d = std::numeric_limits<double>::infinity();
        nn_search(root_, inst_.point(self), self, best, best_d);
        return {best, best_d};
    }

    // Per-point radii for overlap queries; computes subtree maxima.
    void attach_radii(std::span<const double> radii) {
        if (static_cast<int>(radii.size()) != inst_.size())
            throw std::invalid_argument("KdTree: radii size mismatch");
        radii_.assign(radii.begin(), radii.end());
        fill_max_radius(root_);
    }

    // All j != i with d(i, j) <= r_i + r_j (touching included).
    void overlapping(int i, std::vector<int>& out) const {
        out.clear();
        overlap_search(root_, inst_.point(i), i, radii_[i], out);
    }

  private:
    struct Node {
        int begin, end;           // range in order_
        int left = -1, right = -1;
        int bbox = 0;             // offset into bounds_ (2 * dim doubles: lo, hi)
        double max_radius = 0.0;
    };

    int build(int begin, int end) {
        const int id = static_cast<int>(nodes_.size());
        nodes_.push_back({begin, end});
        const int bbox = static_cast<int>(bounds_.size());
        nodes_[id].bbox = bbox;
        bounds_.resize(bbox + 2 * dim_);
        for (int k = 0; k < dim_; ++k) {
            bounds_[bbox + k] = std::numeric_limits<double>::infinity();
            bounds_[bbox + dim_ + k] = -std::numeric_limits<double>::infinity();
        }
        for (int t = begin; t < end; ++t) {
            auto p = inst_.point(order_[t]);
            for (int k = 0; k < dim_; ++k) {
                bounds_[bbox + k] = std::min(bounds_[bbox + k], p[k]);
                bounds_[bbox + dim_ + k] = std::max(bounds_[bbox + dim_ + k], p[k]);
            }
        }
        if (end - begin <= leaf_size_) return id;
        // split the widest axis at the median
        int axis = 0;
        double width = -1.0;
        for (int k = 0; k < dim_; ++k) {
            const double w = bounds_[bbox + dim_ + k] - bounds_[bbox + k];
            if (w > width) {
                width = w;
                axis = k;
            }
        }
        if (width <= 0.0) return id;  // all points coincide
        const int mid = (begin + end) / 2;
        std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                         [&](int a, int b) { return inst_.point(a)[axis] < inst_.point(b)[axis]; });
        const int left = build(begin, mid);
        const int right = build(mid, end);
        nodes_[id].left = left;
        nodes_[id].right = right;
        return id;
    }

    double min_dist_to_box(int node, std::span<const double> q) const {
        const int bbox = nodes_[node].bbox;
        gap_.resize(dim_);
        for (int k = 0; k < dim_; ++k) {
            const double lo = bounds_[bbox + k], hi = bounds_[bbox + dim_ + k];
            gap_[k] = q[k] < lo ? lo - q[k] : (q[k] > hi ? q[k] - hi : 0.0);
        }
        zero_.assign(dim_, 0.0);
        return inst_.norm()(gap_, zero_);
    }

    void nn_search(int node, std::span<const double> q, int self, int& best,
                   double& best_d) const {
        const Node& nd = nodes_[node];
        if (nd.left < 0) {
            for (int t = nd.begin; t < nd.end; ++t) {
                const int j = order_[t];
                if (j == self) continue;
                const double d = inst_.distance(self, j);
                if (d < best_d || (d == best_d && j < best)) {
                    best_d = d;
                    best = j;
                }
            }
            return;
        }
        const double dl = min_dist_to_box(nd.left, q);
        const double dr = min_dist_to_box(nd.right, q);
        const int first = dl <= dr ? nd.left : nd.right;
        const int second = dl <= dr ? nd.right : nd.left;
        const double dfirst = std::min(dl, dr), dsecond = std::max(dl, dr);
        if (dfirst <= best_d) nn_search(first, q, self, best, best_d);
        if (dsecond <= best_d) nn_search(second, q, self, best, best_d);
    }

    void fill_max_radius(int node) {
        Node& nd = nodes_[node];
        if (nd.left < 0) {
            double m = 0.0;
            for (int t = nd.begin; t < nd.end; ++t) m = std::max(m, radii_[order_[t]]);
            nd.max_radius = m;
            return;
        }
        fill_max_radius(nd.left);
        fill_max_radius(nd.right);
        nd.max_radius = std::max(nodes_[nd.left].max_radius, nodes_[nd.right].max_radius);
    }

    void overlap_search(int node, std::span<const double> q, int i, double ri,
                        std::vector<int>& out) const {
        const Node& nd = nodes_[node];
        if (min_dist_to_box(node, q) > ri + nd.max_radius) return;
        if (nd.left < 0) {
            for (int t = nd.begin; t < nd.end; ++t) {
                const int j = order_[t];
                if (j == i) continue;
                if (inst_.distance(i, j) <= ri + radii_[j]) out.push_back(j);
            }
            return;
        }
        overlap_search(nd.left, q, i, ri, out);
        overlap_search(nd.right, q, i, ri, out);
    }

    const MetricInstance& inst_;
    int dim_;
    int leaf_size_;
    int root_ = 0;
    std::vector<int> order_;
    std::vector<Node> nodes_;
    std::vector<double> bounds_;
    std::vector<double> radii_;
    mutable std::vector<double> gap_, zero_;
};

}  // namespace radsum
