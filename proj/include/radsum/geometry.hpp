#pragma once
// Subquadratic path for coordinate instances: all nearest-neighbor distances,
// the nearest-neighbor overlap graph N (an edge when d(i,j) <= delta_i +
// delta_j), a separator hierarchy over the delta-ball system, and the
// divide-and-conquer matching on the doubled graph.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "radsum/cycle_cover.hpp"
#include "radsum/kdtree.hpp"
#include "radsum/matching.hpp"
#include "radsum/metric.hpp"
#include "radsum/solver.hpp"

namespace radsum {

struct NNOverlapGraph {
    std::vector<double> delta;             // nearest-neighbor distance per point
    std::vector<std::pair<int, int>> edges;  // i < j
    std::vector<std::vector<int>> adj;

    int n() const { return static_cast<int>(delta.size()); }
};

// Exact delta_i = min_{j != i} d(p_i, p_j) for every point.
inline std::vector<double> nearest_neighbor_distances(const MetricInstance& inst) {
    if (!inst.has_coordinates())
        throw std::invalid_argument("nearest_neighbor_distances: coordinate instance required");
    if (inst.size() < 2)
        throw std::invalid_argument("nearest_neighbor_distances: n >= 2 required");
    KdTree tree(inst);
    std::vector<double> delta(inst.size());
    for (int i = 0; i < inst.size(); ++i) delta[i] = tree.nearest_excluding(i).second;
    return delta;
}

// The graph N. Contains every edge of the minimum cycle cover, and decides
// nonoverlap of any ball system with r_i <= delta_i.
inline NNOverlapGraph build_nn_overlap_graph(const MetricInstance& inst) {
    if (!inst.has_coordinates())
        throw std::invalid_argument("build_nn_overlap_graph: coordinate instance required");
    if (inst.size() < 2)
        throw std::invalid_argument("build_nn_overlap_graph: n >= 2 required");
    const int n = inst.size();
    NNOverlapGraph g;
    KdTree tree(inst);
    g.delta.resize(n);
    for (int i = 0; i < n; ++i) g.delta[i] = tree.nearest_excluding(i).second;
    tree.attach_radii(g.delta);
    g.adj.resize(n);
    std::vector<int> hits;
    for (int i = 0; i < n; ++i) {
        tree.overlapping(i, hits);
        for (int j : hits)
            if (j > i) {
                g.edges.push_back({i, j});
                g.adj[i].push_back(j);
                g.adj[j].push_back(i);
            }
    }
    for (auto& a : g.adj) std::sort(a.begin(), a.end());
    std::sort(g.edges.begin(), g.edges.end());
    return g;
}

inline WeightedGraph to_weighted_graph(const NNOverlapGraph& g, const MetricInstance& inst) {
    WeightedGraph out;
    out.n = g.n();
    out.edges.reserve(g.edges.size());
    for (auto [i, j] : g.edges) out.edges.push_back({i, j, inst.distance(i, j)});
    return out;
}

struct SeparatorOptions {
    uint64_t seed = 0;
    int leaf_capacity = 32;
    double balance = 0.75;          // max part fraction, enforced
    int trials = 20;                // candidate separators per node
    int sample_cap = 500;           // points used for centerpoint/quantiles
    double imbalance_penalty = 0.25;
};

struct SeparatorNode {
    std::vector<int> vertices;   // sorted
    std::vector<int> separator;  // balls cut by the chosen sphere/plane
    std::vector<int> left_part;  // strictly inside
    std::vector<int> right_part; // strictly outside
    int child_left = -1, child_right = -1;  // built on S+L and S+R

    bool is_leaf() const { return child_left < 0; }
};

struct SeparatorTree {
    std::vector<SeparatorNode> nodes;
    int root = 0;
    SeparatorOptions options;
};

namespace detail {

// Classification of the delta-balls against a candidate cut surface. Balls
// strictly inside go left, strictly outside go right, balls meeting the
// surface form the separator; no overlap-graph edge can join left to right.
struct CutClassifier {
    // sphere: |d(center, p) - rho| vs delta; plane: |p[axis] - offset| vs delta
    bool is_plane = false;
    int axis = 0;
    double offset = 0.0;
    std::vector<double> center;
    double rho = 0.0;

    int side(const MetricInstance& inst, std::span<const double> delta, int v) const {
        double signed_dist;
        if (is_plane) {
            signed_dist = inst.point(v)[axis] - offset;
        } else {
            zero_.assign(center.size(), 0.0);
            diff_.resize(center.size());
            auto p = inst.point(v);
            for (size_t k = 0; k < center.size(); ++k) diff_[k] = p[k] - center[k];
            signed_dist = inst.norm()(diff_, zero_) - rho;
        }
        if (signed_dist + delta[v] < 0.0) return -1;  // strictly inside
        if (signed_dist - delta[v] > 0.0) return +1;  // strictly outside
        return 0;
    }

    mutable std::vector<double> zero_, diff_;
};

struct CutResult {
    std::vector<int> sep, left, right;
    double score = std::numeric_limits<double>::infinity();
    bool feasible = false;
};

inline CutResult apply_cut(const CutClassifier& cut, const MetricInstance& inst,
                           std::span<const double> delta, const std::vector<int>& verts,
                           const SeparatorOptions& opt) {
    CutResult res;
    for (int v : verts) {
        const int s = cut.side(inst, delta, v);
        if (s < 0)
            res.left.push_back(v);
        else if (s > 0)
            res.right.push_back(v);
        else
            res.sep.push_back(v);
    }
    const double n = static_cast<double>(verts.size());
    const double big = std::max(res.left.size(), res.right.size());
    res.feasible = !res.left.empty() && !res.right.empty() && big <= opt.balance * n;
    res.score = static_cast<double>(res.sep.size()) +
                opt.imbalance_penalty *
                    std::abs(static_cast<double>(res.left.size()) -
                             static_cast<double>(res.right.size()));
    return res;
}

}  // namespace detail

// Randomized sphere-cut separator hierarchy over the delta-ball system, with
// a median-cut fallback; leaves hold at most leaf_capacity vertices (more
// only when no cut makes progress, e.g. on large co-located clusters).
inline SeparatorTree build_separator_tree(const NNOverlapGraph& g, const MetricInstance& inst,
                                          SeparatorOptions opt = {}) {
    if (!inst.has_coordinates() || inst.size() != g.n())
        throw std::invalid_argument("build_separator_tree: graph/instance mismatch");
    SeparatorTree tree;
    tree.options = opt;
    std::mt19937_64 rng(opt.seed * 0x9e3779b97f4a7c15ULL + 1);
    const int dim = inst.dimension();

    // recursive build over vertex subsets
    auto build = [&](auto&& self, std::vector<int> verts) -> int {
        const int id = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();
        tree.nodes[id].vertices = verts;
        const int count = static_cast<int>(verts.size());
        if (count <= opt.leaf_capacity) return id;

        // sample for the centerpoint and quantile candidates
        std::vector<int> sample = verts;
        if (count > opt.sample_cap) {
            std::shuffle(sample.begin(), sample.end(), rng);
            sample.resize(opt.sample_cap);
        }
        std::vector<double> centerpoint(dim);
        std::vector<double> coords(sample.size());
        for (int k = 0; k < dim; ++k) {
            for (size_t t = 0; t < sample.size(); ++t) coords[t] = inst.point(sample[t])[k];
            auto mid = coords.begin() + coords.size() / 2;
            std::nth_element(coords.begin(), mid, coords.end());
            centerpoint[k] = *mid;
        }
        // widest axis of the node's bounding box
        int wide_axis = 0;
        double wide = -1.0;
        {
            std::vector<double> lo(dim, std::numeric_limits<double>::infinity());
            std::vector<double> hi(dim, -std::numeric_limits<double>::infinity());
            for (int v : verts) {
                auto p = inst.point(v);
                for (int k = 0; k < dim; ++k) {
                    lo[k] = std::min(lo[k], p[k]);
                    hi[k] = std::max(hi[k], p[k]);
                }
            }
            for (int k = 0; k < dim; ++k)
                if (hi[k] - lo[k] > wide) {
                    wide = hi[k] - lo[k];
                    wide_axis = k;
                }
        }

        std::uniform_real_distribution<double> unit(0.0, 1.0);
        detail::CutResult best;
        for (int trial = 0; trial < opt.trials; ++trial) {
            detail::CutClassifier cut;
            if (trial % 2 == 0) {
                // axis plane at a random mid-quantile of the sampled coordinates
                cut.is_plane = true;
                cut.axis = wide_axis;
                for (size_t t = 0; t < sample.size(); ++t)
                    coords[t] = inst.point(sample[t])[cut.axis];
                std::sort(coords.begin(), coords.end());
                const double q = 0.3 + 0.4 * unit(rng);
                const size_t at = std::min(coords.size() - 2,
                                           static_cast<size_t>(q * (coords.size() - 1)));
                cut.offset = 0.5 * (coords[at] + coords[at + 1]);
            } else {
                // sphere around the approximate centerpoint through a random sample point
                cut.center = centerpoint;
                const int anchor = sample[rng() % sample.size()];
                std::vector<double> diff(dim);
                for (int k = 0; k < dim; ++k) diff[k] = inst.point(anchor)[k] - centerpoint[k];
                cut.rho = inst.norm()(diff, std::vector<double>(dim, 0.0)) *
                          (0.8 + 0.4 * unit(rng));
                if (cut.rho <= 0.0) continue;
            }
            auto res = detail::apply_cut(cut, inst, g.delta, verts, opt);
            if (res.feasible && res.score < best.score) best = std::move(res);
        }
        if (!best.feasible) {
            // median-cut fallback on the widest axis, between two points
            for (size_t t = 0; t < sample.size(); ++t)
                coords[t] = inst.point(sample[t])[wide_axis];
            std::sort(coords.begin(), coords.end());
            detail::CutClassifier cut;
            cut.is_plane = true;
            cut.axis = wide_axis;
            const size_t half = coords.size() / 2;
            cut.offset = 0.5 * (coords[half - 1] + coords[half]);
            auto res = detail::apply_cut(cut, inst, g.delta, verts, opt);
            if (!res.left.empty() && !res.right.empty())
                best = std::move(res);
            else
                return id;  // no cut makes progress: oversized leaf
        }

        std::vector<int> left_full = best.sep, right_full = best.sep;
        left_full.insert(left_full.end(), best.left.begin(), best.left.end());
        right_full.insert(right_full.end(), best.right.begin(), best.right.end());
        std::sort(left_full.begin(), left_full.end());
        std::sort(right_full.begin(), right_full.end());
        std::sort(best.sep.begin(), best.sep.end());
        std::sort(best.left.begin(), best.left.end());
        std::sort(best.right.begin(), best.right.end());
        tree.nodes[id].separator = std::move(best.sep);
        tree.nodes[id].left_part = std::move(best.left);
        tree.nodes[id].right_part = std::move(best.right);
        const int cl = self(self, std::move(left_full));
        const int cr = self(self, std::move(right_full));
        tree.nodes[id].child_left = cl;
        tree.nodes[id].child_right = cr;
        return id;
    };

    std::vector<int> all(g.n());
    std::iota(all.begin(), all.end(), 0);
    tree.root = build(build, std::move(all));
    return tree;
}

// Divide-and-conquer minimum-weight matching on the bipartite double cover of
// N, following the separator hierarchy (each base vertex stands for both of
// its copies): solve the children, reconcile separator duals by taking the
// minimum and dropping the loser's matched edge, then augment to maximum.
inline MatchingWithDuals separated_matching(const BipartiteGraph& g, const SeparatorTree& tree) {
    if (tree.nodes.empty() || g.n_left != g.n_right ||
        static_cast<int>(tree.nodes[tree.root].vertices.size()) != g.n_left)
        throw std::invalid_argument("separated_matching: tree does not match the graph");
    const int n = g.n_left;
    MatchingWithDuals m = MatchingWithDuals::empty(n, n);
    detail::SspScratch ws;
    std::vector<int> stamp(n, -1);

    auto augment_node = [&](int node_id) {
        const auto& verts = tree.nodes[node_id].vertices;
        for (int v : verts) stamp[v] = node_id;
        radsum::detail::SubgraphMask mask;
        mask.stamp_left = &stamp;
        mask.stamp_right = &stamp;
        mask.token = node_id;
        mask.actives = &verts;
        radsum::detail::augment_to_maximum(g, m, mask, ws, false);
    };

    auto solve = [&](auto&& self, int node_id) -> void {
        const SeparatorNode& node = tree.nodes[node_id];
        if (node.is_leaf()) {
            augment_node(node_id);
            return;
        }
        self(self, node.child_left);

        // snapshot the left child's state on the separator, then clear it
        const auto& sep = node.separator;
        std::vector<double> a1(sep.size()), b1(sep.size());
        std::vector<int> mate_l1(sep.size()), mate_r1(sep.size());
        for (size_t t = 0; t < sep.size(); ++t) {
            const int s = sep[t];
            a1[t] = m.a[s];
            b1[t] = m.b[s];
            mate_l1[t] = m.mate_of_left[s];
            mate_r1[t] = m.mate_of_right[s];
            if (m.mate_of_left[s] >= 0) m.mate_of_right[m.mate_of_left[s]] = -1;
            if (m.mate_of_right[s] >= 0) m.mate_of_left[m.mate_of_right[s]] = -1;
            m.mate_of_left[s] = -1;
            m.mate_of_right[s] = -1;
            m.a[s] = 0.0;
            m.b[s] = 0.0;
        }

        self(self, node.child_right);

        // reconcile: keep the child that supplies the minimum dual; on a tie
        // the left child wins (the right child's edge is dropped)
        std::vector<char> keep_left_l(sep.size()), keep_left_r(sep.size());
        for (size_t t = 0; t < sep.size(); ++t) {
            const int s = sep[t];
            keep_left_l[t] = a1[t] <= m.a[s];
            keep_left_r[t] = b1[t] <= m.b[s];
            if (keep_left_l[t]) {
                if (m.mate_of_left[s] >= 0) {  // evict the right child's edge
                    m.mate_of_right[m.mate_of_left[s]] = -1;
                    m.mate_of_left[s] = -1;
                }
                m.a[s] = a1[t];
            }
            if (keep_left_r[t]) {
                if (m.mate_of_right[s] >= 0) {
                    m.mate_of_left[m.mate_of_right[s]] = -1;
                    m.mate_of_right[s] = -1;
                }
                m.b[s] = b1[t];
            }
        }
        // re-add the left child's surviving separator-incident edges; an edge
        // survives only if every separator endpoint kept the left child's dual
        auto in_sep = [&](int v) -> int {
            auto it = std::lower_bound(sep.begin(), sep.end(), v);
            return (it != sep.end() && *it == v) ? static_cast<int>(it - sep.begin()) : -1;
        };
        for (size_t t = 0; t < sep.size(); ++t) {
            const int s = sep[t];
            const int v = mate_l1[t];
            if (v >= 0 && keep_left_l[t]) {
                const int vt = in_sep(v);
                if (vt < 0 || keep_left_r[vt]) {
                    m.mate_of_left[s] = v;
                    m.mate_of_right[v] = s;
                }
            }
            const int u = mate_r1[t];
            if (u >= 0 && keep_left_r[t] && in_sep(u) < 0) {  // u in S handled above
                m.mate_of_right[s] = u;
                m.mate_of_left[u] = s;
            }
        }

        augment_node(node_id);
    };

    solve(solve, tree.root);
    radsum::detail::refresh_total_weight(g, m);
    return m;
}

struct EuclideanOptions {
    uint64_t seed = 0;
    int leaf_capacity = 32;
};

// End-to-end accelerated solve for coordinate instances: nearest neighbors,
// overlap graph, separator hierarchy, divide-and-conquer matching on the
// doubled graph, radii from averaged duals. Equal in value to solve_general.
inline BallAssignment solve_euclidean(const MetricInstance& inst, EuclideanOptions opt = {}) {
    if (!inst.has_coordinates())
        throw std::invalid_argument("solve_euclidean: coordinate instance required");
    if (inst.size() < 2)
        throw std::invalid_argument("solve_euclidean: n >= 2 required");
    const NNOverlapGraph nng = build_nn_overlap_graph(inst);
    SeparatorOptions sopt;
    sopt.seed = opt.seed;
    sopt.leaf_capacity = opt.leaf_capacity;
    const SeparatorTree tree = build_separator_tree(nng, inst, sopt);
    const WeightedGraph wg = to_weighted_graph(nng, inst);
    const BipartiteGraph bg = double_cover(wg);
    const MatchingWithDuals m = separated_matching(bg, tree);
    if (!m.is_perfect())
        throw std::logic_error("solve_euclidean: matching on 2N is not perfect");
    return radsum::detail::assemble_assignment(inst, wg, m);
}

}  // namespace radsum
