#pragma once
// Minimum-weight maximum-cardinality matching on bipartite graphs with
// nonnegative weights, by successive shortest augmenting paths over reduced
// costs. Returns the matching together with feasible dual variables:
//   a[u] + b[v] <= w(u,v) on every edge, with equality on matched edges.
// Duals may be negative.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace radsum {

struct BipartiteGraph {
    int n_left = 0, n_right = 0;
    // CSR over left vertices, adjacency sorted by right endpoint.
    std::vector<int> head;      // size n_left + 1
    std::vector<int> adj_v;
    std::vector<double> adj_w;
    double max_weight = 0.0;

    struct Edge {
        int u, v;
        double w;
    };

    // Parallel edges are collapsed to the lighter one.
    static BipartiteGraph from_edges(int n_left, int n_right, std::vector<Edge> edges) {
        if (n_left < 0 || n_right < 0)
            throw std::invalid_argument("negative side size");
        for (const auto& e : edges) {
            if (e.u < 0 || e.u >= n_left || e.v < 0 || e.v >= n_right)
                throw std::invalid_argument("edge endpoint out of range");
            if (!(e.w >= 0.0))
                throw std::invalid_argument("edge weights must be nonnegative");
        }
        std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
            if (a.u != b.u) return a.u < b.u;
            if (a.v != b.v) return a.v < b.v;
            return a.w < b.w;
        });
        BipartiteGraph g;
        g.n_left = n_left;
        g.n_right = n_right;
        g.head.assign(n_left + 1, 0);
        for (size_t i = 0; i < edges.size(); ++i) {
            if (i > 0 && edges[i].u == edges[i - 1].u && edges[i].v == edges[i - 1].v)
                continue;  // heavier parallel edge
            g.adj_v.push_back(edges[i].v);
            g.adj_w.push_back(edges[i].w);
            g.head[edges[i].u + 1]++;
            g.max_weight = std::max(g.max_weight, edges[i].w);
        }
        for (int u = 0; u < n_left; ++u) g.head[u + 1] += g.head[u];
        return g;
    }

    int edge_count() const { return static_cast<int>(adj_v.size()); }

    // Weight of edge (u,v), or NaN when absent.
    double weight(int u, int v) const {
        if (u < 0 || u >= n_left || v < 0 || v >= n_right)
            return std::numeric_limits<double>::quiet_NaN();
        const int* first = adj_v.data() + head[u];
        const int* last = adj_v.data() + head[u + 1];
        const int* it = std::lower_bound(first, last, v);
        if (it == last || *it != v)
            return std::numeric_limits<double>::quiet_NaN();
        return adj_w[it - adj_v.data()];
    }

    // Additive tolerance for dual feasibility/tightness checks.
    double dual_eps() const { return 1e-9 * (1.0 + max_weight); }
};

struct MatchingWithDuals {
    std::vector<int> mate_of_left;   // right index or -1
    std::vector<int> mate_of_right;  // left index or -1
    std::vector<double> a;           // left duals
    std::vector<double> b;           // right duals
    double total_weight = 0.0;

    static MatchingWithDuals empty(int n_left, int n_right) {
        MatchingWithDuals m;
        m.mate_of_left.assign(n_left, -1);
        m.mate_of_right.assign(n_right, -1);
        m.a.assign(n_left, 0.0);
        m.b.assign(n_right, 0.0);
        return m;
    }

    int cardinality() const {
        int c = 0;
        for (int v : mate_of_left) c += (v >= 0);
        return c;
    }

    bool is_perfect() const {
        return mate_of_left.size() == mate_of_right.size() &&
               cardinality() == static_cast<int>(mate_of_left.size());
    }
};

struct DualViolation {
    enum Kind { feasibility, tightness, consistency } kind;
    int u, v;       // offending edge or vertex pair (-1 when not applicable)
    double amount;  // size of the violation
};

struct DualCheck {
    bool ok = true;
    std::vector<DualViolation> violations;
};

namespace detail {

// Restriction of an augmentation pass to an induced subgraph. `token`
// identifies membership: vertex x is in the subgraph iff stamp[x] == token.
struct SubgraphMask {
    const std::vector<int>* stamp_left = nullptr;
    const std::vector<int>* stamp_right = nullptr;
    int token = 0;
    // Vertices to scan for sources / dual updates; nullptr means all.
    const std::vector<int>* actives = nullptr;

    bool has_left(int u) const { return !stamp_left || (*stamp_left)[u] == token; }
    bool has_right(int v) const { return !stamp_right || (*stamp_right)[v] == token; }
};

struct SspScratch {
    std::vector<double> dist_l, dist_r;
    std::vector<int> seen_l, seen_r, fin_l, fin_r;  // stamps
    std::vector<int> parent_r;                      // left vertex that relaxed v
    std::vector<double> parent_w;                   // weight of that edge
    std::vector<std::pair<int, double>> fin_list_l, fin_list_r;
    int stamp = 0;

    void ensure(int n_left, int n_right) {
        if (static_cast<int>(dist_l.size()) < n_left) {
            dist_l.resize(n_left);
            seen_l.assign(n_left, 0);
            fin_l.assign(n_left, 0);
        }
        if (static_cast<int>(dist_r.size()) < n_right) {
            dist_r.resize(n_right);
            seen_r.assign(n_right, 0);
            fin_r.assign(n_right, 0);
            parent_r.resize(n_right);
            parent_w.resize(n_right);
        }
    }
};

// One multi-source shortest augmenting path: Dijkstra over reduced costs from
// every unmatched left vertex, stopping at the nearest unmatched right vertex.
// Dual update: every subgraph vertex moves by its source distance capped at
// the target distance (decrease on the left, increase on the right), which
// keeps all reduced costs nonnegative and matched edges tight.
// Returns false when no augmenting path exists.
inline bool augment_once(const BipartiteGraph& g, MatchingWithDuals& m,
                         const SubgraphMask& mask, SspScratch& ws, bool dense) {
    ws.ensure(g.n_left, g.n_right);
    ws.stamp++;
    ws.fin_list_l.clear();
    ws.fin_list_r.clear();
    const int stamp = ws.stamp;
    const double inf = std::numeric_limits<double>::infinity();

    auto relax_right = [&](int v, double nd, int par_u, double par_w) {
        if (ws.seen_r[v] != stamp || nd < ws.dist_r[v]) {
            ws.seen_r[v] = stamp;
            ws.dist_r[v] = nd;
            ws.parent_r[v] = par_u;
            ws.parent_w[v] = par_w;
            return true;
        }
        return false;
    };
    auto relax_left = [&](int u, double nd) {
        if (ws.seen_l[u] != stamp || nd < ws.dist_l[u]) {
            ws.seen_l[u] = stamp;
            ws.dist_l[u] = nd;
            return true;
        }
        return false;
    };
    auto scan_left = [&](int u) {
        const double au = m.a[u];
        for (int e = g.head[u]; e < g.head[u + 1]; ++e) {
            const int v = g.adj_v[e];
            if (!mask.has_right(v)) continue;
            const double rc = std::max(0.0, g.adj_w[e] - au - m.b[v]);
            relax_right(v, ws.dist_l[u] + rc, u, g.adj_w[e]);
        }
    };

    int target = -1;
    double dt = 0.0;

    auto add_sources = [&](auto&& each_left) {
        if (mask.actives) {
            for (int u : *mask.actives)
                if (m.mate_of_left[u] < 0) each_left(u);
        } else {
            for (int u = 0; u < g.n_left; ++u)
                if (mask.has_left(u) && m.mate_of_left[u] < 0) each_left(u);
        }
    };

    if (!dense) {
        using Entry = std::pair<double, int>;  // (dist, encoded vertex)
        std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
        add_sources([&](int u) {
            relax_left(u, 0.0);
            heap.push({0.0, u});
        });
        while (!heap.empty()) {
            auto [d, x] = heap.top();
            heap.pop();
            if (x < g.n_left) {
                const int u = x;
                if (ws.fin_l[u] == stamp || d > ws.dist_l[u]) continue;
                ws.fin_l[u] = stamp;
                ws.fin_list_l.push_back({u, d});
                const double au = m.a[u];
                for (int e = g.head[u]; e < g.head[u + 1]; ++e) {
                    const int v = g.adj_v[e];
                    if (!mask.has_right(v) || ws.fin_r[v] == stamp) continue;
                    const double rc = std::max(0.0, g.adj_w[e] - au - m.b[v]);
                    if (relax_right(v, d + rc, u, g.adj_w[e]))
                        heap.push({d + rc, g.n_left + v});
                }
            } else {
                const int v = x - g.n_left;
                if (ws.fin_r[v] == stamp || d > ws.dist_r[v]) continue;
                ws.fin_r[v] = stamp;
                ws.fin_list_r.push_back({v, d});
                if (m.mate_of_right[v] < 0) {
                    target = v;
                    dt = d;
                    break;
                }
                const int u = m.mate_of_right[v];  // matched edge is tight: cost 0
                if (ws.fin_l[u] != stamp && relax_left(u, d))
                    heap.push({d, u});
            }
        }
    } else {
        // O(V^2) selection for dense graphs (the doubled complete graph).
        add_sources([&](int u) { relax_left(u, 0.0); });
        while (true) {
            double best = inf;
            int bx = -1;
            for (int u = 0; u < g.n_left; ++u)
                if (ws.seen_l[u] == stamp && ws.fin_l[u] != stamp && ws.dist_l[u] < best) {
                    best = ws.dist_l[u];
                    bx = u;
                }
            for (int v = 0; v < g.n_right; ++v)
                if (ws.seen_r[v] == stamp && ws.fin_r[v] != stamp && ws.dist_r[v] < best) {
                    best = ws.dist_r[v];
                    bx = g.n_left + v;
                }
            if (bx < 0) break;
            if (bx < g.n_left) {
                const int u = bx;
                ws.fin_l[u] = stamp;
                ws.fin_list_l.push_back({u, best});
                scan_left(u);
            } else {
                const int v = bx - g.n_left;
                ws.fin_r[v] = stamp;
                ws.fin_list_r.push_back({v, best});
                if (m.mate_of_right[v] < 0) {
                    target = v;
                    dt = best;
                    break;
                }
                const int u = m.mate_of_right[v];
                relax_left(u, best);
            }
        }
    }

    if (target < 0) return false;

    // Dual update, capped at the target distance. With `actives` set the
    // graph is a double cover (n_left == n_right) and entries are base ids
    // valid on both sides.
    if (mask.actives) {
        for (int x : *mask.actives) {
            m.a[x] -= (ws.fin_l[x] == stamp) ? ws.dist_l[x] : dt;
            m.b[x] += (ws.fin_r[x] == stamp) ? ws.dist_r[x] : dt;
        }
    } else {
        for (int u = 0; u < g.n_left; ++u)
            if (mask.has_left(u)) m.a[u] -= (ws.fin_l[u] == stamp) ? ws.dist_l[u] : dt;
        for (int v = 0; v < g.n_right; ++v)
            if (mask.has_right(v)) m.b[v] += (ws.fin_r[v] == stamp) ? ws.dist_r[v] : dt;
    }

    // Flip matched/unmatched along the augmenting path.
    int v = target;
    while (true) {
        const int u = ws.parent_r[v];
        const int prev = m.mate_of_left[u];
        m.mate_of_left[u] = v;
        m.mate_of_right[v] = u;
        if (prev < 0) break;
        v = prev;
    }
    return true;
}

// Augments until no alternating path remains; returns the number of
// augmentations performed. total_weight is left for the caller to refresh.
inline int augment_to_maximum(const BipartiteGraph& g, MatchingWithDuals& m,
                              const SubgraphMask& mask, SspScratch& ws, bool dense) {
    int count = 0;
    while (augment_once(g, m, mask, ws, dense)) ++count;
    return count;
}

inline bool prefer_dense(const BipartiteGraph& g) {
    const double cells = static_cast<double>(g.n_left) * g.n_right;
    return cells > 0 && g.edge_count() >= 0.25 * cells && g.n_left + g.n_right >= 64;
}

inline void refresh_total_weight(const BipartiteGraph& g, MatchingWithDuals& m) {
    double total = 0.0;
    for (int u = 0; u < g.n_left; ++u)
        if (m.mate_of_left[u] >= 0) total += g.weight(u, m.mate_of_left[u]);
    m.total_weight = total;
}

}  // namespace detail

// True iff m satisfies the matching/dual invariants for g, with the
// violations listed. Optimality is not checked.
inline DualCheck verify_duals(const BipartiteGraph& g, const MatchingWithDuals& m,
                              double eps = -1.0) {
    if (eps < 0) eps = g.dual_eps();
    DualCheck out;
    auto fail = [&](DualViolation::Kind k, int u, int v, double amount) {
        out.ok = false;
        out.violations.push_back({k, u, v, amount});
    };
    if (static_cast<int>(m.mate_of_left.size()) != g.n_left ||
        static_cast<int>(m.mate_of_right.size()) != g.n_right ||
        static_cast<int>(m.a.size()) != g.n_left ||
        static_cast<int>(m.b.size()) != g.n_right) {
        fail(DualViolation::consistency, -1, -1, 0.0);
        return out;
    }
    for (int u = 0; u < g.n_left; ++u) {
        const int v = m.mate_of_left[u];
        if (v < -1 || v >= g.n_right || (v >= 0 && m.mate_of_right[v] != u))
            fail(DualViolation::consistency, u, v, 0.0);
    }
    for (int v = 0; v < g.n_right; ++v) {
        const int u = m.mate_of_right[v];
        if (u < -1 || u >= g.n_left || (u >= 0 && m.mate_of_left[u] != v))
            fail(DualViolation::consistency, u, v, 0.0);
    }
    if (!out.ok) return out;

    double matched_sum = 0.0;
    for (int u = 0; u < g.n_left; ++u) {
        for (int e = g.head[u]; e < g.head[u + 1]; ++e) {
            const int v = g.adj_v[e];
            const double w = g.adj_w[e];
            const double s = m.a[u] + m.b[v];
            if (s > w + eps) fail(DualViolation::feasibility, u, v, s - w);
            if (m.mate_of_left[u] == v && std::abs(s - w) > eps)
                fail(DualViolation::tightness, u, v, std::abs(s - w));
        }
        if (m.mate_of_left[u] >= 0) {
            const double w = g.weight(u, m.mate_of_left[u]);
            if (std::isnan(w))
                fail(DualViolation::consistency, u, m.mate_of_left[u], 0.0);
            else
                matched_sum += w;
        }
    }
    if (out.ok && std::abs(matched_sum - m.total_weight) >
                      eps * (1.0 + static_cast<double>(m.cardinality())))
        fail(DualViolation::consistency, -1, -1, std::abs(matched_sum - m.total_weight));
    return out;
}

// Maximum-cardinality matching of minimum total weight, with dual variables.
inline MatchingWithDuals min_weight_matching(const BipartiteGraph& g) {
    MatchingWithDuals m = MatchingWithDuals::empty(g.n_left, g.n_right);
    detail::SspScratch ws;
    detail::augment_to_maximum(g, m, {}, ws, detail::prefer_dense(g));
    detail::refresh_total_weight(g, m);
    return m;
}

// Extends a valid partial matching to maximum cardinality by further
// augmentations. The seed must satisfy verify_duals.
inline MatchingWithDuals resume_matching(const BipartiteGraph& g, MatchingWithDuals m) {
    DualCheck check = verify_duals(g, m);
    if (!check.ok)
        throw std::invalid_argument("resume_matching: seed matching fails dual validation");
    detail::SspScratch ws;
    detail::augment_to_maximum(g, m, {}, ws, detail::prefer_dense(g));
    detail::refresh_total_weight(g, m);
    return m;
}

}  // namespace radsum
