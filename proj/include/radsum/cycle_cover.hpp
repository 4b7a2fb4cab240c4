#pragma once
// Cycle covers (degree-2 edge multisets, multiplicities in {1,2}) and their
// correspondence with perfect matchings in the bipartite double cover:
// matched edge (red i, blue j) <-> base edge {i,j}, with equal total weight.

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "radsum/matching.hpp"
#include "radsum/metric.hpp"

namespace radsum {

struct WeightedGraph {
    struct Edge {
        int u, v;
        double w;
    };
    int n = 0;
    std::vector<Edge> edges;
};

inline WeightedGraph complete_graph(const MetricInstance& inst) {
    WeightedGraph g;
    g.n = inst.size();
    g.edges.reserve(static_cast<size_t>(g.n) * (g.n - 1) / 2);
    for (int i = 0; i < g.n; ++i)
        for (int j = i + 1; j < g.n; ++j) g.edges.push_back({i, j, inst.distance(i, j)});
    return g;
}

// Two copies of each vertex (one per color), two copies of each edge; the
// weights of G are reused in 2G.
inline BipartiteGraph double_cover(const WeightedGraph& g) {
    std::vector<BipartiteGraph::Edge> edges;
    edges.reserve(g.edges.size() * 2);
    for (const auto& e : g.edges) {
        if (e.u == e.v)
            throw std::invalid_argument("double_cover: self-loop present");
        edges.push_back({e.u, e.v, e.w});
        edges.push_back({e.v, e.u, e.w});
    }
    return BipartiteGraph::from_edges(g.n, g.n, std::move(edges));
}

struct CoverEdge {
    int i, j;  // i < j
    int multiplicity;
};

struct CycleCover {
    std::vector<CoverEdge> edges;            // sorted by (i, j)
    std::vector<std::vector<int>> cycles;    // a 2-cycle is a {i, j} pair
    double total_weight = 0.0;
};

namespace detail {

// Edge-weight lookup for a WeightedGraph; absent edges report NaN.
struct EdgeWeights {
    int n;
    std::unordered_map<int64_t, double> map;

    explicit EdgeWeights(const WeightedGraph& g) : n(g.n) {
        map.reserve(g.edges.size() * 2);
        for (const auto& e : g.edges) {
            auto [it, fresh] = map.try_emplace(key(e.u, e.v), e.w);
            if (!fresh) it->second = std::min(it->second, e.w);
        }
    }
    int64_t key(int i, int j) const {
        const int lo = std::min(i, j), hi = std::max(i, j);
        return static_cast<int64_t>(lo) * n + hi;
    }
    double at(int i, int j) const {
        auto it = map.find(key(i, j));
        return it == map.end() ? std::numeric_limits<double>::quiet_NaN() : it->second;
    }
};

// Rotate/reflect a cycle so it starts at its lowest vertex and proceeds
// toward the lower-indexed of that vertex's two neighbors.
inline std::vector<int> canonical_cycle(const std::vector<int>& cyc) {
    const size_t k = cyc.size();
    if (k <= 2) {
        std::vector<int> out(cyc);
        std::sort(out.begin(), out.end());
        return out;
    }
    size_t at = std::min_element(cyc.begin(), cyc.end()) - cyc.begin();
    const int next = cyc[(at + 1) % k];
    const int prev = cyc[(at + k - 1) % k];
    std::vector<int> out;
    out.reserve(k);
    if (next <= prev)
        for (size_t t = 0; t < k; ++t) out.push_back(cyc[(at + t) % k]);
    else
        for (size_t t = 0; t < k; ++t) out.push_back(cyc[(at + k - t) % k]);
    return out;
}

inline void sort_cover(CycleCover& c) {
    std::sort(c.edges.begin(), c.edges.end(), [](const CoverEdge& a, const CoverEdge& b) {
        return a.i != b.i ? a.i < b.i : a.j < b.j;
    });
    std::sort(c.cycles.begin(), c.cycles.end(),
              [](const std::vector<int>& a, const std::vector<int>& b) {
                  return a.front() != b.front() ? a.front() < b.front() : a < b;
              });
}

}  // namespace detail

// Interprets a perfect matching on double_cover(g) as a cycle cover of g.
inline CycleCover matching_to_cover(const MatchingWithDuals& m, const WeightedGraph& g) {
    if (static_cast<int>(m.mate_of_left.size()) != g.n || !m.is_perfect())
        throw std::invalid_argument("matching_to_cover: matching is not perfect on 2G");
    detail::EdgeWeights weights(g);
    CycleCover cover;
    std::vector<char> visited(g.n, 0);
    for (int start = 0; start < g.n; ++start) {
        if (visited[start]) continue;
        std::vector<int> cyc;
        int at = start;
        do {
            visited[at] = 1;
            cyc.push_back(at);
            at = m.mate_of_left[at];
        } while (at != start);
        const size_t k = cyc.size();
        if (k < 2)
            throw std::invalid_argument("matching_to_cover: matching uses a self-loop");
        for (size_t t = 0; t < k; ++t) {
            const int u = cyc[t], v = cyc[(t + 1) % k];
            if (k == 2 && t == 1) break;  // a 2-cycle is one edge, multiplicity 2
            const double w = weights.at(u, v);
            if (std::isnan(w))
                throw std::invalid_argument("matching_to_cover: matched edge not in G");
            const int mult = (k == 2) ? 2 : 1;
            cover.edges.push_back({std::min(u, v), std::max(u, v), mult});
            cover.total_weight += mult * w;
        }
        cover.cycles.push_back(detail::canonical_cycle(cyc));
    }
    detail::sort_cover(cover);
    return cover;
}

// Orients each cycle (lowest vertex first, toward its lower-indexed neighbor)
// and matches each red vertex to the blue copy of its successor.
inline std::vector<std::pair<int, int>> cover_to_matching(const CycleCover& c) {
    std::vector<std::pair<int, int>> matched;
    for (const auto& cyc : c.cycles) {
        const auto canon = detail::canonical_cycle(cyc);
        const size_t k = canon.size();
        if (k == 2) {
            matched.push_back({canon[0], canon[1]});
            matched.push_back({canon[1], canon[0]});
        } else {
            for (size_t t = 0; t < k; ++t) matched.push_back({canon[t], canon[(t + 1) % k]});
        }
    }
    std::sort(matched.begin(), matched.end());
    return matched;
}

// Replaces every even cycle of length >= 4 by 2-cycles on the lighter of its
// two alternating matchings; never increases the total weight.
inline CycleCover split_even_cycles(const CycleCover& c, const WeightedGraph& g) {
    detail::EdgeWeights weights(g);
    CycleCover out;
    for (const auto& cyc : c.cycles) {
        const size_t k = cyc.size();
        if (k == 2) {
            out.cycles.push_back(cyc);
            out.edges.push_back({std::min(cyc[0], cyc[1]), std::max(cyc[0], cyc[1]), 2});
            out.total_weight += 2 * weights.at(cyc[0], cyc[1]);
            continue;
        }
        if (k % 2 == 1) {
            out.cycles.push_back(cyc);
            for (size_t t = 0; t < k; ++t) {
                const int u = cyc[t], v = cyc[(t + 1) % k];
                out.edges.push_back({std::min(u, v), std::max(u, v), 1});
                out.total_weight += weights.at(u, v);
            }
            continue;
        }
        // Even cycle: edge t joins cyc[t] and cyc[t+1]; parities alternate.
        double wt[2] = {0.0, 0.0};
        std::pair<int, int> lex_min[2] = {{g.n, g.n}, {g.n, g.n}};
        for (size_t t = 0; t < k; ++t) {
            const int u = cyc[t], v = cyc[(t + 1) % k];
            wt[t % 2] += weights.at(u, v);
            lex_min[t % 2] = std::min(lex_min[t % 2], {std::min(u, v), std::max(u, v)});
        }
        int pick;
        if (wt[0] < wt[1])
            pick = 0;
        else if (wt[1] < wt[0])
            pick = 1;
        else
            pick = (lex_min[0] < lex_min[1]) ? 0 : 1;  // tie: lexicographically smallest edge
        for (size_t t = pick; t < k; t += 2) {
            const int u = cyc[t], v = cyc[(t + 1) % k];
            out.cycles.push_back({std::min(u, v), std::max(u, v)});
            out.edges.push_back({std::min(u, v), std::max(u, v), 2});
            out.total_weight += 2 * weights.at(u, v);
        }
    }
    detail::sort_cover(out);
    return out;
}

struct CoverCheck {
    bool ok = true;
    std::vector<std::string> problems;
};

inline CoverCheck validate_cover(const CycleCover& c, const WeightedGraph& g) {
    detail::EdgeWeights weights(g);
    CoverCheck out;
    auto fail = [&](std::string msg) {
        out.ok = false;
        out.problems.push_back(std::move(msg));
    };
    std::vector<int> degree(g.n, 0);
    double recomputed = 0.0;
    for (const auto& e : c.edges) {
        if (e.i < 0 || e.j < 0 || e.i >= g.n || e.j >= g.n || e.i == e.j) {
            fail("edge (" + std::to_string(e.i) + "," + std::to_string(e.j) + ") out of range");
            continue;
        }
        if (e.multiplicity != 1 && e.multiplicity != 2)
            fail("edge (" + std::to_string(e.i) + "," + std::to_string(e.j) +
                 ") has multiplicity " + std::to_string(e.multiplicity));
        const double w = weights.at(e.i, e.j);
        if (std::isnan(w)) {
            fail("edge (" + std::to_string(e.i) + "," + std::to_string(e.j) + ") not in G");
            continue;
        }
        degree[e.i] += e.multiplicity;
        degree[e.j] += e.multiplicity;
        recomputed += e.multiplicity * w;
    }
    for (int v = 0; v < g.n; ++v)
        if (degree[v] != 2)
            fail("vertex " + std::to_string(v) + " has degree " + std::to_string(degree[v]));
    if (std::abs(recomputed - c.total_weight) > 1e-9 * (1.0 + std::abs(recomputed)))
        fail("total_weight " + std::to_string(c.total_weight) + " != recomputed " +
             std::to_string(recomputed));

    // The cycle decomposition must spell out exactly the edge multiset.
    std::vector<CoverEdge> from_cycles;
    for (const auto& cyc : c.cycles) {
        if (cyc.size() == 2) {
            from_cycles.push_back({std::min(cyc[0], cyc[1]), std::max(cyc[0], cyc[1]), 2});
        } else if (cyc.size() >= 3) {
            for (size_t t = 0; t < cyc.size(); ++t) {
                const int u = cyc[t], v = cyc[(t + 1) % cyc.size()];
                from_cycles.push_back({std::min(u, v), std::max(u, v), 1});
            }
        } else {
            fail("cycle of length " + std::to_string(cyc.size()));
        }
    }
    auto lt = [](const CoverEdge& a, const CoverEdge& b) {
        return a.i != b.i ? a.i < b.i : (a.j != b.j ? a.j < b.j : a.multiplicity < b.multiplicity);
    };
    std::vector<CoverEdge> edges_sorted(c.edges);
    std::sort(edges_sorted.begin(), edges_sorted.end(), lt);
    std::sort(from_cycles.begin(), from_cycles.end(), lt);
    auto eq = [](const CoverEdge& a, const CoverEdge& b) {
        return a.i == b.i && a.j == b.j && a.multiplicity == b.multiplicity;
    };
    if (!std::equal(edges_sorted.begin(), edges_sorted.end(), from_cycles.begin(),
                    from_cycles.end(), eq))
        fail("cycle decomposition disagrees with the edge multiset");
    return out;
}

}  // namespace radsum
