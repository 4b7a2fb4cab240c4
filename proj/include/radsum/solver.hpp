#pragma once
// Exact radius-sum maximization for arbitrary metrics: minimum-weight perfect
// matching on the doubled complete graph, radii recovered by averaging the
// two dual variables per point, cycle-cover witness, and the touching-graph
// optimality certificate.

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "radsum/cycle_cover.hpp"
#include "radsum/matching.hpp"
#include "radsum/metric.hpp"

namespace radsum {

struct BallAssignment {
    std::vector<double> radii;
    double value = 0.0;          // sum of radii = cover.total_weight / 2
    CycleCover cover;            // dual witness, even cycles split
    std::vector<double> dual_a;  // red-copy duals
    std::vector<double> dual_b;  // blue-copy duals
};

// r_i = (a_i + b_i) / 2
inline std::vector<double> radii_from_duals(std::span<const double> a,
                                            std::span<const double> b) {
    if (a.size() != b.size())
        throw std::invalid_argument("radii_from_duals: size mismatch");
    std::vector<double> r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = (a[i] + b[i]) / 2.0;
    return r;
}

// Closed-form radii for an odd cycle of a minimum cycle cover: both edges at
// the vertex get positive sign, signs alternate around the cycle, so
// r_j = (1/2) * sum_t (-1)^t * len[(j + t) mod k]. Consecutive balls touch
// exactly. A negative radius means the cycle was not part of an optimal
// cover; that precondition violation is reported by throwing.
inline std::vector<double> odd_cycle_radii(std::span<const double> lengths) {
    const size_t k = lengths.size();
    if (k < 3 || k % 2 == 0)
        throw std::invalid_argument("odd_cycle_radii: need an odd cycle of length >= 3");
    for (double len : lengths)
        if (!(len > 0.0))
            throw std::invalid_argument("odd_cycle_radii: lengths must be positive");
    double scale = 0.0;
    for (double len : lengths) scale += len;
    const double eps = 1e-8 * (1.0 + scale);
    std::vector<double> r(k);
    for (size_t j = 0; j < k; ++j) {
        double acc = 0.0;
        double sign = 1.0;
        for (size_t t = 0; t < k; ++t) {
            acc += sign * lengths[(j + t) % k];
            sign = -sign;
        }
        r[j] = acc / 2.0;
        if (r[j] < -eps)
            throw std::domain_error("odd_cycle_radii: negative radius; cycle is not part of "
                                    "a minimum cycle cover");
        if (r[j] < 0.0) r[j] = 0.0;
    }
    return r;
}

enum class CertVerdict { certified_optimal, inconclusive, infeasible };

inline const char* to_string(CertVerdict v) {
    switch (v) {
        case CertVerdict::certified_optimal: return "certified-optimal";
        case CertVerdict::inconclusive: return "inconclusive";
        case CertVerdict::infeasible: return "infeasible";
    }
    return "?";
}

struct ComponentShape {
    enum Kind { odd_cycle, isolated_edge, other } kind;
    std::vector<int> vertices;
};

struct OptimalityCertificate {
    std::vector<std::pair<int, int>> touching_edges;
    std::vector<ComponentShape> components;
    CertVerdict verdict = CertVerdict::inconclusive;
};

// Sufficient optimality condition for inputs in general position: if every
// touching-graph component is an odd cycle or an isolated edge, the radii are
// optimal. Degenerate extra touchings yield "inconclusive", never a guess.
inline OptimalityCertificate check_optimality_certificate(const MetricInstance& inst,
                                                          std::span<const double> radii,
                                                          double eps = -1.0) {
    if (static_cast<int>(radii.size()) != inst.size())
        throw std::invalid_argument("check_optimality_certificate: radii size mismatch");
    if (eps < 0) eps = inst.feasibility_eps();
    const int n = inst.size();
    OptimalityCertificate cert;
    bool infeasible = false;
    for (int i = 0; i < n && !infeasible; ++i)
        if (radii[i] < -eps) infeasible = true;
    std::vector<std::vector<int>> adj(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double slack = inst.distance(i, j) - radii[i] - radii[j];
            if (slack < -eps) infeasible = true;
            if (std::abs(slack) <= eps) {
                cert.touching_edges.push_back({i, j});
                adj[i].push_back(j);
                adj[j].push_back(i);
            }
        }
    // Connected components of the touching graph.
    std::vector<int> comp(n, -1);
    bool all_good = true;
    for (int s = 0; s < n; ++s) {
        if (comp[s] >= 0) continue;
        const int id = static_cast<int>(cert.components.size());
        std::vector<int> stack{s}, verts;
        comp[s] = id;
        while (!stack.empty()) {
            const int x = stack.back();
            stack.pop_back();
            verts.push_back(x);
            for (int y : adj[x])
                if (comp[y] < 0) {
                    comp[y] = id;
                    stack.push_back(y);
                }
        }
        std::sort(verts.begin(), verts.end());
        size_t edge_count = 0;
        bool all_deg2 = true;
        for (int x : verts) {
            edge_count += adj[x].size();
            if (adj[x].size() != 2) all_deg2 = false;
        }
        edge_count /= 2;
        ComponentShape shape;
        shape.vertices = verts;
        if (verts.size() == 2 && edge_count == 1)
            shape.kind = ComponentShape::isolated_edge;
        else if (verts.size() >= 3 && verts.size() % 2 == 1 && all_deg2 &&
                 edge_count == verts.size())
            shape.kind = ComponentShape::odd_cycle;
        else
            shape.kind = ComponentShape::other;
        if (shape.kind == ComponentShape::other) all_good = false;
        cert.components.push_back(std::move(shape));
    }
    cert.verdict = infeasible           ? CertVerdict::infeasible
                   : all_good           ? CertVerdict::certified_optimal
                                        : CertVerdict::inconclusive;
    return cert;
}

namespace detail {

// Shared tail of both solvers: radii from duals, cover from the matching,
// even cycles split, tiny float negatives clamped after everything is built.
inline BallAssignment assemble_assignment(const MetricInstance& inst, const WeightedGraph& g,
                                          const MatchingWithDuals& m) {
    BallAssignment out;
    out.dual_a = m.a;
    out.dual_b = m.b;
    out.radii = radii_from_duals(m.a, m.b);
    out.cover = split_even_cycles(matching_to_cover(m, g), g);
    const double eps = inst.feasibility_eps();
    for (double& r : out.radii) {
        if (r < -eps)
            throw std::logic_error("solver produced a substantially negative radius");
        if (r < 0.0) r = 0.0;
    }
    double value = 0.0;
    for (double r : out.radii) value += r;
    out.value = value;
    return out;
}

}  // namespace detail

// Optimal nonoverlapping balls for any metric instance, O(n^3).
// n = 1 has no pair constraint (the LP is unbounded); by convention the
// solver returns radius 0 with an empty cover.
inline BallAssignment solve_general(const MetricInstance& inst) {
    if (inst.size() == 1) {
        BallAssignment out;
        out.radii = {0.0};
        out.dual_a = {0.0};
        out.dual_b = {0.0};
        return out;
    }
    const WeightedGraph g = complete_graph(inst);
    const BipartiteGraph bg = double_cover(g);
    const MatchingWithDuals m = min_weight_matching(bg);
    if (!m.is_perfect())
        throw std::logic_error("solve_general: no perfect matching on the doubled complete graph");
    return detail::assemble_assignment(inst, g, m);
}

}  // namespace radsum
