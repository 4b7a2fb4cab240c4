#pragma once
// Independent brute-force optimum and certificate checks, used by tests and
// the CLI --check mode. Deliberately kept free of the production solvers.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "radsum/cycle_cover.hpp"
#include "radsum/metric.hpp"

namespace radsum {

struct OracleResult {
    double value = 0.0;            // optimal half cycle-cover weight
    std::vector<int> witness;      // best fixed-point-free permutation
    long long enumerated = 0;      // candidates evaluated
};

// Exact optimum by enumerating every fixed-point-free permutation; each one
// is an oriented cycle cover, and half its weight bounds the radius sum.
// Sums of integer-valued inputs stay exact in double arithmetic.
inline OracleResult brute_force_optimum(const MetricInstance& inst) {
    const int n = inst.size();
    if (n < 2 || n > 9)
        throw std::invalid_argument("brute_force_optimum: n must be in [2, 9]");
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    OracleResult out;
    double best = std::numeric_limits<double>::infinity();
    do {
        bool fixed_point = false;
        double cost = 0.0;
        for (int i = 0; i < n; ++i) {
            if (perm[i] == i) {
                fixed_point = true;
                break;
            }
            cost += inst.distance(i, perm[i]);
        }
        if (fixed_point) continue;
        out.enumerated++;
        if (cost < best) {  // lexicographically first witness among ties
            best = cost;
            out.witness = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    out.value = best / 2.0;
    return out;
}

struct FeasibilityReport {
    bool feasible = true;
    int worst_i = -1, worst_j = -1;  // worst_j == -1 flags a negative radius
    double worst_violation = 0.0;    // positive amount by which it fails
};

// All-pairs nonoverlap check plus radius nonnegativity; reports the most
// violated constraint.
inline FeasibilityReport check_feasible(const MetricInstance& inst,
                                        std::span<const double> radii, double eps = -1.0) {
    if (static_cast<int>(radii.size()) != inst.size())
        throw std::invalid_argument("check_feasible: radii size mismatch");
    if (eps < 0) eps = inst.feasibility_eps();
    const int n = inst.size();
    FeasibilityReport rep;
    for (int i = 0; i < n; ++i) {
        const double v = -radii[i];
        if (v > rep.worst_violation) {
            rep.worst_violation = v;
            rep.worst_i = i;
            rep.worst_j = -1;
        }
        for (int j = i + 1; j < n; ++j) {
            const double over = radii[i] + radii[j] - inst.distance(i, j);
            if (over > rep.worst_violation) {
                rep.worst_violation = over;
                rep.worst_i = i;
                rep.worst_j = j;
            }
        }
    }
    rep.feasible = rep.worst_violation <= eps;
    return rep;
}

struct SlackReport {
    struct EdgeGap {
        int i, j, multiplicity;
        double gap;  // d(i,j) - r_i - r_j
    };
    std::vector<EdgeGap> gaps;
    double max_abs_gap = 0.0;
    double value_gap = 0.0;  // | sum(r) - cover_weight / 2 |
    bool optimal_pair = false;
};

// Complementary slackness: (radii, cover) are a jointly optimal primal/dual
// pair iff every cover edge is tight and the values agree.
inline SlackReport lp_slack_report(const MetricInstance& inst, std::span<const double> radii,
                                   const CycleCover& cover, double eps = -1.0) {
    if (static_cast<int>(radii.size()) != inst.size())
        throw std::invalid_argument("lp_slack_report: radii size mismatch");
    if (eps < 0) eps = inst.feasibility_eps();
    SlackReport rep;
    double cover_weight = 0.0;
    for (const auto& e : cover.edges) {
        const double d = inst.distance(e.i, e.j);
        const double gap = d - radii[e.i] - radii[e.j];
        rep.gaps.push_back({e.i, e.j, e.multiplicity, gap});
        rep.max_abs_gap = std::max(rep.max_abs_gap, std::abs(gap));
        cover_weight += e.multiplicity * d;
    }
    double value = 0.0;
    for (double r : radii) value += r;
    rep.value_gap = std::abs(value - cover_weight / 2.0);
    rep.optimal_pair = rep.max_abs_gap <= eps && rep.value_gap <= eps;
    return rep;
}

}  // namespace radsum
