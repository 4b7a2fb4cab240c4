#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <set>

#include "radsum/geometry.hpp"
#include "radsum/oracle.hpp"
#include "test_util.hpp"

using namespace radsum;

namespace {

MetricInstance planar(std::mt19937_64& rng, int n) {
    return MetricInstance::from_points(testutil::random_points(rng, n, 2));
}

// O(n^2) reference for delta and the overlap-graph edge rule.
std::vector<double> brute_delta(const MetricInstance& inst) {
    std::vector<double> delta(inst.size(), std::numeric_limits<double>::infinity());
    for (int i = 0; i < inst.size(); ++i)
        for (int j = 0; j < inst.size(); ++j)
            if (j != i) delta[i] = std::min(delta[i], inst.distance(i, j));
    return delta;
}

std::vector<std::pair<int, int>> brute_edges(const MetricInstance& inst,
                                             const std::vector<double>& delta) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < inst.size(); ++i)
        for (int j = i + 1; j < inst.size(); ++j)
            if (inst.distance(i, j) <= delta[i] + delta[j]) edges.push_back({i, j});
    return edges;
}

void check_tree_structure(const SeparatorTree& tree, const NNOverlapGraph& g) {
    std::set<std::pair<int, int>> edge_set(g.edges.begin(), g.edges.end());
    for (const auto& node : tree.nodes) {
        REQUIRE(std::is_sorted(node.vertices.begin(), node.vertices.end()));
        if (node.is_leaf()) continue;
        const size_t sz = node.vertices.size();
        REQUIRE(node.separator.size() + node.left_part.size() + node.right_part.size() == sz);
        REQUIRE(node.left_part.size() <= 0.75 * sz);
        REQUIRE(node.right_part.size() <= 0.75 * sz);
        REQUIRE(!node.left_part.empty());
        REQUIRE(!node.right_part.empty());
        for (int u : node.left_part)
            for (int v : node.right_part) {
                const auto key = std::minmax(u, v);
                REQUIRE(edge_set.find({key.first, key.second}) == edge_set.end());
            }
        // children are S+L and S+R
        std::vector<int> want_l(node.separator), want_r(node.separator);
        want_l.insert(want_l.end(), node.left_part.begin(), node.left_part.end());
        want_r.insert(want_r.end(), node.right_part.begin(), node.right_part.end());
        std::sort(want_l.begin(), want_l.end());
        std::sort(want_r.begin(), want_r.end());
        REQUIRE(tree.nodes[node.child_left].vertices == want_l);
        REQUIRE(tree.nodes[node.child_right].vertices == want_r);
    }
}

}  // namespace

TEST_CASE("nearest neighbor distances examples") {
    auto line = MetricInstance::from_points({{0.0}, {1.0}, {3.0}});
    CHECK(nearest_neighbor_distances(line) == std::vector<double>{1, 1, 2});

    auto square =
        MetricInstance::from_points({{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}});
    CHECK(nearest_neighbor_distances(square) == std::vector<double>{1, 1, 1, 1});

    auto dup = MetricInstance::from_points({{2.0, 2.0}, {2.0, 2.0}, {9.0, 9.0}});
    auto delta = nearest_neighbor_distances(dup);
    CHECK(delta[0] == 0.0);
    CHECK(delta[1] == 0.0);

    CHECK_THROWS_AS(nearest_neighbor_distances(MetricInstance::from_points({{1.0}})),
                    std::invalid_argument);
    CHECK_THROWS_AS(nearest_neighbor_distances(MetricInstance::from_matrix({{0, 1}, {1, 0}})),
                    std::invalid_argument);
}

TEST_CASE("kd-tree deltas match the quadratic scan exactly") {
    std::mt19937_64 rng(21);
    const LpNorm norms[] = {LpNorm::l1(), LpNorm::l2(), LpNorm::linf(), LpNorm::lp(2.5)};
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 120);
        const int dim = 1 + static_cast<int>(rng() % 3);
        auto inst = MetricInstance::from_points(testutil::random_points(rng, n, dim),
                                                norms[trial % 4]);
        REQUIRE(nearest_neighbor_distances(inst) == brute_delta(inst));
    }
}

TEST_CASE("overlap graph examples") {
    auto line = MetricInstance::from_points({{0.0}, {1.0}, {3.0}});
    auto g = build_nn_overlap_graph(line);
    // d(0,2) = 3 = delta_0 + delta_2: touching counts, so K_3
    REQUIRE(g.edges.size() == 3);

    auto far = MetricInstance::from_points({{0.0}, {1.0}, {10.0}, {11.0}});
    auto g2 = build_nn_overlap_graph(far);
    REQUIRE(g2.edges == std::vector<std::pair<int, int>>{{0, 1}, {2, 3}});
}

TEST_CASE("overlap graph matches the direct rule exactly") {
    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 150);
        const int dim = 1 + static_cast<int>(rng() % 3);
        auto inst = MetricInstance::from_points(testutil::random_points(rng, n, dim),
                                               trial % 2 ? LpNorm::l2() : LpNorm::l1());
        auto g = build_nn_overlap_graph(inst);
        REQUIRE(g.edges == brute_edges(inst, g.delta));
    }
    // exact ties everywhere: an integer grid
    std::vector<std::vector<double>> grid_pts;
    for (int x = 0; x < 5; ++x)
        for (int y = 0; y < 5; ++y) grid_pts.push_back({double(x), double(y)});
    auto grid = MetricInstance::from_points(grid_pts);
    auto g = build_nn_overlap_graph(grid);
    REQUIRE(g.edges == brute_edges(grid, g.delta));
}

TEST_CASE("nearest-neighbor balls form a 1-neighborhood system") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        auto inst = planar(rng, 60);
        auto g = build_nn_overlap_graph(inst);
        for (int i = 0; i < inst.size(); ++i)
            for (int j = 0; j < inst.size(); ++j)
                if (j != i) REQUIRE(inst.distance(i, j) >= g.delta[i]);  // no foreign center inside
    }
}

TEST_CASE("every minimum-cover edge lies in the overlap graph") {
    std::mt19937_64 rng(24);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 7);
        auto inst = planar(rng, n);
        auto g = build_nn_overlap_graph(inst);
        std::set<std::pair<int, int>> edges(g.edges.begin(), g.edges.end());
        auto oracle = brute_force_optimum(inst);
        for (int i = 0; i < n; ++i) {
            const auto key = std::minmax(i, oracle.witness[i]);
            REQUIRE(edges.count({key.first, key.second}) == 1);
        }
    }
}

TEST_CASE("overlap graph decides nonoverlap for bounded radii") {
    std::mt19937_64 rng(25);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 4 + static_cast<int>(rng() % 30);
        auto inst = planar(rng, n);
        auto g = build_nn_overlap_graph(inst);
        std::set<std::pair<int, int>> edges(g.edges.begin(), g.edges.end());
        std::uniform_real_distribution<double> frac(0.0, 1.0);

        // radii capped by delta: any violated pair must include a graph edge
        std::vector<double> radii(n);
        for (int i = 0; i < n; ++i) radii[i] = frac(rng) * g.delta[i];
        bool any_violated = false, edge_violated = false;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (radii[i] + radii[j] > inst.distance(i, j) + 1e-12) {
                    any_violated = true;
                    if (edges.count({i, j})) edge_violated = true;
                }
        if (any_violated) REQUIRE(edge_violated);

        // a radius above delta always violates the nearest-neighbor edge
        const int big = static_cast<int>(rng() % n);
        radii.assign(n, 0.0);
        radii[big] = g.delta[big] * 1.5 + 1e-9;
        int nn = -1;
        double best = std::numeric_limits<double>::infinity();
        for (int j = 0; j < n; ++j)
            if (j != big && inst.distance(big, j) < best) {
                best = inst.distance(big, j);
                nn = j;
            }
        REQUIRE(edges.count({std::min(big, nn), std::max(big, nn)}) == 1);
        REQUIRE(radii[big] + radii[nn] > inst.distance(big, nn));
    }
}

TEST_CASE("separator tree on nine collinear points") {
    std::vector<std::vector<double>> pts;
    for (int x = 0; x < 9; ++x) pts.push_back({double(x), 0.0});
    auto inst = MetricInstance::from_points(pts);
    auto g = build_nn_overlap_graph(inst);
    SeparatorOptions opt;
    opt.leaf_capacity = 4;
    auto tree = build_separator_tree(g, inst, opt);
    const auto& root = tree.nodes[tree.root];
    REQUIRE_FALSE(root.is_leaf());
    CHECK(root.separator.size() <= 2);
    CHECK(root.left_part.size() <= 6);
    CHECK(root.right_part.size() <= 6);
    check_tree_structure(tree, g);
}

TEST_CASE("small inputs are a single leaf") {
    std::mt19937_64 rng(26);
    auto inst = planar(rng, 20);
    auto g = build_nn_overlap_graph(inst);
    auto tree = build_separator_tree(g, inst);  // leaf_capacity 32
    REQUIRE(tree.nodes.size() == 1);
    CHECK(tree.nodes[0].is_leaf());
}

TEST_CASE("separator tree structure on random instances") {
    std::mt19937_64 rng(27);
    for (int trial = 0; trial < 10; ++trial) {
        auto inst = planar(rng, 150 + static_cast<int>(rng() % 250));
        auto g = build_nn_overlap_graph(inst);
        SeparatorOptions opt;
        opt.seed = trial;
        opt.leaf_capacity = 16;
        auto tree = build_separator_tree(g, inst, opt);
        check_tree_structure(tree, g);
    }
}

TEST_CASE("separator tree copes with heavy duplication") {
    std::vector<std::vector<double>> pts(50, {1.0, 1.0});
    std::mt19937_64 rng(28);
    for (auto p : testutil::random_points(rng, 30, 2, 3.0, 4.0)) pts.push_back(p);
    auto inst = MetricInstance::from_points(pts);
    auto g = build_nn_overlap_graph(inst);
    SeparatorOptions opt;
    opt.leaf_capacity = 8;
    auto tree = build_separator_tree(g, inst, opt);
    check_tree_structure(tree, g);
    auto value = solve_euclidean(inst).value;
    auto general = solve_general(inst).value;
    REQUIRE(testutil::rel_diff(value, general) < 1e-9);
}

TEST_CASE("planar separators stay within the frozen sqrt bound") {
    std::mt19937_64 rng(29);
    auto inst = planar(rng, 4096);
    auto g = build_nn_overlap_graph(inst);
    // c recorded for the edge-density example (uniform planar points)
    const double density = static_cast<double>(g.edges.size()) / inst.size();
    INFO("edge density " << density);
    CHECK(density <= 4.0);
    auto tree = build_separator_tree(g, inst);
    double worst_ratio = 0.0;
    for (const auto& node : tree.nodes) {
        if (node.is_leaf()) continue;
        const double ratio =
            static_cast<double>(node.separator.size()) / std::sqrt(node.vertices.size());
        worst_ratio = std::max(worst_ratio, ratio);
    }
    INFO("worst |S| / sqrt(node size) = " << worst_ratio);
    CHECK(worst_ratio <= 3.0);  // measured 2026-08: ~1.8 at this seed, frozen with slack
}

TEST_CASE("separated matching delegates to the engine below the leaf size") {
    std::mt19937_64 rng(30);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 28);
        auto inst = planar(rng, n);
        auto g = build_nn_overlap_graph(inst);
        auto tree = build_separator_tree(g, inst);
        REQUIRE(tree.nodes.size() == 1);
        auto bg = double_cover(to_weighted_graph(g, inst));
        auto sep = separated_matching(bg, tree);
        auto direct = min_weight_matching(bg);
        REQUIRE(sep.total_weight == direct.total_weight);  // same engine, same order
        REQUIRE(verify_duals(bg, sep).ok);
    }
}

TEST_CASE("separated matching on the collinear example") {
    auto inst = MetricInstance::from_points({{0.0}, {1.0}, {3.0}});
    auto g = build_nn_overlap_graph(inst);
    auto tree = build_separator_tree(g, inst);
    auto bg = double_cover(to_weighted_graph(g, inst));
    auto m = separated_matching(bg, tree);
    CHECK(m.total_weight == 6.0);
}

TEST_CASE("separated matching agrees with the direct engine") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 25; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 159);
        auto inst = planar(rng, n);
        auto g = build_nn_overlap_graph(inst);
        SeparatorOptions opt;
        opt.seed = trial;
        opt.leaf_capacity = 8;  // force deep recursion even on small inputs
        auto tree = build_separator_tree(g, inst, opt);
        auto bg = double_cover(to_weighted_graph(g, inst));
        auto sep = separated_matching(bg, tree);
        auto direct = min_weight_matching(bg);
        REQUIRE(sep.is_perfect());
        REQUIRE(testutil::rel_diff(sep.total_weight, direct.total_weight) < 1e-9);
        REQUIRE(verify_duals(bg, sep).ok);
    }
}

TEST_CASE("solve_euclidean examples") {
    auto square =
        MetricInstance::from_points({{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}});
    auto sol = solve_euclidean(square);
    CHECK(sol.value == Catch::Approx(2.0).margin(1e-12));
    REQUIRE(check_feasible(square, sol.radii).feasible);

    auto line = MetricInstance::from_points({{0.0}, {1.0}, {3.0}});
    auto lsol = solve_euclidean(line);
    CHECK(lsol.radii[0] == Catch::Approx(1.0).margin(1e-12));
    CHECK(lsol.radii[1] == Catch::Approx(0.0).margin(1e-12));
    CHECK(lsol.radii[2] == Catch::Approx(2.0).margin(1e-12));

    std::vector<std::vector<double>> grid_pts;
    for (int x = 0; x < 3; ++x)
        for (int y = 0; y < 3; ++y) grid_pts.push_back({double(x), double(y)});
    auto grid = MetricInstance::from_points(grid_pts);
    REQUIRE(testutil::rel_diff(solve_euclidean(grid).value, solve_general(grid).value) < 1e-9);

    CHECK_THROWS_AS(solve_euclidean(MetricInstance::from_matrix({{0, 1}, {1, 0}})),
                    std::invalid_argument);
}

TEST_CASE("cross-engine equality with certificates") {
    std::mt19937_64 rng(32);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 99);
        auto inst = planar(rng, n);
        EuclideanOptions opt;
        opt.seed = trial;
        auto sol = solve_euclidean(inst, opt);
        auto general = solve_general(inst);
        REQUIRE(testutil::rel_diff(sol.value, general.value) < 1e-9);
        REQUIRE(check_feasible(inst, sol.radii).feasible);
        REQUIRE(validate_cover(sol.cover, to_weighted_graph(build_nn_overlap_graph(inst), inst)).ok);
        auto slack = lp_slack_report(inst, sol.radii, sol.cover);
        REQUIRE(slack.optimal_pair);
    }
}

TEST_CASE("same seed reproduces the tree and the solution") {
    std::mt19937_64 rng(33);
    auto inst = planar(rng, 500);
    auto g = build_nn_overlap_graph(inst);
    SeparatorOptions opt;
    opt.seed = 42;
    auto t1 = build_separator_tree(g, inst, opt);
    auto t2 = build_separator_tree(g, inst, opt);
    REQUIRE(t1.nodes.size() == t2.nodes.size());
    for (size_t k = 0; k < t1.nodes.size(); ++k) {
        REQUIRE(t1.nodes[k].vertices == t2.nodes[k].vertices);
        REQUIRE(t1.nodes[k].separator == t2.nodes[k].separator);
    }
    EuclideanOptions eopt;
    eopt.seed = 42;
    auto s1 = solve_euclidean(inst, eopt);
    auto s2 = solve_euclidean(inst, eopt);
    REQUIRE(s1.radii == s2.radii);  // bitwise
    REQUIRE(s1.value == s2.value);

    EuclideanOptions other;
    other.seed = 43;
    auto s3 = solve_euclidean(inst, other);
    REQUIRE(testutil::rel_diff(s1.value, s3.value) < 1e-9);
}

TEST_CASE("overlap-graph sparsity is stable as n grows") {
    std::mt19937_64 rng(34);
    auto small = planar(rng, 1000);
    auto large = planar(rng, 8000);
    const double r_small =
        static_cast<double>(build_nn_overlap_graph(small).edges.size()) / 1000.0;
    const double r_large =
        static_cast<double>(build_nn_overlap_graph(large).edges.size()) / 8000.0;
    INFO("density " << r_small << " -> " << r_large);
    CHECK(r_large <= 1.5 * r_small);
}
