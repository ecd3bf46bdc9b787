#include <doctest.h>

#include "reviewpulse/errors.hpp"
#include "reviewpulse/forest.hpp"
#include "reviewpulse/rng.hpp"
#include "reviewpulse/shap.hpp"

#include <cmath>

using namespace reviewpulse;

namespace {

// random binary tree over n_features, allowing repeated features along paths
DecisionTree random_tree(Rng& rng, int n_features, int max_depth)
{
    DecisionTree tree;
    struct Pending {
        int node;
        int depth;
        double cover;
    };
    tree.nodes.push_back({});
    std::vector<Pending> stack { { 0, 0, 16.0 + static_cast<double>(rng.below(16)) } };
    while (!stack.empty()) {
        const Pending p = stack.back();
        stack.pop_back();
        TreeNode& node = tree.nodes[static_cast<std::size_t>(p.node)];
        node.cover = p.cover;
        const bool leaf = p.depth >= max_depth || rng.below(3) == 0 || p.cover < 2.0;
        if (leaf) {
            node.feature = -1;
            node.value = rng.next_double();
            continue;
        }
        node.feature = static_cast<int>(rng.below(static_cast<std::uint64_t>(n_features)));
        node.threshold = rng.next_double() * 2.0 - 1.0;
        const double frac = 0.2 + 0.6 * rng.next_double();
        const int left = static_cast<int>(tree.nodes.size());
        tree.nodes.push_back({});
        tree.nodes.push_back({});
        tree.nodes[static_cast<std::size_t>(p.node)].left = left;
        tree.nodes[static_cast<std::size_t>(p.node)].right = left + 1;
        stack.push_back({ left, p.depth + 1, p.cover * frac });
        stack.push_back({ left + 1, p.depth + 1, p.cover * (1.0 - frac) });
    }
    // fill internal expectations bottom-up
    for (std::size_t i = tree.nodes.size(); i-- > 0;) {
        TreeNode& node = tree.nodes[i];
        if (node.feature >= 0) {
            const TreeNode& l = tree.nodes[static_cast<std::size_t>(node.left)];
            const TreeNode& r = tree.nodes[static_cast<std::size_t>(node.right)];
            node.value = (l.cover * l.value + r.cover * r.value) / (l.cover + r.cover);
        }
    }
    return tree;
}

std::vector<double> random_instance(Rng& rng, int n_features)
{
    std::vector<double> x(static_cast<std::size_t>(n_features));
    for (double& v : x)
        v = rng.next_double() * 2.0 - 1.0;
    return x;
}

} // namespace

TEST_CASE("single-leaf tree explains as base only")
{
    Forest forest;
    forest.n_features = 3;
    forest.trees.push_back(DecisionTree { { TreeNode { -1, 0, -1, -1, 5, 0.7 } } });
    const auto explanation = tree_shap(forest, std::vector<double> { 0, 0, 0 });
    CHECK(explanation.base == doctest::Approx(0.7));
    for (const double phi : explanation.phi)
        CHECK(phi == 0.0);
}

TEST_CASE("depth-1 stump matches the closed form")
{
    // split on feature 1: left leaf a (cover wl), right leaf b (cover wr)
    const double a = 0.2, b = 0.9, wl = 3.0, wr = 7.0;
    DecisionTree tree;
    tree.nodes.push_back({ 1, 0.0, 1, 2, wl + wr, (wl * a + wr * b) / (wl + wr) });
    tree.nodes.push_back({ -1, 0.0, -1, -1, wl, a });
    tree.nodes.push_back({ -1, 0.0, -1, -1, wr, b });
    Forest forest;
    forest.n_features = 3;
    forest.trees.push_back(tree);

    const std::vector<double> x = { 0.0, 1.0, 0.0 }; // routed right
    const auto explanation = tree_shap(forest, x);
    const double expected = b - (wl * a + wr * b) / (wl + wr);
    CHECK(explanation.phi[1] == doctest::Approx(expected).epsilon(1e-12));
    CHECK(explanation.phi[0] == 0.0);
    CHECK(explanation.phi[2] == 0.0);

    const auto brute = brute_shapley(tree, x, forest.n_features);
    CHECK(brute[1] == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("tree_shap equals brute-force Shapley on random trees")
{
    Rng rng(424242);
    for (int iter = 0; iter < 200; ++iter) {
        const int n_features = 2 + static_cast<int>(rng.below(11)); // up to 12
        DecisionTree tree = random_tree(rng, n_features, 6);
        Forest forest;
        forest.n_features = n_features;
        forest.trees.push_back(tree);
        const auto x = random_instance(rng, n_features);

        const auto fast = tree_shap(forest, x);
        const auto brute = brute_shapley(tree, x, n_features);
        for (int j = 0; j < n_features; ++j)
            CHECK(fast.phi[static_cast<std::size_t>(j)]
                == doctest::Approx(brute[static_cast<std::size_t>(j)]).epsilon(1e-6));

        // local accuracy
        CHECK(fast.sum() == doctest::Approx(forest.predict(x)).epsilon(1e-6));
    }
}

TEST_CASE("local accuracy holds for multi-tree forests")
{
    Rng rng(5150);
    for (int iter = 0; iter < 20; ++iter) {
        const int n_features = 4 + static_cast<int>(rng.below(5));
        Forest forest;
        forest.n_features = n_features;
        const std::size_t n_trees = 2 + rng.below(6);
        for (std::size_t t = 0; t < n_trees; ++t)
            forest.trees.push_back(random_tree(rng, n_features, 5));
        for (int k = 0; k < 5; ++k) {
            const auto x = random_instance(rng, n_features);
            const auto explanation = tree_shap(forest, x);
            CHECK(explanation.sum() == doctest::Approx(forest.predict(x)).epsilon(1e-6));
        }
    }
}

TEST_CASE("features absent from the tree receive zero attribution")
{
    Rng rng(31337);
    for (int iter = 0; iter < 50; ++iter) {
        const int n_features = 8;
        DecisionTree tree = random_tree(rng, 4, 4); // uses features 0..3 only
        Forest forest;
        forest.n_features = n_features;
        forest.trees.push_back(tree);
        const auto x = random_instance(rng, n_features);
        const auto explanation = tree_shap(forest, x);
        for (int j = 4; j < n_features; ++j)
            CHECK(explanation.phi[static_cast<std::size_t>(j)] == 0.0);
        const auto brute = brute_shapley(tree, x, n_features);
        for (int j = 4; j < n_features; ++j)
            CHECK(brute[static_cast<std::size_t>(j)] == 0.0);
    }
}

TEST_CASE("symmetric tree over interchangeable features attributes equally")
{
    // f0 and f1 split identically; leaves depend on the count of positives
    DecisionTree tree;
    tree.nodes.push_back({ 0, 0.0, 1, 2, 4.0, 0.0 }); // root
    tree.nodes.push_back({ 1, 0.0, 3, 4, 2.0, 0.0 }); // left: f1
    tree.nodes.push_back({ 1, 0.0, 5, 6, 2.0, 0.0 }); // right: f1
    tree.nodes.push_back({ -1, 0.0, -1, -1, 1.0, 0.0 });
    tree.nodes.push_back({ -1, 0.0, -1, -1, 1.0, 0.5 });
    tree.nodes.push_back({ -1, 0.0, -1, -1, 1.0, 0.5 });
    tree.nodes.push_back({ -1, 0.0, -1, -1, 1.0, 1.0 });
    for (std::size_t i = tree.nodes.size(); i-- > 0;) {
        TreeNode& node = tree.nodes[i];
        if (node.feature >= 0) {
            const TreeNode& l = tree.nodes[static_cast<std::size_t>(node.left)];
            const TreeNode& r = tree.nodes[static_cast<std::size_t>(node.right)];
            node.value = (l.cover * l.value + r.cover * r.value) / (l.cover + r.cover);
        }
    }
    const std::vector<double> x = { 1.0, 1.0 };
    const auto brute = brute_shapley(tree, x, 2);
    CHECK(brute[0] == doctest::Approx(brute[1]).epsilon(1e-12));

    Forest forest;
    forest.n_features = 2;
    forest.trees.push_back(tree);
    const auto fast = tree_shap(forest, x);
    CHECK(fast.phi[0] == doctest::Approx(fast.phi[1]).epsilon(1e-12));
}

TEST_CASE("brute_shapley refuses oversized trees")
{
    // chain of 16 splits on distinct features: internal 2f, leaf 2f+1
    DecisionTree tree;
    for (int f = 0; f < 16; ++f) {
        tree.nodes.push_back({ f, 0.0, 2 * f + 1, 2 * f + 2, 100.0 - f, 0.0 });
        tree.nodes.push_back({ -1, 0.0, -1, -1, 1.0, 0.3 });
    }
    tree.nodes.push_back({ -1, 0.0, -1, -1, 1.0, 0.9 });
    CHECK_THROWS_AS(brute_shapley(tree, std::vector<double>(20, 0.0), 20), OracleTooLarge);
}

TEST_CASE("feature_report aggregates importance and directionality")
{
    // 5 instances, 3 features, hand-computable attributions
    std::vector<ShapExplanation> explanations;
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < 5; ++i) {
        const double v = static_cast<double>(i);
        ShapExplanation e;
        e.base = 0.5;
        e.phi = { v * 0.1, -v * 0.1, 0.0 }; // proportional / anti / constant
        explanations.push_back(e);
        rows.push_back({ v, v, 1.0 });
    }
    const FeatureReport report = feature_report(explanations, rows,
        { "up", "down", "flat" }, { "g1", "g1", "g2" });
    CHECK(report.features[0].importance == doctest::Approx((0.0 + 0.1 + 0.2 + 0.3 + 0.4) / 5));
    CHECK(report.features[0].directionality == doctest::Approx(1.0));
    CHECK(report.features[1].directionality == doctest::Approx(-1.0));
    CHECK(report.features[2].importance == doctest::Approx(0.0));
    CHECK(report.features[2].constant);
    CHECK(report.features[2].directionality == 0.0);

    REQUIRE(report.groups.size() == 2);
    CHECK(report.groups[0].name == "g1"); // ranked by sum |phi|
    CHECK(report.groups[0].sum_abs_phi
        == doctest::Approx(report.features[0].importance + report.features[1].importance));
    CHECK(report.groups[0].mean_abs_phi == doctest::Approx(report.groups[0].sum_abs_phi / 2));
}
