#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace reviewpulse {

// Binary decision-tree node. Leaves have feature = -1; internal nodes carry
// the cover-weighted expectation of their subtree so conditional expectations
// can be read off any node.
struct TreeNode {
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double cover = 0.0; // training-sample weight reaching the node
    double value = 0.0; // P(positive); internal nodes: weighted child average
};

struct DecisionTree {
    std::vector<TreeNode> nodes; // node 0 is the root

    double predict(std::span<const double> x) const;
    double expected_value() const { return nodes.empty() ? 0.0 : nodes[0].value; }
    int max_depth() const;
    std::vector<int> used_features() const; // sorted, unique
};

struct ForestParams {
    int n_trees = 100;
    int max_depth = -1;         // -1: unbounded
    int min_leaf = 1;
    int features_per_split = 0; // 0: ceil(sqrt(d))
    bool bootstrap = true;
    std::uint64_t seed = 0;
};

struct Forest {
    std::vector<DecisionTree> trees;
    int n_features = 0;
    ForestParams params;

    // mean of per-tree leaf values; classify at 0.5
    double predict(std::span<const double> x) const;

    void save(std::ostream& out) const;
    static Forest load(std::istream& in);
};

struct TrainTestSplit {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

// Seeded stratified split preserving the class ratio within one sample per
// class. Throws SplitError on single-class data or fewer than 5 rows.
TrainTestSplit split_train_test(std::span<const int> labels, double train_fraction,
    std::uint64_t seed);

// Bootstrap-sampled trees with Gini splits over features_per_split random
// candidate features; deterministic for a fixed seed.
Forest train_forest(const std::vector<std::vector<double>>& rows,
    std::span<const int> labels, ForestParams params);

} // namespace reviewpulse
