#include <doctest.h>

#include "reviewpulse/errors.hpp"
#include "reviewpulse/forest.hpp"
#include "reviewpulse/rng.hpp"

#include <cmath>
#include <sstream>

using namespace reviewpulse;

namespace {

// two gaussian-ish blobs separated by margin 1 along a random direction
void separable_set(Rng& rng, std::size_t n, std::size_t d,
    std::vector<std::vector<double>>& rows, std::vector<int>& labels)
{
    for (std::size_t i = 0; i < n; ++i) {
        const int label = static_cast<int>(rng.below(2));
        std::vector<double> x(d);
        for (std::size_t j = 0; j < d; ++j)
            x[j] = rng.next_double() * 2.0 - 1.0;
        // feature 0 carries the signal: [-1.5,-0.5] vs [0.5,1.5]
        x[0] = label ? 1.0 + rng.next_double() * 0.5 : -1.0 - rng.next_double() * 0.5;
        rows.push_back(std::move(x));
        labels.push_back(label);
    }
}

} // namespace

TEST_CASE("stratified split preserves class counts")
{
    std::vector<int> labels;
    for (int i = 0; i < 100; ++i)
        labels.push_back(i < 25 ? 1 : 0);
    const TrainTestSplit split = split_train_test(labels, 0.8, 9);
    CHECK(split.train.size() == 80);
    CHECK(split.test.size() == 20);
    std::size_t train_pos = 0;
    for (const std::size_t i : split.train)
        train_pos += static_cast<std::size_t>(labels[i]);
    CHECK(train_pos == 20);
}

TEST_CASE("split is deterministic for a fixed seed")
{
    std::vector<int> labels;
    for (int i = 0; i < 40; ++i)
        labels.push_back(i % 3 == 0);
    const TrainTestSplit a = split_train_test(labels, 0.8, 123);
    const TrainTestSplit b = split_train_test(labels, 0.8, 123);
    CHECK(a.train == b.train);
    CHECK(a.test == b.test);
}

TEST_CASE("small stratified split rounds per class")
{
    std::vector<int> labels = { 1, 1, 1, 0, 0, 0, 0, 0, 0, 0 };
    const TrainTestSplit split = split_train_test(labels, 0.8, 5);
    std::size_t train_pos = 0;
    for (const std::size_t i : split.train)
        train_pos += static_cast<std::size_t>(labels[i]);
    CHECK(train_pos == 2); // round(0.8 * 3)
    CHECK(split.train.size() == 8);
}

TEST_CASE("split rejects degenerate input")
{
    CHECK_THROWS_AS(split_train_test(std::vector<int> { 1, 1, 1, 1, 1 }, 0.8, 1), SplitError);
    CHECK_THROWS_AS(split_train_test(std::vector<int> { 1, 0 }, 0.8, 1), SplitError);
}

TEST_CASE("forest separates a margin-1 synthetic set perfectly")
{
    Rng rng(77);
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    separable_set(rng, 400, 5, rows, labels);
    const TrainTestSplit split = split_train_test(labels, 0.8, 7);

    std::vector<std::vector<double>> train_rows;
    std::vector<int> train_labels;
    for (const std::size_t i : split.train) {
        train_rows.push_back(rows[i]);
        train_labels.push_back(labels[i]);
    }
    ForestParams params;
    params.n_trees = 50;
    params.seed = 99;
    const Forest forest = train_forest(train_rows, train_labels, params);

    std::size_t correct = 0;
    for (const std::size_t i : split.test) {
        const int predicted = forest.predict(rows[i]) >= 0.5 ? 1 : 0;
        correct += predicted == labels[i];
    }
    CHECK(correct == split.test.size());
}

TEST_CASE("identical labels produce constant leaves")
{
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    Rng rng(3);
    for (int i = 0; i < 30; ++i) {
        rows.push_back({ rng.next_double(), rng.next_double() });
        labels.push_back(1);
    }
    ForestParams params;
    params.n_trees = 10;
    params.seed = 1;
    const Forest forest = train_forest(rows, labels, params);
    for (const DecisionTree& tree : forest.trees) {
        CHECK(tree.nodes.size() == 1);
        CHECK(tree.nodes[0].value == doctest::Approx(1.0));
    }
    CHECK(forest.predict(rows[0]) == doctest::Approx(1.0));
}

TEST_CASE("training twice with one seed gives identical forests")
{
    Rng rng(15);
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    separable_set(rng, 60, 3, rows, labels);
    ForestParams params;
    params.n_trees = 12;
    params.seed = 4242;
    const Forest a = train_forest(rows, labels, params);
    const Forest b = train_forest(rows, labels, params);
    REQUIRE(a.trees.size() == b.trees.size());
    for (std::size_t t = 0; t < a.trees.size(); ++t) {
        REQUIRE(a.trees[t].nodes.size() == b.trees[t].nodes.size());
        for (std::size_t n = 0; n < a.trees[t].nodes.size(); ++n) {
            CHECK(a.trees[t].nodes[n].feature == b.trees[t].nodes[n].feature);
            CHECK(a.trees[t].nodes[n].threshold == b.trees[t].nodes[n].threshold);
            CHECK(a.trees[t].nodes[n].value == b.trees[t].nodes[n].value);
        }
    }
}

TEST_CASE("prediction averages per-tree leaf values and stays in bounds")
{
    Forest forest;
    forest.n_features = 1;
    forest.trees.push_back(DecisionTree { { TreeNode { -1, 0, -1, -1, 10, 0.25 } } });
    CHECK(forest.predict(std::vector<double> { 0.0 }) == doctest::Approx(0.25));
    forest.trees.push_back(DecisionTree { { TreeNode { -1, 0, -1, -1, 10, 0.6 } } });
    CHECK(forest.predict(std::vector<double> { 0.0 }) == doctest::Approx(0.425));

    Rng rng(8);
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    separable_set(rng, 50, 2, rows, labels);
    ForestParams params;
    params.n_trees = 5;
    params.seed = 2;
    const Forest trained = train_forest(rows, labels, params);
    for (const auto& row : rows) {
        const double p = trained.predict(row);
        CHECK(p >= 0.0);
        CHECK(p <= 1.0);
    }
}

TEST_CASE("predict validates dimension")
{
    Forest forest;
    forest.n_features = 2;
    forest.trees.push_back(DecisionTree { { TreeNode { -1, 0, -1, -1, 1, 0.5 } } });
    CHECK_THROWS_AS(forest.predict(std::vector<double> { 1.0 }), Error);
}

TEST_CASE("forest serialization round-trips")
{
    Rng rng(21);
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    separable_set(rng, 40, 3, rows, labels);
    ForestParams params;
    params.n_trees = 4;
    params.seed = 31;
    const Forest forest = train_forest(rows, labels, params);
    std::stringstream buffer;
    forest.save(buffer);
    const Forest loaded = Forest::load(buffer);
    REQUIRE(loaded.trees.size() == forest.trees.size());
    for (const auto& row : rows)
        CHECK(loaded.predict(row) == doctest::Approx(forest.predict(row)).epsilon(1e-15));
}
