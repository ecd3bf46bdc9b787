#include "reviewpulse/forest.hpp"

#include "reviewpulse/errors.hpp"
#include "reviewpulse/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

namespace reviewpulse {

double DecisionTree::predict(std::span<const double> x) const
{
    int node = 0;
    while (nodes[static_cast<std::size_t>(node)].feature >= 0) {
        const TreeNode& n = nodes[static_cast<std::size_t>(node)];
        node = x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
    }
    return nodes[static_cast<std::size_t>(node)].value;
}

int DecisionTree::max_depth() const
{
    if (nodes.empty())
        return 0;
    std::vector<std::pair<int, int>> stack { { 0, 0 } };
    int deepest = 0;
    while (!stack.empty()) {
        const auto [node, depth] = stack.back();
        stack.pop_back();
        deepest = std::max(deepest, depth);
        const TreeNode& n = nodes[static_cast<std::size_t>(node)];
        if (n.feature >= 0) {
            stack.push_back({ n.left, depth + 1 });
            stack.push_back({ n.right, depth + 1 });
        }
    }
    return deepest;
}

std::vector<int> DecisionTree::used_features() const
{
    std::set<int> features;
    for (const TreeNode& n : nodes)
        if (n.feature >= 0)
            features.insert(n.feature);
    return { features.begin(), features.end() };
}

double Forest::predict(std::span<const double> x) const
{
    if (static_cast<int>(x.size()) != n_features)
        throw Error("predict: expected " + std::to_string(n_features) + " features, got "
            + std::to_string(x.size()));
    double sum = 0.0;
    for (const DecisionTree& tree : trees)
        sum += tree.predict(x);
    return trees.empty() ? 0.0 : sum / static_cast<double>(trees.size());
}

void Forest::save(std::ostream& out) const
{
    out << "reviewpulse-forest v1\n";
    out << "features " << n_features << "\n";
    out << "trees " << trees.size() << "\n";
    out << "params " << params.n_trees << " " << params.max_depth << " "
        << params.min_leaf << " " << params.features_per_split << " "
        << (params.bootstrap ? 1 : 0) << " " << params.seed << "\n";
    char buf[96];
    for (const DecisionTree& tree : trees) {
        out << "tree " << tree.nodes.size() << "\n";
        for (const TreeNode& n : tree.nodes) {
            std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g", n.threshold, n.cover, n.value);
            out << n.feature << " " << n.left << " " << n.right << " " << buf << "\n";
        }
    }
}

Forest Forest::load(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line) || line != "reviewpulse-forest v1")
        throw Error("forest: unknown format header");
    Forest forest;
    std::size_t n_trees = 0;
    for (int i = 0; i < 3; ++i) {
        if (!std::getline(in, line))
            throw Error("forest: truncated header");
        std::istringstream fields(line);
        std::string key;
        fields >> key;
        if (key == "features")
            fields >> forest.n_features;
        else if (key == "trees")
            fields >> n_trees;
        else if (key == "params") {
            int bootstrap = 1;
            fields >> forest.params.n_trees >> forest.params.max_depth
                >> forest.params.min_leaf >> forest.params.features_per_split
                >> bootstrap >> forest.params.seed;
            forest.params.bootstrap = bootstrap != 0;
        } else
            throw Error("forest: unexpected header key " + key);
    }
    forest.trees.reserve(n_trees);
    for (std::size_t t = 0; t < n_trees; ++t) {
        if (!std::getline(in, line))
            throw Error("forest: truncated tree list");
        std::istringstream fields(line);
        std::string key;
        std::size_t count = 0;
        fields >> key >> count;
        if (key != "tree")
            throw Error("forest: expected tree record");
        DecisionTree tree;
        tree.nodes.resize(count);
        for (TreeNode& n : tree.nodes) {
            if (!std::getline(in, line))
                throw Error("forest: truncated node list");
            std::istringstream node_fields(line);
            node_fields >> n.feature >> n.left >> n.right >> n.threshold >> n.cover >> n.value;
        }
        forest.trees.push_back(std::move(tree));
    }
    return forest;
}

TrainTestSplit split_train_test(std::span<const int> labels, double train_fraction,
    std::uint64_t seed)
{
    if (labels.size() < 5)
        throw SplitError("need at least 5 labeled rows");
    std::vector<std::size_t> positives, negatives;
    for (std::size_t i = 0; i < labels.size(); ++i)
        (labels[i] ? positives : negatives).push_back(i);
    if (positives.empty() || negatives.empty())
        throw SplitError("single-class data cannot be split stratified");

    Rng rng(seed);
    TrainTestSplit split;
    auto take = [&](std::vector<std::size_t>& pool) {
        rng.shuffle(pool);
        const auto train_count = static_cast<std::size_t>(
            std::llround(train_fraction * static_cast<double>(pool.size())));
        for (std::size_t i = 0; i < pool.size(); ++i)
            (i < train_count ? split.train : split.test).push_back(pool[i]);
    };
    take(positives);
    take(negatives);
    std::sort(split.train.begin(), split.train.end());
    std::sort(split.test.begin(), split.test.end());
    return split;
}

namespace {

    struct Builder {
        const std::vector<std::vector<double>>& rows;
        std::span<const int> labels;
        const ForestParams& params;
        int n_features;
        Rng rng;
        std::vector<TreeNode> nodes;

        // gini impurity decrease for a candidate split, -1 when invalid
        struct Split {
            int feature = -1;
            double threshold = 0.0;
            double gain = -1.0;
        };

        Split best_split(const std::vector<std::size_t>& samples)
        {
            const std::size_t n = samples.size();
            std::size_t pos = 0;
            for (const std::size_t s : samples)
                pos += static_cast<std::size_t>(labels[s]);
            const double p = static_cast<double>(pos) / static_cast<double>(n);
            const double parent_gini = 2.0 * p * (1.0 - p);
            if (parent_gini == 0.0)
                return {};

            int mtry = params.features_per_split;
            if (mtry <= 0)
                mtry = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n_features))));
            mtry = std::min(mtry, n_features);

            // sample mtry distinct features
            std::vector<int> candidates(static_cast<std::size_t>(n_features));
            for (int f = 0; f < n_features; ++f)
                candidates[static_cast<std::size_t>(f)] = f;
            for (int i = 0; i < mtry; ++i) {
                const std::size_t j = static_cast<std::size_t>(i)
                    + rng.below(static_cast<std::uint64_t>(n_features - i));
                std::swap(candidates[static_cast<std::size_t>(i)], candidates[j]);
            }

            Split best;
            std::vector<std::pair<double, int>> ordered(n);
            for (int ci = 0; ci < mtry; ++ci) {
                const int f = candidates[static_cast<std::size_t>(ci)];
                for (std::size_t i = 0; i < n; ++i)
                    ordered[i] = { rows[samples[i]][static_cast<std::size_t>(f)],
                        labels[samples[i]] };
                std::sort(ordered.begin(), ordered.end());
                std::size_t left_n = 0, left_pos = 0;
                for (std::size_t i = 0; i + 1 < n; ++i) {
                    ++left_n;
                    left_pos += static_cast<std::size_t>(ordered[i].second);
                    if (ordered[i].first == ordered[i + 1].first)
                        continue;
                    const std::size_t right_n = n - left_n;
                    if (left_n < static_cast<std::size_t>(params.min_leaf)
                        || right_n < static_cast<std::size_t>(params.min_leaf))
                        continue;
                    const double pl = static_cast<double>(left_pos) / static_cast<double>(left_n);
                    const double pr = static_cast<double>(pos - left_pos) / static_cast<double>(right_n);
                    const double child_gini = (static_cast<double>(left_n) * 2.0 * pl * (1.0 - pl)
                                                  + static_cast<double>(right_n) * 2.0 * pr * (1.0 - pr))
                        / static_cast<double>(n);
                    const double gain = parent_gini - child_gini;
                    if (gain > best.gain + 1e-15) {
                        best.feature = f;
                        best.threshold = (ordered[i].first + ordered[i + 1].first) / 2.0;
                        best.gain = gain;
                    }
                }
            }
            return best;
        }

        int build(std::vector<std::size_t> samples, int depth)
        {
            const std::size_t n = samples.size();
            std::size_t pos = 0;
            for (const std::size_t s : samples)
                pos += static_cast<std::size_t>(labels[s]);

            const int node_id = static_cast<int>(nodes.size());
            nodes.emplace_back();
            nodes.back().cover = static_cast<double>(n);
            nodes.back().value = static_cast<double>(pos) / static_cast<double>(n);

            const bool depth_capped = params.max_depth >= 0 && depth >= params.max_depth;
            if (pos == 0 || pos == n || n < 2 * static_cast<std::size_t>(params.min_leaf)
                || depth_capped)
                return node_id;

            const Split split = best_split(samples);
            if (split.feature < 0)
                return node_id;

            std::vector<std::size_t> left, right;
            for (const std::size_t s : samples)
                (rows[s][static_cast<std::size_t>(split.feature)] <= split.threshold ? left : right)
                    .push_back(s);
            samples.clear();
            samples.shrink_to_fit();

            const int left_id = build(std::move(left), depth + 1);
            const int right_id = build(std::move(right), depth + 1);
            TreeNode& node = nodes[static_cast<std::size_t>(node_id)];
            node.feature = split.feature;
            node.threshold = split.threshold;
            node.left = left_id;
            node.right = right_id;
            const TreeNode& l = nodes[static_cast<std::size_t>(left_id)];
            const TreeNode& r = nodes[static_cast<std::size_t>(right_id)];
            node.value = (l.cover * l.value + r.cover * r.value) / (l.cover + r.cover);
            return node_id;
        }
    };

} // namespace

Forest train_forest(const std::vector<std::vector<double>>& rows,
    std::span<const int> labels, ForestParams params)
{
    if (rows.empty())
        throw Error("train_forest: empty training set");
    if (rows.size() != labels.size())
        throw Error("train_forest: row/label count mismatch");

    Forest forest;
    forest.n_features = static_cast<int>(rows.front().size());
    forest.params = params;
    forest.trees.reserve(static_cast<std::size_t>(params.n_trees));

    for (int t = 0; t < params.n_trees; ++t) {
        Rng rng(derive_seed(params.seed, static_cast<std::uint64_t>(t)));
        std::vector<std::size_t> samples;
        samples.reserve(rows.size());
        if (params.bootstrap) {
            for (std::size_t i = 0; i < rows.size(); ++i)
                samples.push_back(rng.below(rows.size()));
            std::sort(samples.begin(), samples.end());
        } else {
            for (std::size_t i = 0; i < rows.size(); ++i)
                samples.push_back(i);
        }
        Builder builder { rows, labels, params, forest.n_features, std::move(rng), {} };
        builder.build(std::move(samples), 0);
        forest.trees.push_back(DecisionTree { std::move(builder.nodes) });
    }
    return forest;
}

} // namespace reviewpulse
