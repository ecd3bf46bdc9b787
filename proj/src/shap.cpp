#include "reviewpulse/shap.hpp"

#include "reviewpulse/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>

namespace reviewpulse {

double ShapExplanation::sum() const
{
    return std::accumulate(phi.begin(), phi.end(), base);
}

namespace {

    struct PathElement {
        int feature_index = -1;
        double zero_fraction = 0.0;
        double one_fraction = 0.0;
        double pweight = 0.0;
    };

    void extend_path(PathElement* path, int depth, double zero_fraction,
        double one_fraction, int feature_index)
    {
        path[depth] = { feature_index, zero_fraction, one_fraction, depth == 0 ? 1.0 : 0.0 };
        for (int i = depth - 1; i >= 0; --i) {
            path[i + 1].pweight += one_fraction * path[i].pweight * (i + 1)
                / static_cast<double>(depth + 1);
            path[i].pweight = zero_fraction * path[i].pweight * (depth - i)
                / static_cast<double>(depth + 1);
        }
    }

    void unwind_path(PathElement* path, int depth, int index)
    {
        const double one_fraction = path[index].one_fraction;
        const double zero_fraction = path[index].zero_fraction;
        double next_one = path[depth].pweight;
        for (int i = depth - 1; i >= 0; --i) {
            if (one_fraction != 0.0) {
                const double tmp = path[i].pweight;
                path[i].pweight = next_one * (depth + 1) / static_cast<double>((i + 1) * one_fraction);
                next_one = tmp - path[i].pweight * zero_fraction * (depth - i)
                    / static_cast<double>(depth + 1);
            } else {
                path[i].pweight = path[i].pweight * (depth + 1)
                    / (zero_fraction * static_cast<double>(depth - i));
            }
        }
        for (int i = index; i < depth; ++i) {
            path[i].feature_index = path[i + 1].feature_index;
            path[i].zero_fraction = path[i + 1].zero_fraction;
            path[i].one_fraction = path[i + 1].one_fraction;
        }
    }

    double unwound_path_sum(const PathElement* path, int depth, int index)
    {
        const double one_fraction = path[index].one_fraction;
        const double zero_fraction = path[index].zero_fraction;
        double next_one = path[depth].pweight;
        double total = 0.0;
        if (one_fraction != 0.0) {
            for (int i = depth - 1; i >= 0; --i) {
                const double tmp = next_one / static_cast<double>((i + 1) * one_fraction);
                total += tmp;
                next_one = path[i].pweight - tmp * zero_fraction * (depth - i);
            }
        } else {
            for (int i = depth - 1; i >= 0; --i)
                total += path[i].pweight / (zero_fraction * static_cast<double>(depth - i));
        }
        return total * (depth + 1);
    }

    void shap_recurse(const DecisionTree& tree, std::span<const double> x,
        std::vector<double>& phi, int node_index, int depth,
        PathElement* parent_path, double parent_zero_fraction,
        double parent_one_fraction, int parent_feature_index)
    {
        PathElement* path = parent_path + depth + 1;
        std::copy(parent_path, parent_path + depth + 1, path);
        extend_path(path, depth, parent_zero_fraction, parent_one_fraction, parent_feature_index);

        const TreeNode& node = tree.nodes[static_cast<std::size_t>(node_index)];
        if (node.feature < 0) {
            for (int i = 1; i <= depth; ++i) {
                const double w = unwound_path_sum(path, depth, i);
                const PathElement& el = path[i];
                phi[static_cast<std::size_t>(el.feature_index)]
                    += w * (el.one_fraction - el.zero_fraction) * node.value;
            }
            return;
        }

        const int hot = x[static_cast<std::size_t>(node.feature)] <= node.threshold
            ? node.left
            : node.right;
        const int cold = hot == node.left ? node.right : node.left;
        const double hot_zero = tree.nodes[static_cast<std::size_t>(hot)].cover / node.cover;
        const double cold_zero = tree.nodes[static_cast<std::size_t>(cold)].cover / node.cover;

        double incoming_zero = 1.0;
        double incoming_one = 1.0;
        int path_index = 0;
        for (; path_index <= depth; ++path_index)
            if (path[path_index].feature_index == node.feature)
                break;
        if (path_index != depth + 1) {
            incoming_zero = path[path_index].zero_fraction;
            incoming_one = path[path_index].one_fraction;
            unwind_path(path, depth, path_index);
            depth -= 1;
        }

        shap_recurse(tree, x, phi, hot, depth + 1, path,
            hot_zero * incoming_zero, incoming_one, node.feature);
        shap_recurse(tree, x, phi, cold, depth + 1, path,
            cold_zero * incoming_zero, 0.0, node.feature);
    }

    std::vector<double> single_tree_shap(const DecisionTree& tree, std::span<const double> x,
        int n_features)
    {
        std::vector<double> phi(static_cast<std::size_t>(n_features), 0.0);
        if (tree.nodes.empty())
            return phi;
        const int maxd = tree.max_depth() + 2;
        std::vector<PathElement> path_storage(static_cast<std::size_t>(maxd * (maxd + 1)) / 2);
        shap_recurse(tree, x, phi, 0, 0, path_storage.data(), 1.0, 1.0, -1);
        return phi;
    }

} // namespace

ShapExplanation tree_shap(const Forest& forest, std::span<const double> x)
{
    if (static_cast<int>(x.size()) != forest.n_features)
        throw Error("tree_shap: expected " + std::to_string(forest.n_features)
            + " features, got " + std::to_string(x.size()));
    ShapExplanation result;
    result.phi.assign(static_cast<std::size_t>(forest.n_features), 0.0);
    for (const DecisionTree& tree : forest.trees) {
        const std::vector<double> phi = single_tree_shap(tree, x, forest.n_features);
        for (std::size_t i = 0; i < phi.size(); ++i)
            result.phi[i] += phi[i];
        result.base += tree.expected_value();
    }
    const double n = static_cast<double>(forest.trees.size());
    if (!forest.trees.empty()) {
        for (double& v : result.phi)
            v /= n;
        result.base /= n;
    }
    return result;
}

namespace {

    // cover-weighted conditional expectation with features in `mask` pinned to x
    double descend(const DecisionTree& tree, std::span<const double> x,
        std::uint32_t mask, const std::map<int, int>& feature_bit, int node_index)
    {
        const TreeNode& node = tree.nodes[static_cast<std::size_t>(node_index)];
        if (node.feature < 0)
            return node.value;
        const auto bit = feature_bit.find(node.feature);
        const bool conditioned = bit != feature_bit.end() && (mask >> bit->second & 1u);
        if (conditioned) {
            const int next = x[static_cast<std::size_t>(node.feature)] <= node.threshold
                ? node.left
                : node.right;
            return descend(tree, x, mask, feature_bit, next);
        }
        const TreeNode& l = tree.nodes[static_cast<std::size_t>(node.left)];
        const TreeNode& r = tree.nodes[static_cast<std::size_t>(node.right)];
        const double lv = descend(tree, x, mask, feature_bit, node.left);
        const double rv = descend(tree, x, mask, feature_bit, node.right);
        return (l.cover * lv + r.cover * rv) / (l.cover + r.cover);
    }

} // namespace

std::vector<double> brute_shapley(const DecisionTree& tree, std::span<const double> x,
    int n_features)
{
    const std::vector<int> used = tree.used_features();
    const int u = static_cast<int>(used.size());
    if (u > 15)
        throw OracleTooLarge("brute_shapley limited to 15 used features, tree has "
            + std::to_string(u));

    std::vector<double> phi(static_cast<std::size_t>(n_features), 0.0);
    if (u == 0)
        return phi;

    std::map<int, int> feature_bit;
    for (int i = 0; i < u; ++i)
        feature_bit[used[static_cast<std::size_t>(i)]] = i;

    // v(S) for every subset of used features
    const std::uint32_t n_masks = 1u << u;
    std::vector<double> value(n_masks, 0.0);
    for (std::uint32_t mask = 0; mask < n_masks; ++mask)
        value[mask] = descend(tree, x, mask, feature_bit, 0);

    std::vector<double> factorial(static_cast<std::size_t>(u) + 1, 1.0);
    for (int i = 1; i <= u; ++i)
        factorial[static_cast<std::size_t>(i)] = factorial[static_cast<std::size_t>(i - 1)] * i;

    for (int i = 0; i < u; ++i) {
        const std::uint32_t bit = 1u << i;
        double total = 0.0;
        for (std::uint32_t mask = 0; mask < n_masks; ++mask) {
            if (mask & bit)
                continue;
            const int s = std::popcount(mask);
            const double weight = factorial[static_cast<std::size_t>(s)]
                * factorial[static_cast<std::size_t>(u - s - 1)]
                / factorial[static_cast<std::size_t>(u)];
            total += weight * (value[mask | bit] - value[mask]);
        }
        phi[static_cast<std::size_t>(used[static_cast<std::size_t>(i)])] = total;
    }
    return phi;
}

FeatureReport feature_report(const std::vector<ShapExplanation>& explanations,
    const std::vector<std::vector<double>>& rows,
    const std::vector<std::string>& feature_names,
    const std::vector<std::string>& feature_groups)
{
    if (explanations.size() != rows.size())
        throw Error("feature_report: explanation/row count mismatch");
    if (feature_names.size() != feature_groups.size())
        throw Error("feature_report: name/group count mismatch");
    if (explanations.empty())
        throw Error("feature_report: nothing to report");

    const std::size_t d = feature_names.size();
    FeatureReport report;
    report.features.reserve(d);

    std::vector<double> phi_col(explanations.size());
    std::vector<double> value_col(explanations.size());
    for (std::size_t j = 0; j < d; ++j) {
        FeatureStats stats;
        stats.name = feature_names[j];
        stats.group = feature_groups[j];
        double abs_sum = 0.0;
        for (std::size_t i = 0; i < explanations.size(); ++i) {
            phi_col[i] = explanations[i].phi[j];
            value_col[i] = rows[i][j];
            abs_sum += std::abs(phi_col[i]);
        }
        stats.importance = abs_sum / static_cast<double>(explanations.size());
        const CorrelationResult r = pearson(value_col, phi_col);
        stats.directionality = r.value;
        stats.constant = r.constant_input;
        report.features.push_back(std::move(stats));
    }

    std::vector<std::string> group_order;
    std::map<std::string, GroupStats> group_map;
    for (const FeatureStats& f : report.features) {
        if (!group_map.count(f.group))
            group_order.push_back(f.group);
        GroupStats& g = group_map[f.group];
        g.name = f.group;
        g.sum_abs_phi += f.importance;
        ++g.size;
    }
    for (const std::string& name : group_order) {
        GroupStats g = group_map[name];
        g.mean_abs_phi = g.sum_abs_phi / static_cast<double>(g.size);
        report.groups.push_back(g);
    }
    std::stable_sort(report.groups.begin(), report.groups.end(),
        [](const GroupStats& a, const GroupStats& b) { return a.sum_abs_phi > b.sum_abs_phi; });
    return report;
}

} // namespace reviewpulse
