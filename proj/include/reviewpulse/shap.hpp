#pragma once

#include "reviewpulse/forest.hpp"
#include "reviewpulse/stats.hpp"

#include <span>
#include <string>
#include <vector>

namespace reviewpulse {

struct ShapExplanation {
    std::vector<double> phi; // one per feature
    double base = 0.0;       // expected model output

    double sum() const;
};

// Path-dependent tree Shapley values (conditional expectations weighted by
// training covers), summed across trees and divided by the tree count so that
// base + sum(phi) equals Forest::predict(x).
ShapExplanation tree_shap(const Forest& forest, std::span<const double> x);

// Exact Shapley by enumeration over all subsets of the tree's used features;
// the value function descends the tree taking cover-weighted averages for
// features outside the subset. Test oracle for tree_shap; throws
// OracleTooLarge beyond 15 used features.
std::vector<double> brute_shapley(const DecisionTree& tree, std::span<const double> x,
    int n_features);

struct FeatureStats {
    std::string name;
    std::string group;
    double importance = 0.0;     // mean |phi| across explained instances
    double directionality = 0.0; // Pearson of (feature value, phi)
    bool constant = false;       // directionality forced to 0
};

struct GroupStats {
    std::string name;
    double sum_abs_phi = 0.0;  // sum of member importances
    double mean_abs_phi = 0.0; // mean of member importances
    std::size_t size = 0;
};

struct FeatureReport {
    std::vector<FeatureStats> features; // input order
    std::vector<GroupStats> groups;     // ranked by sum_abs_phi, descending
};

// Per-feature importance/directionality plus group rollups over a test set.
FeatureReport feature_report(const std::vector<ShapExplanation>& explanations,
    const std::vector<std::vector<double>>& rows,
    const std::vector<std::string>& feature_names,
    const std::vector<std::string>& feature_groups);

} // namespace reviewpulse
