#pragma once

#include "reviewpulse/stats.hpp"

#include <span>
#include <string>
#include <vector>

namespace reviewpulse {

// Spearman rank correlation: Pearson over mid-ranked values.
// Constant input yields 0 with the flag set.
CorrelationResult spearman(std::span<const double> x, std::span<const double> y);

// Average ranks (1-based) with ties sharing the mid-rank.
std::vector<double> average_ranks(std::span<const double> values);

struct RemovedFeature {
    std::string name;
    std::string partner; // the feature it was correlated with
    double rho = 0.0;
};

struct AutoSpearmanResult {
    std::vector<std::string> retained; // original order
    std::vector<RemovedFeature> removed;
};

// Iteratively removes one member of the most-correlated pair (|rho| above
// threshold) until no pair exceeds it. The member with the larger mean |rho|
// against all remaining features is dropped.
AutoSpearmanResult autospearman(const std::vector<std::vector<double>>& columns,
    const std::vector<std::string>& names,
    double threshold = 0.7);

} // namespace reviewpulse
