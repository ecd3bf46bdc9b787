#pragma once

#include "reviewpulse/labels.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace reviewpulse {

struct ConfusionMatrix {
    std::vector<std::string> labels;
    std::vector<std::vector<std::int64_t>> counts; // [gold][predicted]

    std::int64_t total() const;
    std::int64_t trace() const;
    std::int64_t row_total(std::size_t i) const;
    std::int64_t col_total(std::size_t j) const;
};

ConfusionMatrix confusion(const std::vector<std::string>& gold,
    const std::vector<std::string>& pred,
    const std::vector<std::string>& labels);

double overall_accuracy(const ConfusionMatrix& m);

// kappa = (p_o - p_e) / (1 - p_e); 1 when p_e = 1 (all mass on one agreeing label)
double cohen_kappa(const ConfusionMatrix& m);

// Unweighted mean of per-class F1; classes with no gold and no predicted
// instances contribute 0 and stay in the mean.
double macro_f1(const ConfusionMatrix& m);

enum class CollapseScheme {
    Full6,  // identity
    Stage1, // {None, General} -> "Not Valid"; Valid-* -> "Valid"
    Stage2, // {Uncertain, Unaddressed} -> "Not Addressed"; {Partially, Fully} -> "Addressed"
};

// Labels of the collapsed domain, in a fixed presentation order.
std::vector<std::string> collapse_domain(CollapseScheme scheme);

// Applies the scheme to every label. Stage2 requires all inputs Valid-*.
std::vector<std::string> collapse(const std::vector<SixClass>& labels, CollapseScheme scheme);

} // namespace reviewpulse
