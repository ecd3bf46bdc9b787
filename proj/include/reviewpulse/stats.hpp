#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace reviewpulse {

// rows = condition, columns = addressed / not addressed
struct ContingencyTable2x2 {
    std::int64_t a = 0;
    std::int64_t b = 0;
    std::int64_t c = 0;
    std::int64_t d = 0;

    std::int64_t total() const { return a + b + c + d; }
};

// Two-sided Fisher exact p-value: hypergeometric enumeration over all tables
// with the observed margins; sums probabilities <= P(observed) + 1e-12.
// Degenerate margins (an all-zero row or column) yield 1.
double fisher_exact(const ContingencyTable2x2& t);

struct CorrelationResult {
    double value = 0.0;
    bool constant_input = false; // value forced to 0 because an input was constant
};

CorrelationResult pearson(std::span<const double> x, std::span<const double> y);

// Quantile bin edges over pooled values: interior cut points at the i/k lower
// quantiles plus the maximum; duplicate edges merged. Intervals are half-open
// (lo, hi] with the lowest extended to include the minimum.
struct QuantileBins {
    double minimum = 0.0;
    std::vector<double> uppers; // ascending; last element is the maximum

    std::size_t bin_count() const { return uppers.size(); }
    // index of the bin holding v; out-of-range values clamp to a boundary bin
    std::size_t bin_of(double v) const;
    std::string interval_label(std::size_t bin) const;
};

QuantileBins quantile_bins(std::vector<double> values, int k = 5);

struct RateCell {
    std::int64_t count = 0;
    std::int64_t addressed = 0;

    double fraction() const
    {
        return count > 0 ? static_cast<double>(addressed) / static_cast<double>(count) : 0.0;
    }
};

struct RateRecord {
    std::string group;
    double value = 0.0;
    bool addressed = false;
};

struct BinnedRateTable {
    QuantileBins bins;
    std::vector<std::string> groups;                   // insertion order
    std::vector<std::vector<RateCell>> cells;          // [group][bin]
    std::int64_t out_of_range = 0;                     // clamped values, logged
};

BinnedRateTable rate_table(const std::vector<RateRecord>& records, const QuantileBins& bins);

} // namespace reviewpulse
