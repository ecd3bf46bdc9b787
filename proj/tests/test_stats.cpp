#include <doctest.h>

#include "reviewpulse/errors.hpp"
#include "reviewpulse/rng.hpp"
#include "reviewpulse/stats.hpp"

#include <cmath>
#include <numeric>

using namespace reviewpulse;

namespace {

double log_choose(std::int64_t n, std::int64_t k)
{
    return std::lgamma(static_cast<double>(n + 1)) - std::lgamma(static_cast<double>(k + 1))
        - std::lgamma(static_cast<double>(n - k + 1));
}

// independent hypergeometric enumeration
double fisher_oracle(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d)
{
    const std::int64_t r1 = a + b, r2 = c + d, c1 = a + c, n = a + b + c + d;
    if (r1 == 0 || r2 == 0 || c1 == 0 || b + d == 0)
        return 1.0;
    std::vector<double> probs;
    const std::int64_t lo = std::max<std::int64_t>(0, c1 - r2);
    const std::int64_t hi = std::min(r1, c1);
    double p_obs = 0.0;
    for (std::int64_t x = lo; x <= hi; ++x) {
        const double p = std::exp(log_choose(r1, x) + log_choose(r2, c1 - x) - log_choose(n, c1));
        probs.push_back(p);
        if (x == a)
            p_obs = p;
    }
    double total = 0.0;
    for (const double p : probs)
        if (p <= p_obs + 1e-12)
            total += p;
    return std::min(total, 1.0);
}

} // namespace

TEST_CASE("fisher exact on the worked 4x4-margin table")
{
    // all margins 4: p = (1 + 16 + 16 + 1) / 70
    const double p = fisher_exact({ 3, 1, 1, 3 });
    CHECK(p == doctest::Approx(34.0 / 70.0).epsilon(1e-12));
}

TEST_CASE("identical rows give p = 1")
{
    CHECK(fisher_exact({ 5, 7, 5, 7 }) == doctest::Approx(1.0));
}

TEST_CASE("degenerate margins give p = 1")
{
    CHECK(fisher_exact({ 0, 4, 0, 6 }) == doctest::Approx(1.0));
    CHECK(fisher_exact({ 0, 0, 3, 7 }) == doctest::Approx(1.0));
}

TEST_CASE("fisher exact matches enumeration oracle on random tables")
{
    Rng rng(99);
    for (int iter = 0; iter < 1000; ++iter) {
        const std::int64_t a = static_cast<std::int64_t>(rng.below(11));
        const std::int64_t b = static_cast<std::int64_t>(rng.below(11));
        const std::int64_t c = static_cast<std::int64_t>(rng.below(11));
        const std::int64_t d = static_cast<std::int64_t>(rng.below(11));
        if (a + b + c + d == 0)
            continue;
        const double ours = fisher_exact({ a, b, c, d });
        const double expected = fisher_oracle(a, b, c, d);
        CHECK(ours == doctest::Approx(expected).epsilon(1e-9));
    }
}

TEST_CASE("fisher exact is symmetric under row and column swaps")
{
    Rng rng(123);
    for (int iter = 0; iter < 200; ++iter) {
        const std::int64_t a = static_cast<std::int64_t>(rng.below(9));
        const std::int64_t b = static_cast<std::int64_t>(rng.below(9));
        const std::int64_t c = static_cast<std::int64_t>(rng.below(9));
        const std::int64_t d = static_cast<std::int64_t>(rng.below(9));
        if (a + b + c + d == 0)
            continue;
        const double base = fisher_exact({ a, b, c, d });
        CHECK(fisher_exact({ c, d, a, b }) == doctest::Approx(base).epsilon(1e-9));
        CHECK(fisher_exact({ b, a, d, c }) == doctest::Approx(base).epsilon(1e-9));
    }
}

TEST_CASE("hypergeometric probabilities sum to one over the margin family")
{
    const std::int64_t r1 = 9, r2 = 13, c1 = 11;
    double total = 0.0;
    const std::int64_t lo = std::max<std::int64_t>(0, c1 - r2);
    const std::int64_t hi = std::min(r1, c1);
    for (std::int64_t x = lo; x <= hi; ++x)
        total += std::exp(log_choose(r1, x) + log_choose(r2, c1 - x) - log_choose(r1 + r2, c1));
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("pearson on affine and anti-affine inputs")
{
    const std::vector<double> x = { 1, 2, 3, 4, 5 };
    std::vector<double> y;
    for (const double v : x)
        y.push_back(2 * v + 3);
    CHECK(pearson(x, y).value == doctest::Approx(1.0).epsilon(1e-12));
    for (auto& v : y)
        v = -v;
    CHECK(pearson(x, y).value == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("pearson worked example")
{
    const std::vector<double> x = { 1, 2, 3, 4 };
    const std::vector<double> y = { 2, 1, 4, 3 };
    CHECK(pearson(x, y).value == doctest::Approx(0.6).epsilon(1e-12));
}

TEST_CASE("pearson flags constant input")
{
    const std::vector<double> x = { 1, 1, 1 };
    const std::vector<double> y = { 2, 3, 4 };
    const auto r = pearson(x, y);
    CHECK(r.value == 0.0);
    CHECK(r.constant_input);
    CHECK_THROWS_AS(pearson(std::vector<double> { 1.0 }, std::vector<double> { 2.0, 3.0 }), Error);
}

TEST_CASE("quantile bins on 1..100 cut at 20/40/60/80")
{
    std::vector<double> values(100);
    std::iota(values.begin(), values.end(), 1.0);
    const QuantileBins bins = quantile_bins(values, 5);
    REQUIRE(bins.uppers.size() == 5);
    CHECK(bins.uppers[0] == 20.0);
    CHECK(bins.uppers[1] == 40.0);
    CHECK(bins.uppers[2] == 60.0);
    CHECK(bins.uppers[3] == 80.0);
    CHECK(bins.uppers[4] == 100.0);
    CHECK(bins.minimum == 1.0);
}

TEST_CASE("all-equal values collapse to a single bin")
{
    const QuantileBins bins = quantile_bins({ 3, 3, 3, 3 }, 5);
    CHECK(bins.bin_count() == 1);
    CHECK(bins.uppers[0] == 3.0);
}

TEST_CASE("heavy mass at zero produces a (-0.00, 0.00] first bin")
{
    std::vector<double> values(40, 0.0);
    for (int i = 1; i <= 60; ++i)
        values.push_back(i / 60.0);
    const QuantileBins bins = quantile_bins(values, 5);
    CHECK(bins.uppers[0] == 0.0);
    CHECK(bins.minimum == 0.0);
    CHECK(bins.interval_label(0) == "(-0.00, 0]");
    CHECK(bins.bin_of(0.0) == 0);
}

TEST_CASE("rate table counts and fractions")
{
    std::vector<double> pooled;
    std::vector<RateRecord> records;
    for (int i = 0; i < 10; ++i) {
        const double v = i < 5 ? 0.1 : 0.9;
        pooled.push_back(v);
        records.push_back({ i % 2 ? "human" : "actions", v, i % 3 == 0 });
    }
    const QuantileBins bins = quantile_bins(pooled, 2);
    const BinnedRateTable table = rate_table(records, bins);
    REQUIRE(table.groups.size() == 2);
    std::int64_t total = 0;
    for (const auto& row : table.cells)
        for (const RateCell& cell : row)
            total += cell.count;
    CHECK(total == 10);

    // single addressed record lands in its cell with fraction 1
    const BinnedRateTable one = rate_table({ { "human", 0.5, true } }, bins);
    CHECK(one.cells[0][one.bins.bin_of(0.5)].count == 1);
    CHECK(one.cells[0][one.bins.bin_of(0.5)].fraction() == doctest::Approx(1.0));
}

TEST_CASE("binning conserves per-group counts")
{
    Rng rng(5);
    std::vector<RateRecord> records;
    std::vector<double> pooled;
    std::int64_t humans = 0;
    for (int i = 0; i < 200; ++i) {
        const double v = rng.next_double();
        const bool human = rng.below(2) == 0;
        humans += human;
        pooled.push_back(v);
        records.push_back({ human ? "human" : "actions", v, rng.below(2) == 0 });
    }
    const BinnedRateTable table = rate_table(records, quantile_bins(pooled, 5));
    std::int64_t human_total = 0, action_total = 0;
    for (std::size_t g = 0; g < table.groups.size(); ++g) {
        for (const RateCell& cell : table.cells[g]) {
            if (table.groups[g] == "human")
                human_total += cell.count;
            else
                action_total += cell.count;
        }
    }
    CHECK(human_total == humans);
    CHECK(action_total == 200 - humans);
}
