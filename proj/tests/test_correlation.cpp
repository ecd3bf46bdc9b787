#include <doctest.h>

#include "reviewpulse/correlation.hpp"
#include "reviewpulse/rng.hpp"

#include <algorithm>
#include <cmath>

using namespace reviewpulse;

namespace {

// independent rank-then-Pearson oracle
double spearman_oracle(const std::vector<double>& x, const std::vector<double>& y)
{
    auto rank = [](const std::vector<double>& v) {
        std::vector<double> r(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            double less = 0, equal = 0;
            for (std::size_t j = 0; j < v.size(); ++j) {
                less += v[j] < v[i];
                equal += v[j] == v[i];
            }
            r[i] = less + (equal + 1.0) / 2.0;
        }
        return r;
    };
    const std::vector<double> rx = rank(x);
    const std::vector<double> ry = rank(y);
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += rx[i];
        my += ry[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

} // namespace

TEST_CASE("spearman on monotone pairs")
{
    const std::vector<double> x = { 1, 2, 5, 9 };
    const std::vector<double> y = { 10, 20, 21, 40 };
    CHECK(spearman(x, y).value == doctest::Approx(1.0).epsilon(1e-12));
    const std::vector<double> rev = { 40, 21, 20, 10 };
    CHECK(spearman(x, rev).value == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("spearman with ties matches the rank-then-Pearson oracle")
{
    const std::vector<double> x = { 1, 2, 2, 3 };
    const std::vector<double> y = { 1, 3, 2, 4 };
    CHECK(spearman(x, y).value == doctest::Approx(spearman_oracle(x, y)).epsilon(1e-12));
}

TEST_CASE("spearman matches the oracle on random data")
{
    Rng rng(17);
    for (int iter = 0; iter < 100; ++iter) {
        std::vector<double> x, y;
        const std::size_t n = 3 + rng.below(30);
        for (std::size_t i = 0; i < n; ++i) {
            x.push_back(static_cast<double>(rng.below(8)));
            y.push_back(static_cast<double>(rng.below(8)));
        }
        const auto r = spearman(x, y);
        if (r.constant_input)
            continue;
        CHECK(r.value == doctest::Approx(spearman_oracle(x, y)).epsilon(1e-12));
    }
}

TEST_CASE("average ranks assign mid-ranks to ties")
{
    const std::vector<double> v = { 10, 20, 20, 30 };
    const std::vector<double> r = average_ranks(v);
    CHECK(r == std::vector<double> { 1.0, 2.5, 2.5, 4.0 });
}

TEST_CASE("autospearman prunes exactly one of a duplicated column")
{
    Rng rng(23);
    std::vector<double> base;
    for (int i = 0; i < 60; ++i)
        base.push_back(rng.next_double());
    std::vector<double> noise;
    for (int i = 0; i < 60; ++i)
        noise.push_back(rng.next_double());
    const auto result = autospearman({ base, base, noise }, { "a", "a_copy", "c" });
    CHECK(result.removed.size() == 1);
    CHECK(result.retained.size() == 2);
    CHECK(std::find(result.retained.begin(), result.retained.end(), "c") != result.retained.end());
}

TEST_CASE("independent random columns survive")
{
    Rng rng(29);
    std::vector<std::vector<double>> columns(6, std::vector<double>(200));
    std::vector<std::string> names;
    for (std::size_t c = 0; c < columns.size(); ++c) {
        names.push_back("f" + std::to_string(c));
        for (auto& v : columns[c])
            v = rng.next_double();
    }
    // verify the premise: no pair exceeds the threshold
    bool premise = true;
    for (std::size_t i = 0; i < columns.size(); ++i)
        for (std::size_t j = i + 1; j < columns.size(); ++j)
            premise = premise && std::abs(spearman(columns[i], columns[j]).value) <= 0.7;
    REQUIRE(premise);
    const auto result = autospearman(columns, names);
    CHECK(result.removed.empty());
    CHECK(result.retained == names);
}

TEST_CASE("a collinear triple loses two members")
{
    std::vector<double> x;
    for (int i = 0; i < 50; ++i)
        x.push_back(i);
    std::vector<double> x2, x3;
    for (const double v : x) {
        x2.push_back(2 * v + 1);
        x3.push_back(v * v); // still rank-identical
    }
    const auto result = autospearman({ x, x2, x3 }, { "x", "x2", "x3" });
    CHECK(result.removed.size() == 2);
    CHECK(result.retained.size() == 1);
}

TEST_CASE("retained pairwise correlation never exceeds the threshold")
{
    Rng rng(31);
    for (int iter = 0; iter < 100; ++iter) {
        const std::size_t n_cols = 3 + rng.below(5);
        const std::size_t n_rows = 40;
        std::vector<std::vector<double>> columns(n_cols, std::vector<double>(n_rows));
        std::vector<std::string> names;
        for (std::size_t c = 0; c < n_cols; ++c) {
            names.push_back("f" + std::to_string(c));
            if (c > 0 && rng.below(3) == 0) {
                // correlated with an earlier column plus noise
                const auto& prev = columns[rng.below(c)];
                for (std::size_t i = 0; i < n_rows; ++i)
                    columns[c][i] = prev[i] + 0.1 * rng.next_double();
            } else {
                for (std::size_t i = 0; i < n_rows; ++i)
                    columns[c][i] = rng.next_double();
            }
        }
        const auto result = autospearman(columns, names);
        for (std::size_t i = 0; i < n_cols; ++i) {
            for (std::size_t j = i + 1; j < n_cols; ++j) {
                const bool i_kept = std::find(result.retained.begin(), result.retained.end(),
                                        names[i])
                    != result.retained.end();
                const bool j_kept = std::find(result.retained.begin(), result.retained.end(),
                                        names[j])
                    != result.retained.end();
                if (i_kept && j_kept)
                    CHECK(std::abs(spearman(columns[i], columns[j]).value) <= 0.7 + 1e-12);
            }
        }
        // removed + retained partition the input names
        CHECK(result.retained.size() + result.removed.size() == n_cols);
    }
}
