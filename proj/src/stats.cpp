#include "reviewpulse/stats.hpp"

#include "reviewpulse/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace reviewpulse {

namespace {

    double log_factorial(std::int64_t n)
    {
        return std::lgamma(static_cast<double>(n) + 1.0);
    }

    // log C(n, k)
    double log_choose(std::int64_t n, std::int64_t k)
    {
        return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
    }

} // namespace

double fisher_exact(const ContingencyTable2x2& t)
{
    if (t.a < 0 || t.b < 0 || t.c < 0 || t.d < 0)
        throw Error("fisher_exact: counts must be nonnegative");
    const std::int64_t n = t.total();
    if (n == 0)
        throw Error("fisher_exact: empty table");
    const std::int64_t r1 = t.a + t.b;
    const std::int64_t r2 = t.c + t.d;
    const std::int64_t c1 = t.a + t.c;
    const std::int64_t c2 = t.b + t.d;
    if (r1 == 0 || r2 == 0 || c1 == 0 || c2 == 0)
        return 1.0;

    const double denom = log_choose(n, c1);
    auto prob = [&](std::int64_t x) {
        return std::exp(log_choose(r1, x) + log_choose(r2, c1 - x) - denom);
    };

    const double p_obs = prob(t.a);
    const std::int64_t lo = std::max<std::int64_t>(0, c1 - r2);
    const std::int64_t hi = std::min(r1, c1);
    double p = 0.0;
    for (std::int64_t x = lo; x <= hi; ++x) {
        const double px = prob(x);
        if (px <= p_obs + 1e-12)
            p += px;
    }
    return std::min(p, 1.0);
}

CorrelationResult pearson(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size())
        throw Error("pearson: length mismatch");
    if (x.size() < 2)
        throw Error("pearson: need at least two observations");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0)
        return { 0.0, true };
    return { sxy / std::sqrt(sxx * syy), false };
}

std::size_t QuantileBins::bin_of(double v) const
{
    for (std::size_t i = 0; i + 1 < uppers.size(); ++i)
        if (v <= uppers[i])
            return i;
    return uppers.empty() ? 0 : uppers.size() - 1;
}

std::string QuantileBins::interval_label(std::size_t bin) const
{
    auto fmt = [](double v) {
        char buf[64];
        if (v == static_cast<std::int64_t>(v) && std::abs(v) < 1e15)
            std::snprintf(buf, sizeof(buf), "%lld", static_cast<long long>(v));
        else
            std::snprintf(buf, sizeof(buf), "%.2f", v);
        return std::string(buf);
    };
    const double lo = bin == 0 ? minimum : uppers[bin - 1];
    const double hi = uppers[bin];
    // the lowest interval is extended to include the minimum: render its open
    // lower bound with a leading minus, e.g. "(-0.00, 0.00]"
    if (bin == 0) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.2f", lo);
        std::string lo_text(buf);
        if (!lo_text.empty() && lo_text.front() != '-')
            lo_text = "-" + lo_text;
        return "(" + lo_text + ", " + fmt(hi) + "]";
    }
    return "(" + fmt(lo) + ", " + fmt(hi) + "]";
}

QuantileBins quantile_bins(std::vector<double> values, int k)
{
    if (values.empty())
        throw Error("quantile_bins: no values");
    if (k < 1)
        throw Error("quantile_bins: k must be positive");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    QuantileBins bins;
    bins.minimum = values.front();
    const double maximum = values.back();
    for (int i = 1; i < k; ++i) {
        // lower quantile: value at rank ceil(n * i / k), 1-indexed
        const std::size_t rank = (n * static_cast<std::size_t>(i) + static_cast<std::size_t>(k) - 1)
            / static_cast<std::size_t>(k);
        const double edge = values[rank - 1];
        if (edge >= maximum)
            break;
        if (bins.uppers.empty() || edge > bins.uppers.back())
            bins.uppers.push_back(edge);
    }
    bins.uppers.push_back(maximum);
    return bins;
}

BinnedRateTable rate_table(const std::vector<RateRecord>& records, const QuantileBins& bins)
{
    BinnedRateTable table;
    table.bins = bins;
    auto group_index = [&](const std::string& name) {
        for (std::size_t i = 0; i < table.groups.size(); ++i)
            if (table.groups[i] == name)
                return i;
        table.groups.push_back(name);
        table.cells.emplace_back(bins.bin_count());
        return table.groups.size() - 1;
    };
    for (const RateRecord& rec : records) {
        const std::size_t g = group_index(rec.group);
        if (rec.value < bins.minimum || (!bins.uppers.empty() && rec.value > bins.uppers.back()))
            ++table.out_of_range;
        const std::size_t b = bins.bin_of(rec.value);
        RateCell& cell = table.cells[g][b];
        ++cell.count;
        if (rec.addressed)
            ++cell.addressed;
    }
    return table;
}

} // namespace reviewpulse
