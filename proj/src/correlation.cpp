#include "reviewpulse/correlation.hpp"

#include "reviewpulse/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace reviewpulse {

std::vector<double> average_ranks(std::span<const double> values)
{
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
        [&](std::size_t i, std::size_t j) { return values[i] < values[j]; });
    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]])
            ++j;
        const double mid = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k)
            ranks[order[k]] = mid;
        i = j + 1;
    }
    return ranks;
}

CorrelationResult spearman(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size())
        throw Error("spearman: length mismatch");
    if (x.size() < 2)
        throw Error("spearman: need at least two observations");
    const std::vector<double> rx = average_ranks(x);
    const std::vector<double> ry = average_ranks(y);
    return pearson(rx, ry);
}

AutoSpearmanResult autospearman(const std::vector<std::vector<double>>& columns,
    const std::vector<std::string>& names,
    double threshold)
{
    if (columns.size() != names.size())
        throw Error("autospearman: names and columns differ in count");
    if (columns.size() < 2)
        throw Error("autospearman: need at least two columns");

    const std::size_t n_features = columns.size();
    std::vector<bool> alive(n_features, true);

    // pairwise |rho| computed once; removal only shrinks the active set
    std::vector<std::vector<double>> rho(n_features, std::vector<double>(n_features, 0.0));
    for (std::size_t i = 0; i < n_features; ++i)
        for (std::size_t j = i + 1; j < n_features; ++j) {
            const double r = std::abs(spearman(columns[i], columns[j]).value);
            rho[i][j] = r;
            rho[j][i] = r;
        }

    AutoSpearmanResult result;
    while (true) {
        double best = threshold;
        std::size_t bi = n_features, bj = n_features;
        for (std::size_t i = 0; i < n_features; ++i) {
            if (!alive[i])
                continue;
            for (std::size_t j = i + 1; j < n_features; ++j) {
                if (!alive[j])
                    continue;
                if (rho[i][j] > best) {
                    best = rho[i][j];
                    bi = i;
                    bj = j;
                }
            }
        }
        if (bi == n_features)
            break;

        auto mean_rho = [&](std::size_t f) {
            double sum = 0.0;
            std::size_t count = 0;
            for (std::size_t k = 0; k < n_features; ++k) {
                if (k == f || !alive[k])
                    continue;
                sum += rho[f][k];
                ++count;
            }
            return count ? sum / static_cast<double>(count) : 0.0;
        };
        // drop the member more correlated with everything else; ties drop the
        // later column so earlier features win
        const std::size_t victim = mean_rho(bi) > mean_rho(bj) ? bi : bj;
        alive[victim] = false;
        result.removed.push_back({ names[victim], names[victim == bi ? bj : bi], best });
    }

    for (std::size_t i = 0; i < n_features; ++i)
        if (alive[i])
            result.retained.push_back(names[i]);
    return result;
}

} // namespace reviewpulse
