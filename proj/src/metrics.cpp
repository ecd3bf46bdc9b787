#include "reviewpulse/metrics.hpp"

#include "reviewpulse/errors.hpp"

#include <algorithm>
#include <numeric>

namespace reviewpulse {

std::int64_t ConfusionMatrix::total() const
{
    std::int64_t sum = 0;
    for (const auto& row : counts)
        sum = std::accumulate(row.begin(), row.end(), sum);
    return sum;
}

std::int64_t ConfusionMatrix::trace() const
{
    std::int64_t sum = 0;
    for (std::size_t i = 0; i < counts.size(); ++i)
        sum += counts[i][i];
    return sum;
}

std::int64_t ConfusionMatrix::row_total(std::size_t i) const
{
    return std::accumulate(counts[i].begin(), counts[i].end(), std::int64_t { 0 });
}

std::int64_t ConfusionMatrix::col_total(std::size_t j) const
{
    std::int64_t sum = 0;
    for (const auto& row : counts)
        sum += row[j];
    return sum;
}

ConfusionMatrix confusion(const std::vector<std::string>& gold,
    const std::vector<std::string>& pred,
    const std::vector<std::string>& labels)
{
    if (gold.size() != pred.size())
        throw Error("confusion: gold and predicted lengths differ");
    ConfusionMatrix m;
    m.labels = labels;
    m.counts.assign(labels.size(), std::vector<std::int64_t>(labels.size(), 0));
    auto index_of = [&](const std::string& label) {
        const auto it = std::find(labels.begin(), labels.end(), label);
        if (it == labels.end())
            throw Error("confusion: unknown label " + label);
        return static_cast<std::size_t>(it - labels.begin());
    };
    for (std::size_t i = 0; i < gold.size(); ++i)
        ++m.counts[index_of(gold[i])][index_of(pred[i])];
    return m;
}

double overall_accuracy(const ConfusionMatrix& m)
{
    const std::int64_t total = m.total();
    if (total == 0)
        throw Error("overall_accuracy: empty matrix");
    return static_cast<double>(m.trace()) / static_cast<double>(total);
}

double cohen_kappa(const ConfusionMatrix& m)
{
    const std::int64_t total = m.total();
    if (total == 0)
        throw Error("cohen_kappa: empty matrix");
    const double n = static_cast<double>(total);
    const double p_o = static_cast<double>(m.trace()) / n;
    double p_e = 0.0;
    for (std::size_t k = 0; k < m.labels.size(); ++k)
        p_e += static_cast<double>(m.row_total(k)) * static_cast<double>(m.col_total(k)) / (n * n);
    if (p_e >= 1.0)
        return 1.0;
    return (p_o - p_e) / (1.0 - p_e);
}

double macro_f1(const ConfusionMatrix& m)
{
    if (m.total() == 0)
        throw Error("macro_f1: empty matrix");
    double sum = 0.0;
    for (std::size_t k = 0; k < m.labels.size(); ++k) {
        const double tp = static_cast<double>(m.counts[k][k]);
        const double gold_k = static_cast<double>(m.row_total(k));
        const double pred_k = static_cast<double>(m.col_total(k));
        const double denom = gold_k + pred_k;
        sum += denom > 0.0 ? 2.0 * tp / denom : 0.0;
    }
    return sum / static_cast<double>(m.labels.size());
}

std::vector<std::string> collapse_domain(CollapseScheme scheme)
{
    switch (scheme) {
    case CollapseScheme::Full6: {
        std::vector<std::string> names;
        for (const SixClass c : all_six_classes())
            names.emplace_back(to_string(c));
        return names;
    }
    case CollapseScheme::Stage1:
        return { "Not Valid", "Valid" };
    case CollapseScheme::Stage2:
        return { "Not Addressed", "Addressed" };
    }
    return {};
}

std::vector<std::string> collapse(const std::vector<SixClass>& labels, CollapseScheme scheme)
{
    std::vector<std::string> out;
    out.reserve(labels.size());
    for (const SixClass label : labels) {
        switch (scheme) {
        case CollapseScheme::Full6:
            out.emplace_back(to_string(label));
            break;
        case CollapseScheme::Stage1:
            out.emplace_back(is_valid_class(label) ? "Valid" : "Not Valid");
            break;
        case CollapseScheme::Stage2:
            if (!is_valid_class(label))
                throw Error("stage2 collapse requires Valid-* labels");
            out.emplace_back(is_addressed(label) ? "Addressed" : "Not Addressed");
            break;
        }
    }
    return out;
}

} // namespace reviewpulse
