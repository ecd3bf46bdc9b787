#include <doctest.h>

#include "reviewpulse/errors.hpp"
#include "reviewpulse/metrics.hpp"
#include "reviewpulse/rng.hpp"

#include <cmath>
#include <map>

using namespace reviewpulse;

namespace {

ConfusionMatrix matrix2x2(std::int64_t aa, std::int64_t ab, std::int64_t ba, std::int64_t bb)
{
    return ConfusionMatrix { { "A", "B" }, { { aa, ab }, { ba, bb } } };
}

} // namespace

TEST_CASE("confusion counts cells by (gold, predicted)")
{
    const auto m = confusion({ "A", "B" }, { "A", "B" }, { "A", "B" });
    CHECK(m.counts[0][0] == 1);
    CHECK(m.counts[1][1] == 1);
    CHECK(m.counts[0][1] == 0);

    const auto off = confusion({ "A", "A" }, { "B", "B" }, { "A", "B" });
    CHECK(off.counts[0][1] == 2);
    CHECK(off.trace() == 0);
}

TEST_CASE("confusion rejects mismatched input")
{
    CHECK_THROWS_AS(confusion({ "A" }, { "A", "B" }, { "A", "B" }), Error);
    CHECK_THROWS_AS(confusion({ "C" }, { "C" }, { "A", "B" }), Error);
}

TEST_CASE("confusion matches a brute-force tally on shuffled six-label data")
{
    const std::vector<std::string> labels = { "a", "b", "c", "d", "e", "f" };
    Rng rng(7);
    std::vector<std::string> gold, pred;
    for (int i = 0; i < 500; ++i) {
        gold.push_back(labels[rng.below(labels.size())]);
        pred.push_back(labels[rng.below(labels.size())]);
    }
    const auto m = confusion(gold, pred, labels);
    std::map<std::pair<std::string, std::string>, std::int64_t> tally;
    for (std::size_t i = 0; i < gold.size(); ++i)
        ++tally[{ gold[i], pred[i] }];
    for (std::size_t g = 0; g < labels.size(); ++g)
        for (std::size_t p = 0; p < labels.size(); ++p)
            CHECK(m.counts[g][p] == tally[{ labels[g], labels[p] }]);
}

TEST_CASE("overall accuracy is trace over total")
{
    CHECK(overall_accuracy(matrix2x2(10, 0, 0, 10)) == doctest::Approx(1.0));
    CHECK(overall_accuracy(matrix2x2(20, 5, 10, 15)) == doctest::Approx(0.7));
    CHECK(overall_accuracy(matrix2x2(0, 5, 5, 0)) == doctest::Approx(0.0));
}

TEST_CASE("cohen kappa on the worked 2x2 example")
{
    // p_o = 0.7, p_e = (25*30 + 25*20) / 2500 = 0.5 -> kappa = 0.4
    CHECK(cohen_kappa(matrix2x2(20, 5, 10, 15)) == doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("perfect agreement gives kappa 1")
{
    CHECK(cohen_kappa(matrix2x2(12, 0, 0, 8)) == doctest::Approx(1.0));
    // degenerate: all mass on a single agreeing label
    CHECK(cohen_kappa(matrix2x2(20, 0, 0, 0)) == doctest::Approx(1.0));
}

TEST_CASE("chance-level matrix with independent marginals gives kappa 0")
{
    // counts[g][p] = row_g * col_p makes p_o equal p_e
    const std::vector<std::int64_t> rows = { 2, 3, 5 };
    const std::vector<std::int64_t> cols = { 4, 1, 5 };
    ConfusionMatrix m;
    m.labels = { "x", "y", "z" };
    m.counts.assign(3, std::vector<std::int64_t>(3, 0));
    for (std::size_t g = 0; g < 3; ++g)
        for (std::size_t p = 0; p < 3; ++p)
            m.counts[g][p] = rows[g] * cols[p];
    CHECK(std::abs(cohen_kappa(m)) < 1e-9);
}

TEST_CASE("macro f1 matches the per-class formula oracle")
{
    const auto m = matrix2x2(20, 5, 10, 15);
    // per-class F1 via precision/recall
    const double p_a = 20.0 / 30.0, r_a = 20.0 / 25.0;
    const double p_b = 15.0 / 20.0, r_b = 15.0 / 25.0;
    const double f_a = 2 * p_a * r_a / (p_a + r_a);
    const double f_b = 2 * p_b * r_b / (p_b + r_b);
    CHECK(macro_f1(m) == doctest::Approx((f_a + f_b) / 2).epsilon(1e-12));
    CHECK(macro_f1(matrix2x2(10, 0, 0, 10)) == doctest::Approx(1.0));
}

TEST_CASE("a class never predicted contributes zero F1")
{
    // gold has A and B; predictions never say B
    const auto m = matrix2x2(10, 0, 5, 0);
    const double f_a = 2.0 * 10 / (10 + 15);
    CHECK(macro_f1(m) == doctest::Approx((f_a + 0.0) / 2).epsilon(1e-12));
}

TEST_CASE("metrics are invariant under simultaneous relabeling")
{
    Rng rng(11);
    std::vector<std::string> gold, pred;
    const std::vector<std::string> labels = { "A", "B", "C" };
    for (int i = 0; i < 200; ++i) {
        gold.push_back(labels[rng.below(3)]);
        pred.push_back(labels[rng.below(3)]);
    }
    const auto m = confusion(gold, pred, labels);
    // swap A <-> C in both gold and predictions
    auto swap_label = [](std::string s) {
        if (s == "A")
            return std::string("C");
        if (s == "C")
            return std::string("A");
        return s;
    };
    std::vector<std::string> gold2, pred2;
    for (std::size_t i = 0; i < gold.size(); ++i) {
        gold2.push_back(swap_label(gold[i]));
        pred2.push_back(swap_label(pred[i]));
    }
    const auto m2 = confusion(gold2, pred2, labels);
    CHECK(overall_accuracy(m) == doctest::Approx(overall_accuracy(m2)).epsilon(1e-12));
    CHECK(cohen_kappa(m) == doctest::Approx(cohen_kappa(m2)).epsilon(1e-12));
    CHECK(macro_f1(m) == doctest::Approx(macro_f1(m2)).epsilon(1e-12));
}

TEST_CASE("collapse schemes")
{
    using enum SixClass;
    CHECK(collapse({ None, General }, CollapseScheme::Stage1)
        == std::vector<std::string> { "Not Valid", "Not Valid" });
    CHECK(collapse({ ValidPartially }, CollapseScheme::Stage2)
        == std::vector<std::string> { "Addressed" });
    CHECK(collapse({ ValidUncertain, ValidUnaddressed }, CollapseScheme::Stage2)
        == std::vector<std::string> { "Not Addressed", "Not Addressed" });
    CHECK(collapse({ ValidFully, None }, CollapseScheme::Full6)
        == std::vector<std::string> { "Valid-Fully", "None" });
    CHECK_THROWS_AS(collapse({ None }, CollapseScheme::Stage2), Error);
}

TEST_CASE("stage1 collapse accuracy dominates full6 accuracy")
{
    Rng rng(13);
    const auto& domain = all_six_classes();
    std::vector<SixClass> gold, pred;
    for (int i = 0; i < 300; ++i) {
        gold.push_back(domain[rng.below(domain.size())]);
        pred.push_back(domain[rng.below(domain.size())]);
    }
    std::vector<std::string> gold6, pred6;
    for (std::size_t i = 0; i < gold.size(); ++i) {
        gold6.emplace_back(to_string(gold[i]));
        pred6.emplace_back(to_string(pred[i]));
    }
    const double full = overall_accuracy(confusion(gold6, pred6, collapse_domain(CollapseScheme::Full6)));
    const double stage1 = overall_accuracy(confusion(collapse(gold, CollapseScheme::Stage1),
        collapse(pred, CollapseScheme::Stage1), collapse_domain(CollapseScheme::Stage1)));
    CHECK(stage1 >= full);
}
