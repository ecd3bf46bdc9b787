#include <doctest.h>

#include "reviewpulse/errors.hpp"
#include "reviewpulse/lda.hpp"
#include "reviewpulse/rng.hpp"

#include <algorithm>
#include <set>
#include <sstream>

using namespace reviewpulse;

namespace {

// 200 documents drawn from two disjoint 15-token vocabularies
std::vector<std::vector<std::string>> planted_corpus(std::vector<std::string>& vocab_a,
    std::vector<std::string>& vocab_b)
{
    for (int i = 0; i < 15; ++i) {
        vocab_a.push_back("alpha" + std::to_string(i));
        vocab_b.push_back("beta" + std::to_string(i));
    }
    Rng rng(2024);
    std::vector<std::vector<std::string>> corpus;
    for (int d = 0; d < 200; ++d) {
        const auto& vocab = d % 2 ? vocab_b : vocab_a;
        std::vector<std::string> doc;
        const std::size_t len = 15 + rng.below(10);
        for (std::size_t i = 0; i < len; ++i)
            doc.push_back(vocab[rng.below(vocab.size())]);
        corpus.push_back(std::move(doc));
    }
    return corpus;
}

std::size_t overlap(const std::vector<std::string>& tokens, const std::vector<std::string>& vocab)
{
    const std::set<std::string> vocab_set(vocab.begin(), vocab.end());
    std::size_t hits = 0;
    for (const std::string& t : tokens)
        hits += vocab_set.count(t);
    return hits;
}

} // namespace

TEST_CASE("degenerate corpus concentrates every topic on the sole token")
{
    const std::vector<std::vector<std::string>> corpus(20, { "solo" });
    const TopicModel model = train_lda(corpus, 2, 0.0, 0.0, 50, 1);
    for (const auto& row : model.topic_word) {
        REQUIRE(row.size() == 1);
        CHECK(row[0] == doctest::Approx(1.0));
    }
}

TEST_CASE("planted two-topic corpus is recovered")
{
    std::vector<std::string> vocab_a, vocab_b;
    const auto corpus = planted_corpus(vocab_a, vocab_b);
    const TopicModel model = train_lda(corpus, 2, 0.1, 0.01, 300, 42);

    const auto top0 = model.top_tokens(0, 10);
    const auto top1 = model.top_tokens(1, 10);
    // each learned topic matches one planted vocabulary with >= 9/10 overlap
    const std::size_t o0a = overlap(top0, vocab_a), o0b = overlap(top0, vocab_b);
    const std::size_t best0 = std::max(o0a, o0b);
    const bool zero_is_a = o0a >= o0b;
    const std::size_t best1 = overlap(top1, zero_is_a ? vocab_b : vocab_a);
    CHECK(best0 >= 9);
    CHECK(best1 >= 9);
}

TEST_CASE("topic rows are probability simplices")
{
    std::vector<std::string> vocab_a, vocab_b;
    const auto corpus = planted_corpus(vocab_a, vocab_b);
    const TopicModel model = train_lda(corpus, 3, 0.0, 0.0, 50, 7);
    for (const auto& row : model.topic_word) {
        double sum = 0.0;
        for (const double p : row)
            sum += p;
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("training is deterministic for a fixed seed")
{
    std::vector<std::string> vocab_a, vocab_b;
    const auto corpus = planted_corpus(vocab_a, vocab_b);
    const TopicModel m1 = train_lda(corpus, 2, 0.1, 0.01, 60, 42);
    const TopicModel m2 = train_lda(corpus, 2, 0.1, 0.01, 60, 42);
    CHECK(m1.topic_word == m2.topic_word);
}

TEST_CASE("empty document infers the uniform distribution")
{
    const std::vector<std::vector<std::string>> corpus(10, { "aa", "bb" });
    const TopicModel model = train_lda(corpus, 4, 0.0, 0.0, 20, 3);
    const auto theta = infer_topics(model, {});
    REQUIRE(theta.size() == 4);
    for (const double p : theta)
        CHECK(p == doctest::Approx(0.25));
}

TEST_CASE("documents of planted tokens infer their topic")
{
    std::vector<std::string> vocab_a, vocab_b;
    const auto corpus = planted_corpus(vocab_a, vocab_b);
    const TopicModel model = train_lda(corpus, 2, 0.1, 0.01, 300, 42);
    // identify which learned topic is the alpha topic
    const std::size_t alpha_topic = overlap(model.top_tokens(0, 10), vocab_a) >= 5 ? 0 : 1;
    std::vector<std::string> doc;
    for (int i = 0; i < 12; ++i)
        doc.push_back(vocab_a[static_cast<std::size_t>(i) % vocab_a.size()]);
    const auto theta = infer_topics(model, doc);
    CHECK(theta[alpha_topic] >= 0.8);
    double sum = 0.0;
    for (const double p : theta)
        sum += p;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("inference is deterministic for a fixed seed")
{
    std::vector<std::string> vocab_a, vocab_b;
    const auto corpus = planted_corpus(vocab_a, vocab_b);
    const TopicModel model = train_lda(corpus, 2, 0.1, 0.01, 50, 42);
    std::vector<std::string> doc = { "alpha1", "beta2", "alpha3" };
    CHECK(infer_topics(model, doc) == infer_topics(model, doc));
}

TEST_CASE("save and load round-trip the model")
{
    const std::vector<std::vector<std::string>> corpus = { { "aa", "bb" }, { "bb", "cc" } };
    const TopicModel model = train_lda(corpus, 2, 0.0, 0.0, 30, 5);
    std::stringstream buffer;
    model.save(buffer);
    const TopicModel loaded = TopicModel::load(buffer);
    CHECK(loaded.vocabulary == model.vocabulary);
    CHECK(loaded.topic_word == model.topic_word);
    CHECK(loaded.alpha == model.alpha);
}

TEST_CASE("train_lda rejects bad input")
{
    CHECK_THROWS_AS(train_lda({}, 2), Error);
    CHECK_THROWS_AS(train_lda({ { "a" } }, 1), Error);
}

TEST_CASE("tokenizer lowercases, strips fences and stopwords, drops short tokens")
{
    const auto tokens = tokenize_comment(
        "Consider the null Check\n```\ncode here ignored\n```\nuse ptr2 of x");
    CHECK(std::find(tokens.begin(), tokens.end(), "consider") != tokens.end());
    CHECK(std::find(tokens.begin(), tokens.end(), "null") != tokens.end());
    CHECK(std::find(tokens.begin(), tokens.end(), "check") != tokens.end());
    CHECK(std::find(tokens.begin(), tokens.end(), "ptr2") != tokens.end());
    // stopword, fenced content, and short tokens are gone
    CHECK(std::find(tokens.begin(), tokens.end(), "the") == tokens.end());
    CHECK(std::find(tokens.begin(), tokens.end(), "code") == tokens.end());
    CHECK(std::find(tokens.begin(), tokens.end(), "use") != tokens.end());
    CHECK(std::find(tokens.begin(), tokens.end(), "x") == tokens.end());
}
