#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace reviewpulse {

struct TopicModel {
    int num_topics = 0;
    std::vector<std::string> vocabulary;          // sorted, unique
    std::vector<std::vector<double>> topic_word;  // [topic][word], rows sum to 1
    double alpha = 0.0;
    double beta = 0.0;
    std::uint64_t seed = 0;

    // top-n highest-probability tokens for a topic
    std::vector<std::string> top_tokens(int topic, std::size_t n) const;

    void save(std::ostream& out) const;
    static TopicModel load(std::istream& in);
};

// Collapsed Gibbs sampling for `iterations` full sweeps from a seeded
// initialization. Deterministic for a fixed seed. alpha <= 0 selects the
// 50/K default, beta <= 0 selects 0.01.
TopicModel train_lda(const std::vector<std::vector<std::string>>& corpus,
    int num_topics,
    double alpha = 0.0,
    double beta = 0.0,
    int iterations = 1000,
    std::uint64_t seed = 42);

// Topic distribution of one document with topic_word held fixed. Empty
// documents (or ones with no in-vocabulary tokens) yield the uniform vector.
std::vector<double> infer_topics(const TopicModel& model,
    const std::vector<std::string>& doc,
    int iterations = 200,
    std::uint64_t seed = 42);

// Lowercases, splits on non-alphanumerics, strips fenced code blocks first,
// drops tokens shorter than 3 characters and English stopwords.
std::vector<std::string> tokenize_comment(std::string_view body);

} // namespace reviewpulse
