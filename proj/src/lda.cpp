#include "reviewpulse/lda.hpp"

#include "reviewpulse/errors.hpp"
#include "reviewpulse/rng.hpp"
#include "reviewpulse/text_util.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace reviewpulse {

std::vector<std::string> TopicModel::top_tokens(int topic, std::size_t n) const
{
    const std::vector<double>& row = topic_word.at(static_cast<std::size_t>(topic));
    std::vector<std::size_t> order(row.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = i;
    std::stable_sort(order.begin(), order.end(),
        [&](std::size_t a, std::size_t b) { return row[a] > row[b]; });
    std::vector<std::string> tokens;
    for (std::size_t i = 0; i < std::min(n, order.size()); ++i)
        tokens.push_back(vocabulary[order[i]]);
    return tokens;
}

void TopicModel::save(std::ostream& out) const
{
    out << "reviewpulse-topic-model v1\n";
    out << "topics " << num_topics << "\n";
    out << "alpha " << alpha << "\n";
    out << "beta " << beta << "\n";
    out << "seed " << seed << "\n";
    out << "vocabulary " << vocabulary.size() << "\n";
    for (const std::string& word : vocabulary)
        out << word << "\n";
    char buf[32];
    for (const auto& row : topic_word) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            std::snprintf(buf, sizeof(buf), "%.17g", row[i]);
            out << (i ? " " : "") << buf;
        }
        out << "\n";
    }
}

TopicModel TopicModel::load(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line) || line != "reviewpulse-topic-model v1")
        throw Error("topic model: unknown format header");
    TopicModel model;
    std::size_t vocab_size = 0;
    for (int i = 0; i < 5; ++i) {
        if (!std::getline(in, line))
            throw Error("topic model: truncated header");
        std::istringstream fields(line);
        std::string key;
        fields >> key;
        if (key == "topics")
            fields >> model.num_topics;
        else if (key == "alpha")
            fields >> model.alpha;
        else if (key == "beta")
            fields >> model.beta;
        else if (key == "seed")
            fields >> model.seed;
        else if (key == "vocabulary")
            fields >> vocab_size;
        else
            throw Error("topic model: unexpected header key " + key);
    }
    model.vocabulary.reserve(vocab_size);
    for (std::size_t i = 0; i < vocab_size; ++i) {
        if (!std::getline(in, line))
            throw Error("topic model: truncated vocabulary");
        model.vocabulary.push_back(line);
    }
    model.topic_word.assign(static_cast<std::size_t>(model.num_topics),
        std::vector<double>(vocab_size, 0.0));
    for (auto& row : model.topic_word) {
        if (!std::getline(in, line))
            throw Error("topic model: truncated rows");
        std::istringstream fields(line);
        for (double& cell : row)
            fields >> cell;
    }
    return model;
}

namespace {

    // weighted draw by linear CDF scan; weights need not be normalized
    int draw(Rng& rng, const std::vector<double>& weights, double total)
    {
        const double u = rng.next_double() * total;
        double acc = 0.0;
        for (std::size_t k = 0; k < weights.size(); ++k) {
            acc += weights[k];
            if (u < acc)
                return static_cast<int>(k);
        }
        return static_cast<int>(weights.size()) - 1;
    }

} // namespace

TopicModel train_lda(const std::vector<std::vector<std::string>>& corpus,
    int num_topics, double alpha, double beta, int iterations, std::uint64_t seed)
{
    if (num_topics < 2)
        throw Error("train_lda: need at least two topics");
    if (corpus.empty())
        throw Error("train_lda: empty corpus");
    if (alpha <= 0.0)
        alpha = 50.0 / num_topics;
    if (beta <= 0.0)
        beta = 0.01;

    std::set<std::string> vocab_set;
    for (const auto& doc : corpus)
        vocab_set.insert(doc.begin(), doc.end());
    if (vocab_set.empty())
        throw Error("train_lda: empty vocabulary");

    TopicModel model;
    model.num_topics = num_topics;
    model.vocabulary.assign(vocab_set.begin(), vocab_set.end());
    model.alpha = alpha;
    model.beta = beta;
    model.seed = seed;

    std::map<std::string, int> word_id;
    for (std::size_t i = 0; i < model.vocabulary.size(); ++i)
        word_id[model.vocabulary[i]] = static_cast<int>(i);
    const int vocab_size = static_cast<int>(model.vocabulary.size());

    std::vector<std::vector<int>> docs(corpus.size());
    for (std::size_t d = 0; d < corpus.size(); ++d) {
        docs[d].reserve(corpus[d].size());
        for (const std::string& token : corpus[d])
            docs[d].push_back(word_id.at(token));
    }

    const std::size_t K = static_cast<std::size_t>(num_topics);
    std::vector<std::vector<int>> doc_topic(docs.size(), std::vector<int>(K, 0));
    std::vector<std::vector<int>> topic_word_count(K, std::vector<int>(vocab_size, 0));
    std::vector<int> topic_total(K, 0);
    std::vector<std::vector<int>> assignment(docs.size());

    Rng rng(seed);
    for (std::size_t d = 0; d < docs.size(); ++d) {
        assignment[d].resize(docs[d].size());
        for (std::size_t i = 0; i < docs[d].size(); ++i) {
            const int z = static_cast<int>(rng.below(K));
            assignment[d][i] = z;
            ++doc_topic[d][z];
            ++topic_word_count[z][docs[d][i]];
            ++topic_total[z];
        }
    }

    const double v_beta = vocab_size * beta;
    std::vector<double> weights(K, 0.0);
    for (int sweep = 0; sweep < iterations; ++sweep) {
        for (std::size_t d = 0; d < docs.size(); ++d) {
            for (std::size_t i = 0; i < docs[d].size(); ++i) {
                const int w = docs[d][i];
                const int old_z = assignment[d][i];
                --doc_topic[d][old_z];
                --topic_word_count[old_z][w];
                --topic_total[old_z];
                double total = 0.0;
                for (std::size_t k = 0; k < K; ++k) {
                    weights[k] = (doc_topic[d][k] + alpha)
                        * (topic_word_count[k][w] + beta)
                        / (topic_total[k] + v_beta);
                    total += weights[k];
                }
                const int z = draw(rng, weights, total);
                assignment[d][i] = z;
                ++doc_topic[d][z];
                ++topic_word_count[z][w];
                ++topic_total[z];
            }
        }
    }

    model.topic_word.assign(K, std::vector<double>(vocab_size, 0.0));
    for (std::size_t k = 0; k < K; ++k) {
        const double denom = topic_total[k] + v_beta;
        for (int w = 0; w < vocab_size; ++w)
            model.topic_word[k][w] = (topic_word_count[k][w] + beta) / denom;
    }
    return model;
}

std::vector<double> infer_topics(const TopicModel& model,
    const std::vector<std::string>& doc, int iterations, std::uint64_t seed)
{
    const std::size_t K = static_cast<std::size_t>(model.num_topics);
    std::map<std::string, int> word_id;
    for (std::size_t i = 0; i < model.vocabulary.size(); ++i)
        word_id[model.vocabulary[i]] = static_cast<int>(i);

    std::vector<int> words;
    for (const std::string& token : doc) {
        const auto it = word_id.find(token);
        if (it != word_id.end())
            words.push_back(it->second);
    }
    if (words.empty())
        return std::vector<double>(K, 1.0 / static_cast<double>(K));

    Rng rng(seed);
    std::vector<int> doc_topic(K, 0);
    std::vector<int> assignment(words.size());
    for (std::size_t i = 0; i < words.size(); ++i) {
        const int z = static_cast<int>(rng.below(K));
        assignment[i] = z;
        ++doc_topic[z];
    }

    std::vector<double> weights(K, 0.0);
    for (int sweep = 0; sweep < iterations; ++sweep) {
        for (std::size_t i = 0; i < words.size(); ++i) {
            const int w = words[i];
            --doc_topic[assignment[i]];
            double total = 0.0;
            for (std::size_t k = 0; k < K; ++k) {
                weights[k] = (doc_topic[k] + model.alpha) * model.topic_word[k][w];
                total += weights[k];
            }
            const int z = draw(rng, weights, total);
            assignment[i] = z;
            ++doc_topic[z];
        }
    }

    std::vector<double> theta(K, 0.0);
    const double denom = static_cast<double>(words.size()) + K * model.alpha;
    for (std::size_t k = 0; k < K; ++k)
        theta[k] = (doc_topic[k] + model.alpha) / denom;
    return theta;
}

std::vector<std::string> tokenize_comment(std::string_view body)
{
    const std::string text = to_lower_ascii(strip_fenced_blocks(body));
    std::vector<std::string> tokens;
    std::string current;
    auto flush = [&]() {
        if (current.size() >= 3) {
            const auto& stop = english_stopwords();
            if (!std::binary_search(stop.begin(), stop.end(), current))
                tokens.push_back(current);
        }
        current.clear();
    };
    for (const char c : text) {
        if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9'))
            current.push_back(c);
        else
            flush();
    }
    flush();
    return tokens;
}

} // namespace reviewpulse
