#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "topiccf/ingest.hpp"

namespace topiccf {

using StopwordSet = std::unordered_set<std::string>;
using WordId = std::uint32_t;

/// Lowercases ASCII, splits on runs of characters that are neither ASCII
/// alphanumerics nor part of a multi-byte UTF-8 sequence, then drops tokens
/// shorter than three characters, pure numbers and stopwords.
std::vector<std::string> tokenize(std::string_view text, const StopwordSet& stopwords);

/// One token per line; blank lines and lines starting with '#' are ignored.
StopwordSet parse_stopwords(std::istream& in);
StopwordSet load_stopwords(const std::filesystem::path& path);
/// The English list shipped in data/stopwords_en.txt.
const StopwordSet& default_stopwords();

class Vocabulary {
public:
    Vocabulary() = default;
    /// `tokens` must be distinct; index order follows the argument.
    Vocabulary(std::vector<std::string> tokens, std::vector<std::size_t> doc_freq);

    std::size_t size() const { return tokens_.size(); }
    bool empty() const { return tokens_.empty(); }
    const std::string& token(WordId id) const { return tokens_[id]; }
    std::span<const std::string> tokens() const { return tokens_; }
    std::size_t doc_freq(WordId id) const { return doc_freq_[id]; }
    /// -1 when absent.
    std::int64_t find(std::string_view token) const;

private:
    std::vector<std::string> tokens_;
    std::vector<std::size_t> doc_freq_;
    std::unordered_map<std::string, WordId> index_;
};

struct EncodedCorpus {
    std::vector<std::vector<WordId>> docs;
    std::vector<ItemId> item_ids;  // parallel to docs
    std::size_t vocab_size = 0;

    std::size_t num_docs() const { return docs.size(); }
    std::size_t num_tokens() const;
};

struct EncodedVocabulary {
    Vocabulary vocabulary;
    EncodedCorpus corpus;
};

/// Tokens are indexed in lexicographic order. Tokens with document frequency
/// below `min_df` are dropped. Documents left empty are kept (they get a
/// uniform topic distribution). Throws ConfigError if the corpus is empty or
/// every document is empty after filtering.
EncodedVocabulary build_vocabulary(const DocumentCorpus& corpus, const StopwordSet& stopwords,
                                   std::size_t min_df = 1);

struct LdaOptions {
    std::size_t num_topics = 50;
    double alpha_sum = 50.0;  // per-topic alpha is alpha_sum / num_topics
    double beta = 0.01;
    std::size_t iterations = 1000;
    std::uint64_t seed = 1;
    /// Called with (sweep number, corpus log-likelihood) every `log_every`
    /// sweeps and after the last one. 0 disables.
    std::size_t log_every = 0;
    std::function<void(std::size_t, double)> on_progress;
};

/// Point estimate from the final Gibbs state.
class TopicModel {
public:
    TopicModel() = default;
    TopicModel(std::size_t num_topics, double alpha_sum, double beta, std::uint64_t seed,
               std::vector<std::vector<std::uint32_t>> assignments, const EncodedCorpus& corpus);

    std::size_t num_topics() const { return num_topics_; }
    std::size_t num_docs() const { return num_docs_; }
    std::size_t vocab_size() const { return vocab_size_; }
    double alpha_sum() const { return alpha_sum_; }
    double beta() const { return beta_; }
    std::uint64_t seed() const { return seed_; }

    std::span<const double> theta(std::size_t doc) const {
        return std::span<const double>(theta_).subspan(doc * num_topics_, num_topics_);
    }
    std::span<const double> phi(std::size_t topic) const {
        return std::span<const double>(phi_).subspan(topic * vocab_size_, vocab_size_);
    }
    const std::vector<std::vector<std::uint32_t>>& assignments() const { return assignments_; }

    /// n_{d,t} and n_{t,w} recounted from the assignments.
    std::vector<std::size_t> doc_topic_counts() const;   // D x T
    std::vector<std::size_t> topic_word_counts() const;  // T x V

    friend bool operator==(const TopicModel&, const TopicModel&) = default;

private:
    std::size_t num_topics_ = 0;
    std::size_t num_docs_ = 0;
    std::size_t vocab_size_ = 0;
    double alpha_sum_ = 0.0;
    double beta_ = 0.0;
    std::uint64_t seed_ = 0;
    std::vector<double> theta_;  // D x T, row-major
    std::vector<double> phi_;    // T x V, row-major
    std::vector<std::vector<std::uint32_t>> assignments_;
    std::vector<std::vector<WordId>> words_;
};

/// Exact sequential collapsed Gibbs sampling.
TopicModel train_lda(const EncodedCorpus& corpus, const LdaOptions& options);

/// `n` word ids with the highest phi in `topic`, ties by ascending id.
std::vector<WordId> topic_top_word_ids(const TopicModel& model, std::size_t topic, std::size_t n);
std::vector<std::string> topic_top_words(const TopicModel& model, const Vocabulary& vocab, std::size_t topic,
                                         std::size_t n);

/// Sum over all tokens of log sum_t theta[d][t] * phi[t][w].
double corpus_log_likelihood(const TopicModel& model, const EncodedCorpus& corpus);

/// Item id -> topic distribution (a theta row).
using TopicProfiles = std::map<ItemId, std::vector<double>>;

TopicProfiles item_profiles(const TopicModel& model, const EncodedCorpus& corpus);

/// `item_id,p_0,...,p_{T-1}` per document.
void write_theta_csv(std::ostream& out, const TopicModel& model, const EncodedCorpus& corpus);
TopicProfiles parse_theta_csv(std::istream& in);
TopicProfiles load_theta_csv(const std::filesystem::path& path);

/// `topic,token,probability` for entries above `threshold`, preceded by a
/// `#` header carrying the smoothing parameters.
void write_phi_csv(std::ostream& out, const TopicModel& model, const Vocabulary& vocab, double threshold = 1e-6);

/// `T<k>\t<word> <word> ...` per topic.
void write_topics_txt(std::ostream& out, const TopicModel& model, const Vocabulary& vocab, std::size_t n = 20);

}  // namespace topiccf
