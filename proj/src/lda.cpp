#include "topiccf/lda.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "topiccf/error.hpp"
#include "topiccf/rng.hpp"
#include "stopwords_en.inc"

namespace topiccf {

namespace {

bool is_word_byte(unsigned char c) { return std::isalnum(c) || c >= 0x80; }

std::size_t utf8_length(std::string_view s) {
    return static_cast<std::size_t>(
        std::count_if(s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

bool all_digits(std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

struct Estimates {
    std::vector<double> theta;
    std::vector<double> phi;
};

Estimates estimate(std::size_t T, std::size_t V, double alpha_sum, double beta,
                   const std::vector<std::vector<WordId>>& docs, std::span<const std::uint32_t> n_dt,
                   std::span<const std::uint32_t> n_wt, std::span<const std::uint32_t> n_t) {
    const double alpha = alpha_sum / static_cast<double>(T);
    const double vbeta = static_cast<double>(V) * beta;
    Estimates e;
    e.theta.resize(docs.size() * T);
    e.phi.resize(T * V);
    for (std::size_t d = 0; d < docs.size(); ++d) {
        const double denom = static_cast<double>(docs[d].size()) + alpha_sum;
        for (std::size_t t = 0; t < T; ++t) e.theta[d * T + t] = (n_dt[d * T + t] + alpha) / denom;
    }
    for (std::size_t t = 0; t < T; ++t) {
        const double denom = static_cast<double>(n_t[t]) + vbeta;
        for (std::size_t w = 0; w < V; ++w) e.phi[t * V + w] = (n_wt[w * T + t] + beta) / denom;
    }
    return e;
}

double log_likelihood(std::size_t T, std::size_t V, const std::vector<std::vector<WordId>>& docs,
                      std::span<const double> theta, std::span<const double> phi) {
    double total = 0.0;
    for (std::size_t d = 0; d < docs.size(); ++d) {
        for (const WordId w : docs[d]) {
            double p = 0.0;
            for (std::size_t t = 0; t < T; ++t) p += theta[d * T + t] * phi[t * V + w];
            total += std::log(p);
        }
    }
    return total;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text, const StopwordSet& stopwords) {
    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && !is_word_byte(static_cast<unsigned char>(text[i]))) ++i;
        const std::size_t start = i;
        while (i < text.size() && is_word_byte(static_cast<unsigned char>(text[i]))) ++i;
        if (start == i) continue;
        std::string token(text.substr(start, i - start));
        for (auto& c : token) {
            if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
        }
        if (utf8_length(token) < 3 || all_digits(token) || stopwords.contains(token)) continue;
        tokens.push_back(std::move(token));
    }
    return tokens;
}

StopwordSet parse_stopwords(std::istream& in) {
    StopwordSet words;
    std::string line;
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto last = line.find_last_not_of(" \t\r");
        std::string word = line.substr(first, last - first + 1);
        for (auto& c : word) {
            if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
        }
        words.insert(std::move(word));
    }
    return words;
}

StopwordSet load_stopwords(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open stopword list " + path.string());
    return parse_stopwords(in);
}

const StopwordSet& default_stopwords() {
    static const StopwordSet words = [] {
        std::istringstream in{std::string(kDefaultStopwords)};
        return parse_stopwords(in);
    }();
    return words;
}

Vocabulary::Vocabulary(std::vector<std::string> tokens, std::vector<std::size_t> doc_freq)
    : tokens_(std::move(tokens)), doc_freq_(std::move(doc_freq)) {
    if (doc_freq_.size() != tokens_.size()) throw ConfigError("vocabulary token and frequency counts differ");
    index_.reserve(tokens_.size());
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
        if (!index_.emplace(tokens_[i], static_cast<WordId>(i)).second) {
            throw ConfigError("duplicate vocabulary token '" + tokens_[i] + "'");
        }
    }
}

std::int64_t Vocabulary::find(std::string_view token) const {
    const auto it = index_.find(std::string(token));
    return it == index_.end() ? -1 : static_cast<std::int64_t>(it->second);
}

std::size_t EncodedCorpus::num_tokens() const {
    std::size_t n = 0;
    for (const auto& d : docs) n += d.size();
    return n;
}

EncodedVocabulary build_vocabulary(const DocumentCorpus& corpus, const StopwordSet& stopwords, std::size_t min_df) {
    if (corpus.empty()) throw ConfigError("document corpus is empty");

    // DocumentCorpus is ordered by item id, which fixes the document order
    std::vector<std::vector<std::string>> tokenized;
    tokenized.reserve(corpus.size());
    std::map<std::string, std::size_t> df;
    for (const auto& [item, text] : corpus.docs) {
        tokenized.push_back(tokenize(text, stopwords));
        auto distinct = tokenized.back();
        std::sort(distinct.begin(), distinct.end());
        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
        for (auto& tok : distinct) ++df[tok];
    }

    std::vector<std::string> tokens;
    std::vector<std::size_t> freqs;
    for (const auto& [tok, n] : df) {
        if (n >= min_df) {
            tokens.push_back(tok);
            freqs.push_back(n);
        }
    }

    EncodedVocabulary out{Vocabulary(std::move(tokens), std::move(freqs)), {}};
    out.corpus.vocab_size = out.vocabulary.size();
    bool any_tokens = false;
    std::size_t d = 0;
    for (const auto& [item, text] : corpus.docs) {
        std::vector<WordId> encoded;
        for (const auto& tok : tokenized[d]) {
            const auto id = out.vocabulary.find(tok);
            if (id >= 0) encoded.push_back(static_cast<WordId>(id));
        }
        any_tokens = any_tokens || !encoded.empty();
        out.corpus.docs.push_back(std::move(encoded));
        out.corpus.item_ids.push_back(item);
        ++d;
    }
    if (!any_tokens) throw ConfigError("every document is empty after tokenization and filtering");
    return out;
}

TopicModel::TopicModel(std::size_t num_topics, double alpha_sum, double beta, std::uint64_t seed,
                       std::vector<std::vector<std::uint32_t>> assignments, const EncodedCorpus& corpus)
    : num_topics_(num_topics),
      num_docs_(corpus.num_docs()),
      vocab_size_(corpus.vocab_size),
      alpha_sum_(alpha_sum),
      beta_(beta),
      seed_(seed),
      assignments_(std::move(assignments)),
      words_(corpus.docs) {
    if (assignments_.size() != num_docs_) throw ConfigError("assignment and document counts differ");
    const std::size_t T = num_topics_;
    std::vector<std::uint32_t> n_dt(num_docs_ * T, 0);
    std::vector<std::uint32_t> n_wt(vocab_size_ * T, 0);
    std::vector<std::uint32_t> n_t(T, 0);
    for (std::size_t d = 0; d < num_docs_; ++d) {
        if (assignments_[d].size() != words_[d].size()) throw ConfigError("assignment and token counts differ");
        for (std::size_t i = 0; i < words_[d].size(); ++i) {
            const auto t = assignments_[d][i];
            if (t >= T) throw ConfigError("topic assignment out of range");
            ++n_dt[d * T + t];
            ++n_wt[words_[d][i] * T + t];
            ++n_t[t];
        }
    }
    auto e = estimate(T, vocab_size_, alpha_sum_, beta_, words_, n_dt, n_wt, n_t);
    theta_ = std::move(e.theta);
    phi_ = std::move(e.phi);
}

std::vector<std::size_t> TopicModel::doc_topic_counts() const {
    std::vector<std::size_t> counts(num_docs_ * num_topics_, 0);
    for (std::size_t d = 0; d < num_docs_; ++d) {
        for (const auto t : assignments_[d]) ++counts[d * num_topics_ + t];
    }
    return counts;
}

std::vector<std::size_t> TopicModel::topic_word_counts() const {
    std::vector<std::size_t> counts(num_topics_ * vocab_size_, 0);
    for (std::size_t d = 0; d < num_docs_; ++d) {
        for (std::size_t i = 0; i < words_[d].size(); ++i) {
            ++counts[assignments_[d][i] * vocab_size_ + words_[d][i]];
        }
    }
    return counts;
}

TopicModel train_lda(const EncodedCorpus& corpus, const LdaOptions& options) {
    const std::size_t T = options.num_topics;
    const std::size_t V = corpus.vocab_size;
    if (T < 1) throw ConfigError("number of topics must be at least 1");
    if (options.iterations < 1) throw ConfigError("iterations must be at least 1");
    if (!(options.alpha_sum > 0.0) || !(options.beta > 0.0)) throw ConfigError("alpha_sum and beta must be positive");
    if (V == 0) throw ConfigError("vocabulary is empty");
    if (corpus.num_tokens() == 0) throw ConfigError("corpus has no tokens");
    if (T > std::numeric_limits<std::uint32_t>::max()) throw ConfigError("too many topics");

    const double alpha = options.alpha_sum / static_cast<double>(T);
    const double beta = options.beta;
    const double vbeta = static_cast<double>(V) * beta;
    const auto& docs = corpus.docs;

    std::vector<std::uint32_t> n_dt(docs.size() * T, 0);
    std::vector<std::uint32_t> n_wt(V * T, 0);
    std::vector<std::uint32_t> n_t(T, 0);
    std::vector<std::vector<std::uint32_t>> z(docs.size());

    Rng rng(options.seed);
    for (std::size_t d = 0; d < docs.size(); ++d) {
        z[d].resize(docs[d].size());
        for (std::size_t i = 0; i < docs[d].size(); ++i) {
            const auto t = static_cast<std::uint32_t>(rng.uniform_index(T));
            z[d][i] = t;
            ++n_dt[d * T + t];
            ++n_wt[docs[d][i] * T + t];
            ++n_t[t];
        }
    }

    std::vector<double> cdf(T);
    for (std::size_t sweep = 1; sweep <= options.iterations; ++sweep) {
        for (std::size_t d = 0; d < docs.size(); ++d) {
            std::uint32_t* doc_counts = &n_dt[d * T];
            for (std::size_t i = 0; i < docs[d].size(); ++i) {
                const WordId w = docs[d][i];
                std::uint32_t* word_counts = &n_wt[static_cast<std::size_t>(w) * T];
                std::uint32_t t = z[d][i];
                --doc_counts[t];
                --word_counts[t];
                --n_t[t];

                double total = 0.0;
                for (std::size_t k = 0; k < T; ++k) {
                    total += (doc_counts[k] + alpha) * (word_counts[k] + beta) / (n_t[k] + vbeta);
                    cdf[k] = total;
                }
                const double u = rng.uniform01() * total;
                t = 0;
                while (t + 1 < T && cdf[t] <= u) ++t;

                z[d][i] = t;
                ++doc_counts[t];
                ++word_counts[t];
                ++n_t[t];
            }
        }
        if (options.on_progress && options.log_every > 0 &&
            (sweep % options.log_every == 0 || sweep == options.iterations)) {
            const auto e = estimate(T, V, options.alpha_sum, beta, docs, n_dt, n_wt, n_t);
            options.on_progress(sweep, log_likelihood(T, V, docs, e.theta, e.phi));
        }
    }
    return TopicModel(T, options.alpha_sum, beta, options.seed, std::move(z), corpus);
}

std::vector<WordId> topic_top_word_ids(const TopicModel& model, std::size_t topic, std::size_t n) {
    if (topic >= model.num_topics()) throw RangeError("topic index " + std::to_string(topic) + " out of range");
    const auto row = model.phi(topic);
    std::vector<WordId> ids(row.size());
    std::iota(ids.begin(), ids.end(), WordId{0});
    n = std::min(n, ids.size());
    std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n), ids.end(),
                      [&](WordId a, WordId b) { return row[a] != row[b] ? row[a] > row[b] : a < b; });
    ids.resize(n);
    return ids;
}

std::vector<std::string> topic_top_words(const TopicModel& model, const Vocabulary& vocab, std::size_t topic,
                                         std::size_t n) {
    std::vector<std::string> words;
    for (const auto id : topic_top_word_ids(model, topic, n)) words.push_back(vocab.token(id));
    return words;
}

double corpus_log_likelihood(const TopicModel& model, const EncodedCorpus& corpus) {
    if (corpus.num_docs() != model.num_docs() || corpus.vocab_size != model.vocab_size()) {
        throw ConfigError("corpus does not match the model");
    }
    double total = 0.0;
    const std::size_t T = model.num_topics();
    for (std::size_t d = 0; d < corpus.num_docs(); ++d) {
        const auto theta = model.theta(d);
        for (const WordId w : corpus.docs[d]) {
            double p = 0.0;
            for (std::size_t t = 0; t < T; ++t) p += theta[t] * model.phi(t)[w];
            total += std::log(p);
        }
    }
    return total;
}

TopicProfiles item_profiles(const TopicModel& model, const EncodedCorpus& corpus) {
    TopicProfiles profiles;
    for (std::size_t d = 0; d < corpus.num_docs(); ++d) {
        const auto row = model.theta(d);
        profiles.emplace(corpus.item_ids[d], std::vector<double>(row.begin(), row.end()));
    }
    return profiles;
}

void write_theta_csv(std::ostream& out, const TopicModel& model, const EncodedCorpus& corpus) {
    std::ostringstream buf;
    buf.precision(17);
    for (std::size_t d = 0; d < corpus.num_docs(); ++d) {
        buf << corpus.item_ids[d];
        for (const double p : model.theta(d)) buf << ',' << p;
        buf << '\n';
    }
    out << buf.str();
}

TopicProfiles parse_theta_csv(std::istream& in) {
    TopicProfiles profiles;
    std::string line;
    std::size_t line_no = 0;
    std::size_t width = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#' || line == "\r") continue;
        std::istringstream fields(line);
        std::string field;
        std::vector<double> values;
        ItemId item = 0;
        bool first = true;
        while (std::getline(fields, field, ',')) {
            try {
                std::size_t used = 0;
                if (first) {
                    item = std::stoll(field, &used);
                } else {
                    values.push_back(std::stod(field, &used));
                }
                if (field.find_first_not_of(" \r", used) != std::string::npos) throw std::invalid_argument(field);
            } catch (const std::exception&) {
                throw ParseError(line_no, "bad theta field '" + field + "'");
            }
            first = false;
        }
        if (values.empty()) throw ParseError(line_no, "theta row has no probabilities");
        if (width == 0) width = values.size();
        if (values.size() != width) throw ParseError(line_no, "theta row width differs from earlier rows");
        profiles[item] = std::move(values);
    }
    return profiles;
}

TopicProfiles load_theta_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    return parse_theta_csv(in);
}

void write_phi_csv(std::ostream& out, const TopicModel& model, const Vocabulary& vocab, double threshold) {
    std::ostringstream buf;
    buf.precision(17);
    buf << "# topics=" << model.num_topics() << " alpha_sum=" << model.alpha_sum() << " beta=" << model.beta()
        << " vocab_size=" << model.vocab_size() << " threshold=" << threshold << '\n';
    for (std::size_t t = 0; t < model.num_topics(); ++t) {
        const auto row = model.phi(t);
        for (std::size_t w = 0; w < row.size(); ++w) {
            if (row[w] > threshold) buf << t << ',' << vocab.token(static_cast<WordId>(w)) << ',' << row[w] << '\n';
        }
    }
    out << buf.str();
}

void write_topics_txt(std::ostream& out, const TopicModel& model, const Vocabulary& vocab, std::size_t n) {
    for (std::size_t t = 0; t < model.num_topics(); ++t) {
        out << 'T' << t << '\t';
        const auto words = topic_top_words(model, vocab, t, n);
        for (std::size_t i = 0; i < words.size(); ++i) out << (i ? " " : "") << words[i];
        out << '\n';
    }
}

}  // namespace topiccf
