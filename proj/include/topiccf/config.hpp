#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "topiccf/evaluate.hpp"
#include "topiccf/ingest.hpp"
#include "topiccf/recommend.hpp"

namespace topiccf {

/// Everything a pipeline run depends on. Defaults follow the published
/// experimental setup: 50 topics, alpha_sum 50, beta 0.01, 80/20 split,
/// 30 neighbors, up to 75 recommendations.
struct RunConfig {
    std::string ratings;
    RatingFormat format = RatingFormat::movielens_dat;
    std::string corpus;
    std::string stopwords;  // empty: built-in English list
    std::string out = "out";

    std::size_t topics = 50;
    double alpha_sum = 50.0;
    double beta = 0.01;
    std::size_t iterations = 1000;
    std::uint64_t lda_seed = 1;
    std::size_t min_df = 1;

    double fraction = 0.8;
    std::uint64_t split_seed = 42;

    std::size_t neighbors = kDefaultNeighbors;
    double like_threshold = kMinRating;
    std::size_t max_k = kDefaultMaxK;
    std::vector<std::size_t> ks = default_ks();
    double relevance_threshold = 0.0;
    std::vector<Algorithm> algorithms{std::begin(kAllAlgorithms), std::end(kAllAlgorithms)};
    bool per_user = false;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Applies one `key=value` setting; keys are the long flag names without the
/// leading dashes (e.g. `alpha-sum`). Throws ConfigError on unknown keys or
/// bad values.
void apply_setting(RunConfig& config, const std::string& key, const std::string& value);

/// Reads `key=value` lines over `base`; blank lines and `#` comments are
/// skipped.
RunConfig parse_config(std::istream& in, RunConfig base = {});
RunConfig load_config(const std::filesystem::path& path, RunConfig base = {});

/// Every key, one per line, in a form parse_config reads back to an equal
/// config.
void write_config(std::ostream& out, const RunConfig& config);

/// Throws ConfigError for out-of-range parameters.
void validate(const RunConfig& config);

}  // namespace topiccf
