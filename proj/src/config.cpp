#include "topiccf/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "topiccf/error.hpp"

namespace topiccf {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

template <typename T>
T number(const std::string& key, const std::string& value) {
    T out{};
    const auto* end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (value.empty() || ec != std::errc{} || ptr != end) {
        throw ConfigError("bad value for " + key + ": '" + value + "'");
    }
    return out;
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> parts;
    std::istringstream in(value);
    std::string part;
    while (std::getline(in, part, ',')) {
        part = trim(part);
        if (!part.empty()) parts.push_back(part);
    }
    return parts;
}

bool boolean(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw ConfigError("bad boolean for " + key + ": '" + value + "'");
}

}  // namespace

void apply_setting(RunConfig& c, const std::string& raw_key, const std::string& raw_value) {
    const auto key = trim(raw_key);
    const auto value = trim(raw_value);
    if (key == "ratings") {
        c.ratings = value;
    } else if (key == "format") {
        c.format = parse_rating_format(value);
    } else if (key == "corpus") {
        c.corpus = value;
    } else if (key == "stopwords") {
        c.stopwords = value;
    } else if (key == "out") {
        c.out = value;
    } else if (key == "topics") {
        c.topics = number<std::size_t>(key, value);
    } else if (key == "alpha-sum") {
        c.alpha_sum = number<double>(key, value);
    } else if (key == "beta") {
        c.beta = number<double>(key, value);
    } else if (key == "iterations") {
        c.iterations = number<std::size_t>(key, value);
    } else if (key == "lda-seed") {
        c.lda_seed = number<std::uint64_t>(key, value);
    } else if (key == "min-df") {
        c.min_df = number<std::size_t>(key, value);
    } else if (key == "fraction") {
        c.fraction = number<double>(key, value);
    } else if (key == "split-seed") {
        c.split_seed = number<std::uint64_t>(key, value);
    } else if (key == "neighbors") {
        c.neighbors = number<std::size_t>(key, value);
    } else if (key == "like-threshold") {
        c.like_threshold = number<double>(key, value);
    } else if (key == "max-k") {
        c.max_k = number<std::size_t>(key, value);
    } else if (key == "ks") {
        c.ks.clear();
        for (const auto& part : split_list(value)) c.ks.push_back(number<std::size_t>(key, part));
    } else if (key == "relevance-threshold") {
        c.relevance_threshold = number<double>(key, value);
    } else if (key == "algorithms") {
        c.algorithms.clear();
        for (const auto& part : split_list(value)) c.algorithms.push_back(parse_algorithm(part));
    } else if (key == "per-user") {
        c.per_user = boolean(key, value);
    } else {
        throw ConfigError("unknown config key '" + key + "'");
    }
}

RunConfig parse_config(std::istream& in, RunConfig base) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto text = trim(line);
        if (text.empty() || text[0] == '#') continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos) throw ParseError(line_no, "expected key=value");
        apply_setting(base, text.substr(0, eq), text.substr(eq + 1));
    }
    return base;
}

RunConfig load_config(const std::filesystem::path& path, RunConfig base) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config " + path.string());
    return parse_config(in, std::move(base));
}

void write_config(std::ostream& out, const RunConfig& c) {
    std::ostringstream buf;
    buf.precision(17);
    buf << "ratings=" << c.ratings << '\n'
        << "format=" << to_string(c.format) << '\n'
        << "corpus=" << c.corpus << '\n'
        << "stopwords=" << c.stopwords << '\n'
        << "out=" << c.out << '\n'
        << "topics=" << c.topics << '\n'
        << "alpha-sum=" << c.alpha_sum << '\n'
        << "beta=" << c.beta << '\n'
        << "iterations=" << c.iterations << '\n'
        << "lda-seed=" << c.lda_seed << '\n'
        << "min-df=" << c.min_df << '\n'
        << "fraction=" << c.fraction << '\n'
        << "split-seed=" << c.split_seed << '\n'
        << "neighbors=" << c.neighbors << '\n'
        << "like-threshold=" << c.like_threshold << '\n'
        << "max-k=" << c.max_k << '\n'
        << "ks=";
    for (std::size_t i = 0; i < c.ks.size(); ++i) buf << (i ? "," : "") << c.ks[i];
    buf << '\n' << "relevance-threshold=" << c.relevance_threshold << '\n' << "algorithms=";
    for (std::size_t i = 0; i < c.algorithms.size(); ++i) buf << (i ? "," : "") << to_string(c.algorithms[i]);
    buf << '\n' << "per-user=" << (c.per_user ? "true" : "false") << '\n';
    out << buf.str();
}

void validate(const RunConfig& c) {
    if (c.topics < 1) throw ConfigError("topics must be at least 1");
    if (!(c.alpha_sum > 0.0)) throw ConfigError("alpha-sum must be positive");
    if (!(c.beta > 0.0)) throw ConfigError("beta must be positive");
    if (c.iterations < 1) throw ConfigError("iterations must be at least 1");
    if (c.min_df < 1) throw ConfigError("min-df must be at least 1");
    if (!(c.fraction > 0.0 && c.fraction < 1.0)) throw ConfigError("fraction must lie strictly between 0 and 1");
    if (c.neighbors < 1) throw ConfigError("neighbors must be at least 1");
    if (c.ks.empty()) throw ConfigError("ks is empty");
    for (std::size_t i = 0; i < c.ks.size(); ++i) {
        if (c.ks[i] < 1) throw ConfigError("every K must be at least 1");
        if (i > 0 && c.ks[i] <= c.ks[i - 1]) throw ConfigError("ks must be strictly increasing");
    }
    if (c.max_k < c.ks.back()) throw ConfigError("max-k must be at least the largest K");
    if (c.algorithms.empty()) throw ConfigError("no algorithms selected");
}

}  // namespace topiccf
