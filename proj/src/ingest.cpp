#include "topiccf/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string_view>

#include "topiccf/error.hpp"
#include "topiccf/rng.hpp"

namespace topiccf {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line, std::string_view sep) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            fields.push_back(trim(line.substr(start)));
            break;
        }
        fields.push_back(trim(line.substr(start, pos - start)));
        start = pos + sep.size();
    }
    return fields;
}

template <typename T>
std::optional<T> to_number(std::string_view s) {
    T value{};
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, value);
    if (ec != std::errc{} || ptr != end || s.empty()) return std::nullopt;
    if constexpr (std::is_floating_point_v<T>) {
        if (!std::isfinite(value)) return std::nullopt;
    }
    return value;
}

void check_rating(double rating, std::size_t line) {
    if (rating < kMinRating || rating > kMaxRating) {
        std::ostringstream msg;
        msg << "line " << line << ": rating " << rating << " outside [" << kMinRating << ", " << kMaxRating << "]";
        throw RangeError(msg.str());
    }
}

RatingRecord parse_line(std::string_view line, RatingFormat format, std::size_t line_no) {
    const auto fields = split(line, format == RatingFormat::movielens_dat ? "::" : ",");
    const bool dat = format == RatingFormat::movielens_dat;
    if (dat ? fields.size() != 4 : (fields.size() != 3 && fields.size() != 4)) {
        throw ParseError(line_no, "expected " + std::string(dat ? "4" : "3 or 4") + " fields, got " +
                                      std::to_string(fields.size()));
    }
    RatingRecord rec;
    const auto user = to_number<std::int64_t>(fields[0]);
    const auto item = to_number<std::int64_t>(fields[1]);
    const auto rating = to_number<double>(fields[2]);
    if (!user) throw ParseError(line_no, "non-integer user id '" + std::string(fields[0]) + "'");
    if (!item) throw ParseError(line_no, "non-integer item id '" + std::string(fields[1]) + "'");
    if (!rating) throw ParseError(line_no, "non-numeric rating '" + std::string(fields[2]) + "'");
    rec.user = *user;
    rec.item = *item;
    rec.rating = *rating;
    if (fields.size() == 4) {
        const auto ts = to_number<std::int64_t>(fields[3]);
        if (!ts) throw ParseError(line_no, "non-integer timestamp '" + std::string(fields[3]) + "'");
        rec.timestamp = *ts;
    }
    check_rating(rec.rating, line_no);
    return rec;
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return in;
}

}  // namespace

RatingDataset::RatingDataset(std::vector<RatingRecord> records) {
    for (std::size_t i = 0; i < records.size(); ++i) check_rating(records[i].rating, i + 1);

    // stable sort keeps file order within equal keys, so the last one wins
    std::stable_sort(records.begin(), records.end(), [](const RatingRecord& a, const RatingRecord& b) {
        return a.user != b.user ? a.user < b.user : a.item < b.item;
    });
    records_.reserve(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        const bool superseded = i + 1 < records.size() && records[i + 1].user == records[i].user &&
                                records[i + 1].item == records[i].item;
        if (superseded) {
            ++duplicates_;
            continue;
        }
        records_.push_back(records[i]);
    }

    for (const auto& r : records_) {
        if (user_ids_.empty() || user_ids_.back() != r.user) user_ids_.push_back(r.user);
        item_ids_.push_back(r.item);
    }
    std::sort(item_ids_.begin(), item_ids_.end());
    item_ids_.erase(std::unique(item_ids_.begin(), item_ids_.end()), item_ids_.end());

    user_pos_.reserve(user_ids_.size());
    for (std::size_t i = 0; i < user_ids_.size(); ++i) user_pos_.emplace(user_ids_[i], i);
    item_pos_.reserve(item_ids_.size());
    for (std::size_t i = 0; i < item_ids_.size(); ++i) item_pos_.emplace(item_ids_[i], i);

    by_user_.resize(user_ids_.size());
    by_item_.resize(item_ids_.size());
    for (const auto& r : records_) {
        by_user_[user_pos_.at(r.user)].push_back({r.item, r.rating});
        by_item_[item_pos_.at(r.item)].push_back({r.user, r.rating});
    }
}

std::optional<std::size_t> RatingDataset::user_index(UserId user) const {
    const auto it = user_pos_.find(user);
    if (it == user_pos_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::size_t> RatingDataset::item_index(ItemId item) const {
    const auto it = item_pos_.find(item);
    if (it == item_pos_.end()) return std::nullopt;
    return it->second;
}

std::span<const ItemRating> RatingDataset::ratings_of(UserId user) const {
    const auto idx = user_index(user);
    if (!idx) return {};
    return by_user_[*idx];
}

std::span<const UserRating> RatingDataset::raters_of(ItemId item) const {
    const auto idx = item_index(item);
    if (!idx) return {};
    return by_item_[*idx];
}

std::optional<double> RatingDataset::rating(UserId user, ItemId item) const {
    const auto row = ratings_of(user);
    const auto it = std::lower_bound(row.begin(), row.end(), item,
                                     [](const ItemRating& r, ItemId id) { return r.item < id; });
    if (it == row.end() || it->item != item) return std::nullopt;
    return it->rating;
}

RatingFormat parse_rating_format(const std::string& name) {
    if (name == "movielens_dat" || name == "dat") return RatingFormat::movielens_dat;
    if (name == "csv") return RatingFormat::csv;
    throw ConfigError("unknown rating format '" + name + "' (expected movielens_dat or csv)");
}

std::string to_string(RatingFormat format) {
    return format == RatingFormat::movielens_dat ? "movielens_dat" : "csv";
}

RatingDataset parse_ratings(std::istream& in, RatingFormat format) {
    std::vector<RatingRecord> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        records.push_back(parse_line(line, format, line_no));
    }
    return RatingDataset(std::move(records));
}

RatingDataset load_ratings(const std::filesystem::path& path, RatingFormat format) {
    auto in = open_input(path);
    return parse_ratings(in, format);
}

void write_ratings_csv(std::ostream& out, const RatingDataset& ds) {
    std::ostringstream buf;
    buf.precision(17);
    for (const auto& r : ds.records()) {
        buf << r.user << ',' << r.item << ',' << r.rating;
        if (r.timestamp) buf << ',' << *r.timestamp;
        buf << '\n';
    }
    out << buf.str();
}

void save_ratings_csv(const std::filesystem::path& path, const RatingDataset& ds) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    write_ratings_csv(out, ds);
    if (!out) throw IoError("write failed: " + path.string());
}

DocumentCorpus parse_corpus_tsv(std::istream& in) {
    DocumentCorpus corpus;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos) throw ParseError(line_no, "expected item_id<TAB>text");
        const auto id = to_number<std::int64_t>(trim(std::string_view(line).substr(0, tab)));
        if (!id) throw ParseError(line_no, "non-integer item id");
        const auto text = trim(std::string_view(line).substr(tab + 1));
        if (text.empty()) {
            ++corpus.skipped;
            continue;
        }
        corpus.docs[*id] = std::string(text);
    }
    return corpus;
}

DocumentCorpus load_corpus(const std::filesystem::path& path) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (!fs::is_directory(path, ec)) {
        auto in = open_input(path);
        return parse_corpus_tsv(in);
    }
    DocumentCorpus corpus;
    for (const auto& entry : fs::directory_iterator(path)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".txt") continue;
        const auto stem = entry.path().stem().string();
        const auto id = to_number<std::int64_t>(stem);
        if (!id) {
            std::cerr << "warning: skipping corpus file with non-integer name: " << entry.path().filename().string()
                      << '\n';
            ++corpus.skipped;
            continue;
        }
        auto in = open_input(entry.path());
        std::ostringstream text;
        text << in.rdbuf();
        if (in.bad()) throw IoError("cannot read " + entry.path().string());
        auto body = std::string(trim(text.str()));
        if (body.empty()) {
            ++corpus.skipped;
            continue;
        }
        corpus.docs[*id] = std::move(body);
    }
    return corpus;
}

std::size_t train_share(std::size_t count, double fraction) {
    return static_cast<std::size_t>(std::floor(fraction * static_cast<double>(count) + 0.5));
}

SplitPair split_train_test(const RatingDataset& ds, double fraction, std::uint64_t seed) {
    if (!(fraction > 0.0 && fraction < 1.0)) {
        throw ConfigError("split fraction must lie strictly between 0 and 1, got " + std::to_string(fraction));
    }
    std::vector<RatingRecord> train;
    std::vector<RatingRecord> test;
    train.reserve(ds.size());
    const auto records = ds.records();
    std::size_t begin = 0;
    while (begin < records.size()) {
        std::size_t end = begin;
        while (end < records.size() && records[end].user == records[begin].user) ++end;

        // records arrive sorted by item, so the shuffle input is canonical
        std::vector<std::size_t> order(end - begin);
        std::iota(order.begin(), order.end(), begin);
        Rng rng(seed, static_cast<std::uint64_t>(records[begin].user));
        for (std::size_t i = order.size(); i > 1; --i) {
            std::swap(order[i - 1], order[rng.uniform_index(i)]);
        }
        const std::size_t n_train = std::min(order.size(), train_share(order.size(), fraction));
        for (std::size_t i = 0; i < order.size(); ++i) {
            (i < n_train ? train : test).push_back(records[order[i]]);
        }
        begin = end;
    }
    return SplitPair{RatingDataset(std::move(train)), RatingDataset(std::move(test)), seed, fraction};
}

DatasetSummary summarize(const RatingDataset& ds) {
    DatasetSummary s;
    s.users = ds.num_users();
    s.items = ds.num_items();
    for (std::size_t u = 0; u < ds.num_users(); ++u) {
        s.max_ratings_per_user = std::max(s.max_ratings_per_user, ds.ratings_at(u).size());
    }
    if (s.users > 0) s.avg_ratings_per_user = static_cast<double>(ds.size()) / static_cast<double>(s.users);
    return s;
}

}  // namespace topiccf
