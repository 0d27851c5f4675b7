#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace topiccf {

using UserId = std::int64_t;
using ItemId = std::int64_t;

inline constexpr double kMinRating = 1.0;
inline constexpr double kMaxRating = 5.0;

struct RatingRecord {
    UserId user = 0;
    ItemId item = 0;
    double rating = 0.0;
    std::optional<std::int64_t> timestamp;

    friend bool operator==(const RatingRecord&, const RatingRecord&) = default;
};

struct ItemRating {
    ItemId item;
    double rating;
};

struct UserRating {
    UserId user;
    double rating;
};

/// Immutable sparse user x item rating matrix with both row and column
/// indexes. Records are kept sorted by (user, item); per-user rows are
/// sorted by item id and per-item columns by user id.
class RatingDataset {
public:
    RatingDataset() = default;

    /// Builds the indexes. A repeated (user, item) pair keeps the last
    /// occurrence; the number of dropped records is reported by
    /// duplicates_dropped(). Throws RangeError for ratings outside [1, 5].
    explicit RatingDataset(std::vector<RatingRecord> records);

    std::span<const RatingRecord> records() const { return records_; }
    std::size_t size() const { return records_.size(); }
    bool empty() const { return records_.empty(); }

    std::size_t num_users() const { return user_ids_.size(); }
    std::size_t num_items() const { return item_ids_.size(); }

    /// Sorted distinct ids.
    std::span<const UserId> users() const { return user_ids_; }
    std::span<const ItemId> items() const { return item_ids_; }

    std::optional<std::size_t> user_index(UserId user) const;
    std::optional<std::size_t> item_index(ItemId item) const;

    /// Empty span for unknown users.
    std::span<const ItemRating> ratings_of(UserId user) const;
    std::span<const ItemRating> ratings_at(std::size_t user_index) const { return by_user_[user_index]; }

    std::span<const UserRating> raters_of(ItemId item) const;
    std::span<const UserRating> raters_at(std::size_t item_index) const { return by_item_[item_index]; }

    std::optional<double> rating(UserId user, ItemId item) const;

    std::size_t duplicates_dropped() const { return duplicates_; }

private:
    std::vector<RatingRecord> records_;
    std::vector<UserId> user_ids_;
    std::vector<ItemId> item_ids_;
    std::unordered_map<UserId, std::size_t> user_pos_;
    std::unordered_map<ItemId, std::size_t> item_pos_;
    std::vector<std::vector<ItemRating>> by_user_;
    std::vector<std::vector<UserRating>> by_item_;
    std::size_t duplicates_ = 0;
};

enum class RatingFormat { movielens_dat, csv };

RatingFormat parse_rating_format(const std::string& name);
std::string to_string(RatingFormat format);

/// One record per non-empty line. Throws ParseError (with 1-based line
/// number) for malformed lines and RangeError for out-of-scale ratings.
RatingDataset parse_ratings(std::istream& in, RatingFormat format);
RatingDataset load_ratings(const std::filesystem::path& path, RatingFormat format);

/// Header-less `user,item,rating[,timestamp]`, records in (user, item) order.
void write_ratings_csv(std::ostream& out, const RatingDataset& ds);
void save_ratings_csv(const std::filesystem::path& path, const RatingDataset& ds);

/// Item documents keyed by item id.
struct DocumentCorpus {
    std::map<ItemId, std::string> docs;
    /// Directory entries whose stem is not an integer, or blank documents.
    std::size_t skipped = 0;

    bool empty() const { return docs.empty(); }
    std::size_t size() const { return docs.size(); }
};

/// Reads `item_id<TAB>text` lines.
DocumentCorpus parse_corpus_tsv(std::istream& in);

/// `path` is either a directory of `<item_id>.txt` files or a TSV file.
DocumentCorpus load_corpus(const std::filesystem::path& path);

struct SplitPair {
    RatingDataset train;
    RatingDataset test;
    std::uint64_t seed = 0;
    double fraction = 0.0;
};

/// Number of a user's ratings that go to train: round-half-up of
/// fraction * count.
std::size_t train_share(std::size_t count, double fraction);

/// Per-user shuffle seeded by (seed, user id); the first train_share()
/// records of each user go to train. Throws ConfigError unless
/// 0 < fraction < 1.
SplitPair split_train_test(const RatingDataset& ds, double fraction, std::uint64_t seed);

/// The columns of the dataset-properties table.
struct DatasetSummary {
    std::size_t users = 0;
    std::size_t items = 0;
    std::size_t max_ratings_per_user = 0;
    double avg_ratings_per_user = 0.0;
};

DatasetSummary summarize(const RatingDataset& ds);

}  // namespace topiccf
