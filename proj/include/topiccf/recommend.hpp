#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "topiccf/ingest.hpp"
#include "topiccf/persona.hpp"
#include "topiccf/similarity.hpp"

namespace topiccf {

inline constexpr std::size_t kDefaultNeighbors = 30;
inline constexpr std::size_t kDefaultMaxK = 75;

/// Sort key for similarities and scores: the value rounded to 40 significant
/// bits. Values that differ only by floating-point noise from different
/// summation orders rank as ties and fall through to the id tie-break.
double rank_key(double value);

struct Neighbor {
    UserId user;
    double similarity;
};

/// Most similar users, ordered by (similarity desc, user id asc).
struct NeighborSet {
    UserId user = 0;
    std::vector<Neighbor> neighbors;

    std::size_t size() const { return neighbors.size(); }
    bool empty() const { return neighbors.empty(); }
};

struct Recommendation {
    ItemId item;
    double score;
};

/// Ordered by (score desc, item id asc); never contains the user's training
/// items.
struct RecommendationList {
    UserId user = 0;
    std::vector<Recommendation> items;

    std::size_t size() const { return items.size(); }
    bool empty() const { return items.empty(); }
};

using UserSimilarityFn = std::function<SimilarityScore(UserId, UserId)>;

/// Top-N users of `train` other than `user`. Undefined and non-positive
/// similarities are never neighbors, even if that leaves fewer than N.
NeighborSet build_neighborhood(UserId user, const RatingDataset& train, const UserSimilarityFn& sim,
                               std::size_t n);
NeighborSet build_neighborhood(UserId user, const UserSimilarityIndex& index, std::size_t n);

/// Ranks every item rated by a neighbor by the fraction of the neighborhood
/// rating it at least `like_threshold`; the denominator is the actual
/// neighborhood size. Items with zero weight and items the user already
/// rated are dropped; the first K remain.
RecommendationList recommend_neighborhood(UserId user, const NeighborSet& neighbors, const RatingDataset& train,
                                          std::size_t k, double like_threshold = kMinRating);

/// Neighborhood by rating-overlap similarity, scored by the similarity
/// weighted average of the neighbors' ratings.
RecommendationList recommend_user_based(UserId user, const RatingDataset& train, UserMeasure measure,
                                        std::size_t n, std::size_t k);

/// Scores each unrated item by the item-LLR weighted average of the user's
/// own ratings.
RecommendationList recommend_item_based(UserId user, const RatingDataset& train, std::size_t k);

RecommendationList recommend_hybrid(UserId user, const PersonaTable& personas, const RatingDataset& train,
                                    std::size_t n, std::size_t k, double like_threshold = kMinRating);

RecommendationList recommend_topic_only(UserId user, const PersonaTable& personas, const RatingDataset& train,
                                        std::size_t n, std::size_t k, double like_threshold = kMinRating);

enum class Algorithm { hybrid, topic_only, ubcf_pearson, ubcf_llr, ibcf_llr };

inline constexpr Algorithm kAllAlgorithms[] = {Algorithm::hybrid, Algorithm::topic_only, Algorithm::ubcf_pearson,
                                               Algorithm::ubcf_llr, Algorithm::ibcf_llr};

std::string to_string(Algorithm algorithm);
/// Throws ConfigError listing the valid labels.
Algorithm parse_algorithm(const std::string& label);
bool needs_personas(Algorithm algorithm);

struct RecommenderOptions {
    std::size_t neighbors = kDefaultNeighbors;
    double like_threshold = kMinRating;
};

/// Reusable recommender over fixed inputs. recommend() is const and safe to
/// call from several threads.
class Recommender {
public:
    virtual ~Recommender() = default;
    virtual RecommendationList recommend(UserId user, std::size_t k) const = 0;
    virtual Algorithm algorithm() const = 0;
};

/// `personas` is required for hybrid and topic_only. The inputs must outlive
/// the recommender.
std::unique_ptr<Recommender> make_recommender(Algorithm algorithm, const RatingDataset& train,
                                              const PersonaTable* personas, const RecommenderOptions& options);

/// `user_id,rank,item_id,score` with 1-based rank.
void write_recommendations_csv(std::ostream& out, std::span<const RecommendationList> lists);

}  // namespace topiccf
