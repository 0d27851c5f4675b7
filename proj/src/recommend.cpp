#include "topiccf/recommend.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <sstream>

#include "topiccf/error.hpp"

namespace topiccf {

namespace {

bool neighbor_before(const Neighbor& a, const Neighbor& b) {
    const double ka = rank_key(a.similarity);
    const double kb = rank_key(b.similarity);
    return ka != kb ? ka > kb : a.user < b.user;
}

bool recommendation_before(const Recommendation& a, const Recommendation& b) {
    const double ka = rank_key(a.score);
    const double kb = rank_key(b.score);
    return ka != kb ? ka > kb : a.item < b.item;
}

NeighborSet select_top(UserId user, std::vector<Neighbor> candidates, std::size_t n) {
    n = std::min(n, candidates.size());
    std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(n), candidates.end(),
                      neighbor_before);
    candidates.resize(n);
    return NeighborSet{user, std::move(candidates)};
}

bool rated(std::span<const ItemRating> row, ItemId item) {
    return std::binary_search(row.begin(), row.end(), ItemRating{item, 0.0},
                              [](const ItemRating& a, const ItemRating& b) { return a.item < b.item; });
}

RecommendationList finish(UserId user, std::vector<Recommendation> scored, std::size_t k) {
    const auto n = std::min(k, scored.size());
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(n), scored.end(),
                      recommendation_before);
    scored.resize(n);
    return RecommendationList{user, std::move(scored)};
}

void check_k(std::size_t k) {
    if (k < 1) throw ConfigError("K must be at least 1");
}

void check_n(std::size_t n) {
    if (n < 1) throw ConfigError("neighborhood size must be at least 1");
}

RecommendationList weighted_average_over_neighbors(UserId user, const NeighborSet& neighbors,
                                                   const RatingDataset& train, std::size_t k) {
    const auto own = train.ratings_of(user);
    std::map<ItemId, std::pair<double, double>> sums;  // item -> (sum sim*r, sum |sim|)
    for (const auto& nb : neighbors.neighbors) {
        for (const auto& r : train.ratings_of(nb.user)) {
            if (rated(own, r.item)) continue;
            auto& [num, den] = sums[r.item];
            num += nb.similarity * r.rating;
            den += std::abs(nb.similarity);
        }
    }
    std::vector<Recommendation> scored;
    scored.reserve(sums.size());
    for (const auto& [item, s] : sums) {
        if (s.second > 0.0) scored.push_back({item, s.first / s.second});
    }
    return finish(user, std::move(scored), k);
}

RecommendationList item_based(UserId user, const RatingDataset& train, const ItemSimilarityIndex& index,
                              std::size_t k) {
    const auto own = train.ratings_of(user);
    if (own.empty()) return RecommendationList{user, {}};
    std::vector<std::size_t> own_idx;
    own_idx.reserve(own.size());
    for (const auto& r : own) own_idx.push_back(*train.item_index(r.item));

    std::vector<std::vector<double>> rows;
    if (!index.dense()) {
        for (const auto j : own_idx) rows.push_back(index.row(j));
    }

    std::vector<Recommendation> scored;
    std::size_t next_own = 0;
    for (std::size_t i = 0; i < train.num_items(); ++i) {
        if (next_own < own_idx.size() && own_idx[next_own] == i) {
            ++next_own;
            continue;
        }
        double num = 0.0;
        double den = 0.0;
        for (std::size_t jj = 0; jj < own_idx.size(); ++jj) {
            const double s = index.dense() ? index(i, own_idx[jj]) : rows[jj][i];
            if (s == 0.0) continue;
            num += s * own[jj].rating;
            den += std::abs(s);
        }
        if (den > 0.0) scored.push_back({train.items()[i], num / den});
    }
    return finish(user, std::move(scored), k);
}

class NeighborhoodRecommender final : public Recommender {
public:
    NeighborhoodRecommender(Algorithm algorithm, const RatingDataset& train, const PersonaTable* personas,
                            const RecommenderOptions& options)
        : algorithm_(algorithm),
          index_(train, algorithm == Algorithm::hybrid ? UserMeasure::hybrid : UserMeasure::topic, personas),
          options_(options) {}

    RecommendationList recommend(UserId user, std::size_t k) const override {
        check_k(k);
        if (!index_.train().user_index(user)) return RecommendationList{user, {}};
        const auto neighbors = build_neighborhood(user, index_, options_.neighbors);
        return recommend_neighborhood(user, neighbors, index_.train(), k, options_.like_threshold);
    }

    Algorithm algorithm() const override { return algorithm_; }

private:
    Algorithm algorithm_;
    UserSimilarityIndex index_;
    RecommenderOptions options_;
};

class UserBasedRecommender final : public Recommender {
public:
    UserBasedRecommender(Algorithm algorithm, const RatingDataset& train, const RecommenderOptions& options)
        : algorithm_(algorithm),
          index_(train, algorithm == Algorithm::ubcf_pearson ? UserMeasure::pearson : UserMeasure::llr),
          options_(options) {}

    RecommendationList recommend(UserId user, std::size_t k) const override {
        check_k(k);
        if (!index_.train().user_index(user)) return RecommendationList{user, {}};
        const auto neighbors = build_neighborhood(user, index_, options_.neighbors);
        return weighted_average_over_neighbors(user, neighbors, index_.train(), k);
    }

    Algorithm algorithm() const override { return algorithm_; }

private:
    Algorithm algorithm_;
    UserSimilarityIndex index_;
    RecommenderOptions options_;
};

class ItemBasedRecommender final : public Recommender {
public:
    explicit ItemBasedRecommender(const RatingDataset& train) : train_(&train), index_(train) {}

    RecommendationList recommend(UserId user, std::size_t k) const override {
        check_k(k);
        return item_based(user, *train_, index_, k);
    }

    Algorithm algorithm() const override { return Algorithm::ibcf_llr; }

private:
    const RatingDataset* train_;
    ItemSimilarityIndex index_;
};

}  // namespace

double rank_key(double value) {
    if (value == 0.0 || !std::isfinite(value)) return value;
    int exponent = 0;
    const double mantissa = std::frexp(value, &exponent);
    return std::ldexp(std::round(mantissa * 0x1p40) * 0x1p-40, exponent);
}

NeighborSet build_neighborhood(UserId user, const RatingDataset& train, const UserSimilarityFn& sim, std::size_t n) {
    check_n(n);
    std::vector<Neighbor> candidates;
    for (const auto v : train.users()) {
        if (v == user) continue;
        const auto s = sim(user, v);
        if (s.defined && s.value > 0.0) candidates.push_back({v, s.value});
    }
    return select_top(user, std::move(candidates), n);
}

NeighborSet build_neighborhood(UserId user, const UserSimilarityIndex& index, std::size_t n) {
    check_n(n);
    const auto scores = index.scores_for(user);
    const auto users = index.train().users();
    std::vector<Neighbor> candidates;
    for (std::size_t v = 0; v < users.size(); ++v) {
        if (users[v] == user) continue;
        if (scores[v].defined && scores[v].value > 0.0) candidates.push_back({users[v], scores[v].value});
    }
    return select_top(user, std::move(candidates), n);
}

RecommendationList recommend_neighborhood(UserId user, const NeighborSet& neighbors, const RatingDataset& train,
                                          std::size_t k, double like_threshold) {
    check_k(k);
    if (neighbors.empty()) return RecommendationList{user, {}};
    const auto own = train.ratings_of(user);
    std::map<ItemId, std::size_t> liked;
    for (const auto& nb : neighbors.neighbors) {
        for (const auto& r : train.ratings_of(nb.user)) {
            if (r.rating >= like_threshold) ++liked[r.item];
        }
    }
    const double size = static_cast<double>(neighbors.size());
    std::vector<Recommendation> scored;
    for (const auto& [item, count] : liked) {
        if (rated(own, item)) continue;
        scored.push_back({item, static_cast<double>(count) / size});
    }
    return finish(user, std::move(scored), k);
}

RecommendationList recommend_user_based(UserId user, const RatingDataset& train, UserMeasure measure, std::size_t n,
                                        std::size_t k) {
    if (measure != UserMeasure::pearson && measure != UserMeasure::llr) {
        throw ConfigError("user-based CF takes pearson or llr similarity");
    }
    const RecommenderOptions options{n, kMinRating};
    check_n(n);
    return UserBasedRecommender(measure == UserMeasure::pearson ? Algorithm::ubcf_pearson : Algorithm::ubcf_llr,
                                train, options)
        .recommend(user, k);
}

RecommendationList recommend_item_based(UserId user, const RatingDataset& train, std::size_t k) {
    check_k(k);
    const ItemSimilarityIndex index(train, 0);
    return item_based(user, train, index, k);
}

RecommendationList recommend_hybrid(UserId user, const PersonaTable& personas, const RatingDataset& train,
                                    std::size_t n, std::size_t k, double like_threshold) {
    check_n(n);
    return NeighborhoodRecommender(Algorithm::hybrid, train, &personas, {n, like_threshold}).recommend(user, k);
}

RecommendationList recommend_topic_only(UserId user, const PersonaTable& personas, const RatingDataset& train,
                                        std::size_t n, std::size_t k, double like_threshold) {
    check_n(n);
    return NeighborhoodRecommender(Algorithm::topic_only, train, &personas, {n, like_threshold}).recommend(user, k);
}

std::string to_string(Algorithm algorithm) {
    switch (algorithm) {
        case Algorithm::hybrid:
            return "hybrid";
        case Algorithm::topic_only:
            return "topic_only";
        case Algorithm::ubcf_pearson:
            return "ubcf_pearson";
        case Algorithm::ubcf_llr:
            return "ubcf_llr";
        case Algorithm::ibcf_llr:
            return "ibcf_llr";
    }
    return "unknown";
}

Algorithm parse_algorithm(const std::string& label) {
    for (const auto a : kAllAlgorithms) {
        if (to_string(a) == label) return a;
    }
    std::string valid;
    for (const auto a : kAllAlgorithms) valid += (valid.empty() ? "" : ", ") + to_string(a);
    throw ConfigError("unknown algorithm '" + label + "' (valid: " + valid + ")");
}

bool needs_personas(Algorithm algorithm) {
    return algorithm == Algorithm::hybrid || algorithm == Algorithm::topic_only;
}

std::unique_ptr<Recommender> make_recommender(Algorithm algorithm, const RatingDataset& train,
                                              const PersonaTable* personas, const RecommenderOptions& options) {
    check_n(options.neighbors);
    switch (algorithm) {
        case Algorithm::hybrid:
        case Algorithm::topic_only:
            if (personas == nullptr) throw ConfigError(to_string(algorithm) + " needs personas");
            return std::make_unique<NeighborhoodRecommender>(algorithm, train, personas, options);
        case Algorithm::ubcf_pearson:
        case Algorithm::ubcf_llr:
            return std::make_unique<UserBasedRecommender>(algorithm, train, options);
        case Algorithm::ibcf_llr:
            return std::make_unique<ItemBasedRecommender>(train);
    }
    throw ConfigError("unknown algorithm");
}

void write_recommendations_csv(std::ostream& out, std::span<const RecommendationList> lists) {
    std::ostringstream buf;
    buf.precision(17);
    buf << "user_id,rank,item_id,score\n";
    for (const auto& list : lists) {
        for (std::size_t r = 0; r < list.items.size(); ++r) {
            buf << list.user << ',' << r + 1 << ',' << list.items[r].item << ',' << list.items[r].score << '\n';
        }
    }
    out << buf.str();
}

}  // namespace topiccf
