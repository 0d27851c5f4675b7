#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "topiccf/ingest.hpp"
#include "topiccf/persona.hpp"

namespace topiccf {

struct SimilarityScore {
    double value = 0.0;
    bool defined = false;

    static SimilarityScore of(double v) { return {v, true}; }
    static SimilarityScore undefined() { return {}; }
};

/// Floor applied to every distribution entry before KL is taken.
inline constexpr double kKlFloor = 1e-10;

/// Entries floored at kKlFloor, then renormalized to sum to one.
std::vector<double> floor_and_normalize(std::span<const double> p);

/// KL(p||q) + KL(q||p) after flooring both inputs. Throws RangeError on a
/// dimension mismatch.
double symmetric_kl(std::span<const double> p, std::span<const double> q);

/// exp(-symmetric_kl); undefined if either persona is undefined.
SimilarityScore topic_similarity(const UserPersona& u, const UserPersona& v);

/// Correlation over co-rated items, each side centered on its mean over the
/// co-rated subset. Undefined below two co-rated items or for a constant side.
SimilarityScore pearson_similarity(const RatingDataset& train, UserId u, UserId v);

/// G^2 = 2 * sum k ln(k N / (row * col)) over the 2x2 table, with 0 ln 0 = 0,
/// clamped at zero.
double g_squared(std::uint64_t k11, std::uint64_t k12, std::uint64_t k21, std::uint64_t k22);

/// 1 - 1 / (1 + G^2) for the table built from two sets of the given sizes
/// with `overlap` common members in a universe of `universe`.
double llr_from_overlap(std::uint64_t overlap, std::uint64_t size_a, std::uint64_t size_b, std::uint64_t universe);

/// Log-likelihood similarity of the users' item sets; the universe is the
/// number of distinct items in `train`. Always defined.
SimilarityScore llr_similarity(const RatingDataset& train, UserId u, UserId v);

/// Same statistic over the items' rater sets; the universe is the number of
/// distinct users.
SimilarityScore item_llr_similarity(const RatingDataset& train, ItemId i, ItemId j);

/// topic_similarity * llr_similarity, or llr_similarity alone when either
/// persona is missing or undefined.
SimilarityScore hybrid_similarity(const PersonaTable& personas, const RatingDataset& train, UserId u, UserId v);

enum class UserMeasure { pearson, llr, topic, hybrid };

/// Computes one user's similarity to every user of `train` in a single pass
/// over the item columns, instead of one merge per pair. Results are
/// identical to the pairwise functions above.
class UserSimilarityIndex {
public:
    /// `personas` is required for topic and hybrid and must outlive the index.
    UserSimilarityIndex(const RatingDataset& train, UserMeasure measure, const PersonaTable* personas = nullptr);

    UserMeasure measure() const { return measure_; }
    const RatingDataset& train() const { return *train_; }

    /// Indexed by train user index. The entry for `user` itself is undefined.
    std::vector<SimilarityScore> scores_for(UserId user) const;

    SimilarityScore operator()(UserId u, UserId v) const;

    /// True when a hybrid score for (u, v) is LLR alone because a persona is
    /// missing or undefined.
    bool uses_fallback(UserId u, UserId v) const;

private:
    struct Prepared {
        std::vector<double> floored;
        std::vector<double> logs;
    };
    Prepared prepare(UserId user) const;
    SimilarityScore topic_term(const Prepared& a, const Prepared& b) const;

    const RatingDataset* train_;
    UserMeasure measure_;
    const PersonaTable* personas_;
    // indexed by train user index; empty vectors for undefined personas
    std::vector<Prepared> prepared_;
};

/// Item-item LLR similarities, kept as a dense matrix when the item count
/// allows and computed per row on demand otherwise.
class ItemSimilarityIndex {
public:
    explicit ItemSimilarityIndex(const RatingDataset& train, std::size_t dense_limit = 8000);

    /// Similarities of item index `j` to every item, indexed by item index.
    std::vector<double> row(std::size_t j) const;
    double operator()(std::size_t i, std::size_t j) const;
    bool dense() const { return !matrix_.empty(); }

private:
    std::vector<std::uint32_t> cooccurrence_row(std::size_t j) const;

    const RatingDataset* train_;
    std::size_t n_items_;
    std::vector<double> matrix_;
};

/// `user_a,user_b,topic,llr,hybrid` for every unordered pair of train users.
void write_similarity_dump(std::ostream& out, const RatingDataset& train, const PersonaTable& personas);

}  // namespace topiccf
