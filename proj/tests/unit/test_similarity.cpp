#include <cmath>
#include <random>

#include "doctest.h"
#include "naive.hpp"
#include "synthetic.hpp"
#include "topiccf/error.hpp"
#include "topiccf/similarity.hpp"

using namespace topiccf;

namespace {

UserPersona persona(UserId id, std::vector<double> p) { return UserPersona{id, std::move(p), 1, 0}; }

}  // namespace

TEST_CASE("symmetric KL reference values") {
    const std::vector<double> p{0.5, 0.5}, q{0.25, 0.75};
    CHECK(symmetric_kl(p, q) == doctest::Approx(0.2746530721670274).epsilon(1e-12));
    CHECK(symmetric_kl(p, p) == 0.0);
    CHECK(symmetric_kl(p, q) == symmetric_kl(q, p));
    CHECK(topic_similarity(persona(1, p), persona(2, q)).value ==
          doctest::Approx(0.7598356856515925).epsilon(1e-12));
    CHECK_THROWS_AS(symmetric_kl(p, std::vector<double>{1.0}), RangeError);
}

TEST_CASE("zeros are floored before KL") {
    const std::vector<double> p{1.0, 0.0}, q{0.0, 1.0};
    const double kl = symmetric_kl(p, q);
    CHECK(std::isfinite(kl));
    CHECK(kl > 40.0);
    const auto f = floor_and_normalize(p);
    CHECK(f[1] == doctest::Approx(kKlFloor / (1.0 + kKlFloor)));
    CHECK(f[0] + f[1] == doctest::Approx(1.0));
}

TEST_CASE("topic similarity is undefined for an undefined persona") {
    CHECK_FALSE(topic_similarity(persona(1, {}), persona(2, {1.0})).defined);
}

TEST_CASE("pearson reference value and undefined cases") {
    const RatingDataset train({{1, 1, 4, {}}, {1, 2, 2, {}}, {1, 3, 5, {}}, {1, 4, 1, {}},
                               {2, 1, 5, {}}, {2, 2, 1, {}}, {2, 3, 4, {}},
                               {3, 1, 3, {}}, {3, 2, 3, {}}, {3, 3, 3, {}},
                               {4, 9, 4, {}}});
    const auto s = pearson_similarity(train, 1, 2);
    REQUIRE(s.defined);
    CHECK(s.value == doctest::Approx(0.8386278693775345).epsilon(1e-12));
    CHECK_FALSE(pearson_similarity(train, 1, 3).defined);  // constant side
    CHECK_FALSE(pearson_similarity(train, 1, 4).defined);  // nothing co-rated
}

TEST_CASE("G^2 and LLR similarity reference values") {
    // 10 items, both users rated 4, two in common
    CHECK(g_squared(2, 2, 2, 4) == doctest::Approx(0.2768858761678131).epsilon(1e-12));
    CHECK(llr_from_overlap(2, 4, 4, 10) == doctest::Approx(0.21684465411960097).epsilon(1e-12));
    CHECK(llr_from_overlap(20, 20, 20, 1000) == doctest::Approx(0.99493).epsilon(1e-5));
    CHECK(g_squared(0, 0, 0, 5) == 0.0);
    CHECK(llr_from_overlap(3, 5, 7, 40) == llr_from_overlap(3, 7, 5, 40));
}

TEST_CASE("hybrid is the product and falls back to LLR") {
    std::vector<RatingRecord> records;
    for (ItemId i = 1; i <= 4; ++i) records.push_back({1, i, 3, {}});
    for (ItemId i = 3; i <= 6; ++i) records.push_back({2, i, 3, {}});
    for (ItemId i = 7; i <= 10; ++i) records.push_back({3, i, 3, {}});
    const RatingDataset train(records);
    PersonaTable personas;
    personas[1] = persona(1, {0.5, 0.5});
    personas[2] = persona(2, {0.25, 0.75});
    personas[3] = persona(3, {});
    const auto llr = llr_similarity(train, 1, 2);
    CHECK(llr.value == doctest::Approx(0.21684465411960097).epsilon(1e-12));
    const auto h = hybrid_similarity(personas, train, 1, 2);
    CHECK(h.value == doctest::Approx(0.7598356856515925 * 0.21684465411960097).epsilon(1e-12));
    CHECK(h.value == doctest::Approx(0.16476630644284943).epsilon(1e-12));
    CHECK(hybrid_similarity(personas, train, 1, 3).value == llr_similarity(train, 1, 3).value);

    const UserSimilarityIndex index(train, UserMeasure::hybrid, &personas);
    CHECK(index.uses_fallback(1, 3));
    CHECK_FALSE(index.uses_fallback(1, 2));
    CHECK(index(1, 2).value == doctest::Approx(h.value).epsilon(1e-12));
}

TEST_CASE("index scores match the pairwise functions on random instances") {
    std::mt19937_64 rng(77);
    for (int t = 0; t < 20; ++t) {
        const auto inst = synthetic::random_instance(rng);
        for (const auto m : {UserMeasure::pearson, UserMeasure::llr, UserMeasure::topic, UserMeasure::hybrid}) {
            const UserSimilarityIndex index(inst.train, m, &inst.personas);
            for (const auto u : inst.train.users()) {
                const auto row = index.scores_for(u);
                CHECK_FALSE(row[*inst.train.user_index(u)].defined);
                for (const auto v : inst.train.users()) {
                    if (u == v) continue;
                    SimilarityScore want;
                    switch (m) {
                        case UserMeasure::pearson: want = pearson_similarity(inst.train, u, v); break;
                        case UserMeasure::llr: want = llr_similarity(inst.train, u, v); break;
                        case UserMeasure::topic:
                            want = topic_similarity(inst.personas.at(u), inst.personas.at(v));
                            break;
                        case UserMeasure::hybrid: want = hybrid_similarity(inst.personas, inst.train, u, v); break;
                    }
                    const auto got = row[*inst.train.user_index(v)];
                    REQUIRE(got.defined == want.defined);
                    if (want.defined) CHECK(got.value == doctest::Approx(want.value).epsilon(1e-12));
                    // symmetric in its arguments
                    CHECK(index(v, u).defined == got.defined);
                    if (got.defined) CHECK(index(v, u).value == doctest::Approx(got.value).epsilon(1e-12));
                }
            }
        }
    }
}

TEST_CASE("item index matches the oracle, dense or not") {
    std::mt19937_64 rng(78);
    for (int t = 0; t < 10; ++t) {
        const auto inst = synthetic::random_instance(rng);
        const ItemSimilarityIndex dense(inst.train);
        const ItemSimilarityIndex sparse(inst.train, 0);
        CHECK(dense.dense());
        CHECK_FALSE(sparse.dense());
        const auto items = inst.train.items();
        for (std::size_t j = 0; j < items.size(); ++j) {
            const auto row = sparse.row(j);
            for (std::size_t i = 0; i < items.size(); ++i) {
                if (i == j) continue;
                const double want = naive::item_llr(inst.ratings, items[i], items[j]).value;
                CHECK(row[i] == doctest::Approx(want).epsilon(1e-12));
                CHECK(dense(i, j) == doctest::Approx(want).epsilon(1e-12));
            }
        }
    }
}
