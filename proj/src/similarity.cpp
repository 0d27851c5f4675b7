#include "topiccf/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "topiccf/error.hpp"

namespace topiccf {

namespace {

// sum_t (p_t - q_t)(ln p_t - ln q_t) == KL(p||q) + KL(q||p)
double kl_from_logs(std::span<const double> p, std::span<const double> log_p, std::span<const double> q,
                    std::span<const double> log_q) {
    double total = 0.0;
    for (std::size_t t = 0; t < p.size(); ++t) total += (p[t] - q[t]) * (log_p[t] - log_q[t]);
    return std::max(0.0, total);
}

std::vector<double> logs_of(std::span<const double> p) {
    std::vector<double> out(p.size());
    std::transform(p.begin(), p.end(), out.begin(), [](double x) { return std::log(x); });
    return out;
}

struct PearsonSums {
    std::size_t n = 0;
    double sx = 0.0, sy = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
    double min_x = std::numeric_limits<double>::infinity();
    double max_x = -std::numeric_limits<double>::infinity();
    double min_y = std::numeric_limits<double>::infinity();
    double max_y = -std::numeric_limits<double>::infinity();

    void add(double x, double y) {
        ++n;
        sx += x;
        sy += y;
        sxx += x * x;
        syy += y * y;
        sxy += x * y;
        min_x = std::min(min_x, x);
        max_x = std::max(max_x, x);
        min_y = std::min(min_y, y);
        max_y = std::max(max_y, y);
    }

    SimilarityScore finish() const {
        // a constant side has zero norm after centering; min == max detects it exactly
        if (n < 2 || min_x == max_x || min_y == max_y) return SimilarityScore::undefined();
        const double dn = static_cast<double>(n);
        const double cov = sxy - sx * sy / dn;
        const double vx = sxx - sx * sx / dn;
        const double vy = syy - sy * sy / dn;
        const double denom = std::sqrt(vx * vy);
        if (!(denom > 0.0)) return SimilarityScore::undefined();
        return SimilarityScore::of(std::clamp(cov / denom, -1.0, 1.0));
    }
};

double cell(double k, double n, double row, double col) {
    if (k == 0.0) return 0.0;
    return k * std::log(k * n / (row * col));
}

template <typename Row>
std::uint64_t overlap(Row a, Row b, auto key) {
    std::uint64_t n = 0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (key(*ia) < key(*ib)) {
            ++ia;
        } else if (key(*ib) < key(*ia)) {
            ++ib;
        } else {
            ++n;
            ++ia;
            ++ib;
        }
    }
    return n;
}

}  // namespace

std::vector<double> floor_and_normalize(std::span<const double> p) {
    std::vector<double> out(p.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        out[i] = std::max(p[i], kKlFloor);
        sum += out[i];
    }
    for (auto& x : out) x /= sum;
    return out;
}

double symmetric_kl(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) {
        throw RangeError("distribution dimensions differ: " + std::to_string(p.size()) + " vs " +
                         std::to_string(q.size()));
    }
    const auto fp = floor_and_normalize(p);
    const auto fq = floor_and_normalize(q);
    return kl_from_logs(fp, logs_of(fp), fq, logs_of(fq));
}

SimilarityScore topic_similarity(const UserPersona& u, const UserPersona& v) {
    if (!u.defined() || !v.defined()) return SimilarityScore::undefined();
    return SimilarityScore::of(std::exp(-symmetric_kl(u.distribution, v.distribution)));
}

SimilarityScore pearson_similarity(const RatingDataset& train, UserId u, UserId v) {
    const auto a = train.ratings_of(u);
    const auto b = train.ratings_of(v);
    PearsonSums sums;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (ia->item < ib->item) {
            ++ia;
        } else if (ib->item < ia->item) {
            ++ib;
        } else {
            sums.add(ia->rating, ib->rating);
            ++ia;
            ++ib;
        }
    }
    return sums.finish();
}

double g_squared(std::uint64_t k11, std::uint64_t k12, std::uint64_t k21, std::uint64_t k22) {
    const double a = static_cast<double>(k11);
    const double b = static_cast<double>(k12);
    const double c = static_cast<double>(k21);
    const double d = static_cast<double>(k22);
    const double n = a + b + c + d;
    if (n == 0.0) return 0.0;
    const double row1 = a + b, row2 = c + d;
    const double col1 = a + c, col2 = b + d;
    // off-diagonal terms are added together first so swapping the two sets
    // gives a bit-identical result
    const double g = 2.0 * (cell(a, n, row1, col1) + (cell(b, n, row1, col2) + cell(c, n, row2, col1)) +
                            cell(d, n, row2, col2));
    return std::max(0.0, g);
}

double llr_from_overlap(std::uint64_t overlap, std::uint64_t size_a, std::uint64_t size_b, std::uint64_t universe) {
    if (overlap > size_a || overlap > size_b || size_a + size_b - overlap > universe) {
        throw RangeError("inconsistent contingency counts");
    }
    const double g = g_squared(overlap, size_a - overlap, size_b - overlap, universe - size_a - size_b + overlap);
    return 1.0 - 1.0 / (1.0 + g);
}

SimilarityScore llr_similarity(const RatingDataset& train, UserId u, UserId v) {
    const auto a = train.ratings_of(u);
    const auto b = train.ratings_of(v);
    const auto k11 = overlap(a, b, [](const ItemRating& r) { return r.item; });
    return SimilarityScore::of(llr_from_overlap(k11, a.size(), b.size(), train.num_items()));
}

SimilarityScore item_llr_similarity(const RatingDataset& train, ItemId i, ItemId j) {
    const auto a = train.raters_of(i);
    const auto b = train.raters_of(j);
    const auto k11 = overlap(a, b, [](const UserRating& r) { return r.user; });
    return SimilarityScore::of(llr_from_overlap(k11, a.size(), b.size(), train.num_users()));
}

SimilarityScore hybrid_similarity(const PersonaTable& personas, const RatingDataset& train, UserId u, UserId v) {
    const auto llr = llr_similarity(train, u, v);
    const auto pu = personas.find(u);
    const auto pv = personas.find(v);
    if (pu == personas.end() || pv == personas.end()) return llr;
    const auto topic = topic_similarity(pu->second, pv->second);
    if (!topic.defined) return llr;
    return SimilarityScore::of(topic.value * llr.value);
}

UserSimilarityIndex::UserSimilarityIndex(const RatingDataset& train, UserMeasure measure,
                                         const PersonaTable* personas)
    : train_(&train), measure_(measure), personas_(personas) {
    const bool needs_personas = measure == UserMeasure::topic || measure == UserMeasure::hybrid;
    if (needs_personas && personas == nullptr) throw ConfigError("topic and hybrid similarity need personas");
    if (needs_personas) {
        prepared_.resize(train.num_users());
        for (std::size_t i = 0; i < train.num_users(); ++i) prepared_[i] = prepare(train.users()[i]);
    }
}

UserSimilarityIndex::Prepared UserSimilarityIndex::prepare(UserId user) const {
    Prepared p;
    const auto it = personas_->find(user);
    if (it == personas_->end() || !it->second.defined()) return p;
    p.floored = floor_and_normalize(it->second.distribution);
    p.logs = logs_of(p.floored);
    return p;
}

SimilarityScore UserSimilarityIndex::topic_term(const Prepared& a, const Prepared& b) const {
    if (a.floored.empty() || b.floored.empty()) return SimilarityScore::undefined();
    if (a.floored.size() != b.floored.size()) throw RangeError("persona dimensions differ");
    return SimilarityScore::of(std::exp(-kl_from_logs(a.floored, a.logs, b.floored, b.logs)));
}

std::vector<SimilarityScore> UserSimilarityIndex::scores_for(UserId user) const {
    const auto& train = *train_;
    const std::size_t n_users = train.num_users();
    std::vector<SimilarityScore> scores(n_users);
    const auto self = train.user_index(user);
    const auto items = train.ratings_of(user);

    if (measure_ == UserMeasure::pearson) {
        std::vector<PearsonSums> sums(n_users);
        for (const auto& r : items) {
            for (const auto& other : train.raters_of(r.item)) {
                sums[*train.user_index(other.user)].add(r.rating, other.rating);
            }
        }
        for (std::size_t v = 0; v < n_users; ++v) scores[v] = sums[v].finish();
    } else {
        std::vector<std::uint32_t> common;
        if (measure_ != UserMeasure::topic) {
            common.assign(n_users, 0);
            for (const auto& r : items) {
                for (const auto& other : train.raters_of(r.item)) ++common[*train.user_index(other.user)];
            }
        }
        Prepared own;
        const Prepared* mine = &own;
        if (measure_ != UserMeasure::llr) {
            if (self) {
                mine = &prepared_[*self];
            } else {
                own = prepare(user);
            }
        }
        for (std::size_t v = 0; v < n_users; ++v) {
            SimilarityScore llr;
            if (measure_ != UserMeasure::topic) {
                llr = SimilarityScore::of(
                    llr_from_overlap(common[v], items.size(), train.ratings_at(v).size(), train.num_items()));
            }
            switch (measure_) {
                case UserMeasure::llr:
                    scores[v] = llr;
                    break;
                case UserMeasure::topic:
                    scores[v] = topic_term(*mine, prepared_[v]);
                    break;
                case UserMeasure::hybrid: {
                    const auto topic = topic_term(*mine, prepared_[v]);
                    scores[v] = topic.defined ? SimilarityScore::of(topic.value * llr.value) : llr;
                    break;
                }
                case UserMeasure::pearson:
                    break;
            }
        }
    }
    if (self) scores[*self] = SimilarityScore::undefined();
    return scores;
}

SimilarityScore UserSimilarityIndex::operator()(UserId u, UserId v) const {
    switch (measure_) {
        case UserMeasure::pearson:
            return pearson_similarity(*train_, u, v);
        case UserMeasure::llr:
            return llr_similarity(*train_, u, v);
        case UserMeasure::topic: {
            const auto pu = personas_->find(u);
            const auto pv = personas_->find(v);
            if (pu == personas_->end() || pv == personas_->end()) return SimilarityScore::undefined();
            return topic_similarity(pu->second, pv->second);
        }
        case UserMeasure::hybrid:
            return hybrid_similarity(*personas_, *train_, u, v);
    }
    return SimilarityScore::undefined();
}

bool UserSimilarityIndex::uses_fallback(UserId u, UserId v) const {
    if (measure_ != UserMeasure::hybrid) return false;
    const auto pu = personas_->find(u);
    const auto pv = personas_->find(v);
    return pu == personas_->end() || pv == personas_->end() || !pu->second.defined() || !pv->second.defined();
}

ItemSimilarityIndex::ItemSimilarityIndex(const RatingDataset& train, std::size_t dense_limit)
    : train_(&train), n_items_(train.num_items()) {
    if (n_items_ == 0 || n_items_ > dense_limit) return;
    const std::size_t n = n_items_;
    std::vector<std::uint32_t> counts(n * n, 0);
    std::vector<std::size_t> idx;
    for (std::size_t u = 0; u < train.num_users(); ++u) {
        const auto row = train.ratings_at(u);
        idx.clear();
        for (const auto& r : row) idx.push_back(*train.item_index(r.item));
        for (std::size_t a = 0; a < idx.size(); ++a) {
            for (std::size_t b = a + 1; b < idx.size(); ++b) ++counts[idx[a] * n + idx[b]];
        }
    }
    matrix_.assign(n * n, 0.0);
    const std::uint64_t universe = train.num_users();
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint64_t size_i = train.raters_at(i).size();
        matrix_[i * n + i] = llr_from_overlap(size_i, size_i, size_i, universe);
        for (std::size_t j = i + 1; j < n; ++j) {
            const double s = llr_from_overlap(counts[i * n + j], size_i, train.raters_at(j).size(), universe);
            matrix_[i * n + j] = s;
            matrix_[j * n + i] = s;
        }
    }
}

std::vector<std::uint32_t> ItemSimilarityIndex::cooccurrence_row(std::size_t j) const {
    std::vector<std::uint32_t> counts(n_items_, 0);
    for (const auto& rater : train_->raters_at(j)) {
        for (const auto& r : train_->ratings_of(rater.user)) ++counts[*train_->item_index(r.item)];
    }
    return counts;
}

std::vector<double> ItemSimilarityIndex::row(std::size_t j) const {
    if (dense()) {
        const auto begin = matrix_.begin() + static_cast<std::ptrdiff_t>(j * n_items_);
        return std::vector<double>(begin, begin + static_cast<std::ptrdiff_t>(n_items_));
    }
    const auto counts = cooccurrence_row(j);
    const std::uint64_t universe = train_->num_users();
    const std::uint64_t size_j = train_->raters_at(j).size();
    std::vector<double> out(n_items_);
    for (std::size_t i = 0; i < n_items_; ++i) {
        out[i] = llr_from_overlap(counts[i], train_->raters_at(i).size(), size_j, universe);
    }
    return out;
}

double ItemSimilarityIndex::operator()(std::size_t i, std::size_t j) const {
    if (dense()) return matrix_[i * n_items_ + j];
    return item_llr_similarity(*train_, train_->items()[i], train_->items()[j]).value;
}

void write_similarity_dump(std::ostream& out, const RatingDataset& train, const PersonaTable& personas) {
    const UserSimilarityIndex topic(train, UserMeasure::topic, &personas);
    const UserSimilarityIndex llr(train, UserMeasure::llr);
    const UserSimilarityIndex hybrid(train, UserMeasure::hybrid, &personas);
    std::ostringstream buf;
    buf.precision(17);
    buf << "user_a,user_b,topic,llr,hybrid\n";
    const auto users = train.users();
    for (std::size_t a = 0; a < users.size(); ++a) {
        const auto t = topic.scores_for(users[a]);
        const auto l = llr.scores_for(users[a]);
        const auto h = hybrid.scores_for(users[a]);
        for (std::size_t b = a + 1; b < users.size(); ++b) {
            buf << users[a] << ',' << users[b] << ',';
            if (t[b].defined) buf << t[b].value;
            buf << ',' << l[b].value << ',' << h[b].value << '\n';
        }
    }
    out << buf.str();
}

}  // namespace topiccf
