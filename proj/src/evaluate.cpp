#include "topiccf/evaluate.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <string>

#include "topiccf/error.hpp"
#include "topiccf/parallel.hpp"

namespace topiccf {

namespace {

std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

}  // namespace

PrecisionRecall precision_recall_at_k(std::span<const Recommendation> recs, const std::set<ItemId>& relevant) {
    if (relevant.empty()) throw RangeError("recall is undefined for an empty relevant set");
    PrecisionRecall out;
    for (const auto& r : recs) {
        if (relevant.contains(r.item)) ++out.hits;
    }
    const auto hits = static_cast<double>(out.hits);
    out.precision = recs.empty() ? 0.0 : hits / static_cast<double>(recs.size());
    out.recall = hits / static_cast<double>(relevant.size());
    return out;
}

double f_measure(double precision, double recall) {
    const double sum = precision + recall;
    return sum > 0.0 ? 2.0 * precision * recall / sum : 0.0;
}

std::vector<std::size_t> default_ks() {
    std::vector<std::size_t> ks;
    for (std::size_t k = 5; k <= 75; k += 5) ks.push_back(k);
    return ks;
}

EvalReport evaluate_sweep(const std::string& algorithm, const RecommendFn& recommend, const RatingDataset& test,
                          const EvalOptions& options, std::vector<UserEvalRow>* details) {
    if (options.ks.empty()) throw ConfigError("no K values to evaluate");
    for (std::size_t i = 0; i < options.ks.size(); ++i) {
        if (options.ks[i] < 1) throw ConfigError("K must be at least 1");
        if (i > 0 && options.ks[i] <= options.ks[i - 1]) throw ConfigError("K values must be strictly increasing");
    }
    if (options.max_k < options.ks.back()) throw ConfigError("max K is smaller than the largest K");

    const auto users = test.users();
    const std::size_t nk = options.ks.size();
    // per user: one row per K, or nothing when the user has no relevant items
    std::vector<std::vector<UserEvalRow>> per_user(users.size());
    std::vector<char> short_list(users.size(), 0);
    parallel_for(users.size(), [&](std::size_t u) {
        std::set<ItemId> relevant;
        for (const auto& r : test.ratings_at(u)) {
            if (r.rating >= options.relevance_threshold) relevant.insert(r.item);
        }
        if (relevant.empty()) return;
        const auto list = recommend(users[u], options.max_k);
        short_list[u] = list.items.size() < options.max_k;
        auto& rows = per_user[u];
        rows.reserve(nk);
        for (const auto k : options.ks) {
            const auto n = std::min(k, list.items.size());
            const auto pr = precision_recall_at_k(std::span(list.items).first(n), relevant);
            rows.push_back({users[u], k, pr.precision, pr.recall, f_measure(pr.precision, pr.recall), pr.hits, n,
                            relevant.size()});
        }
    });

    EvalReport report{algorithm, {}};
    for (std::size_t i = 0; i < nk; ++i) {
        EvalRow row{options.ks[i], 0.0, 0.0, 0.0, 0};
        for (const auto& rows : per_user) {
            if (rows.empty()) continue;
            row.precision += rows[i].precision;
            row.recall += rows[i].recall;
            row.f_measure += rows[i].f_measure;
            ++row.users;
        }
        if (row.users > 0) {
            const auto n = static_cast<double>(row.users);
            row.precision /= n;
            row.recall /= n;
            row.f_measure /= n;
        }
        report.rows.push_back(row);
    }
    report.short_list_users = static_cast<std::size_t>(std::count(short_list.begin(), short_list.end(), 1));
    if (details) {
        for (auto& rows : per_user) details->insert(details->end(), rows.begin(), rows.end());
    }
    return report;
}

void write_report_csv(std::ostream& out, std::span<const EvalReport> reports) {
    out << "algorithm,K,precision,recall,f_measure,users\n";
    for (const auto& report : reports) {
        for (const auto& row : report.rows) {
            out << report.algorithm << ',' << row.k << ',' << fixed6(row.precision) << ',' << fixed6(row.recall)
                << ',' << fixed6(row.f_measure) << ',' << row.users << '\n';
        }
    }
}

void write_user_details_csv(std::ostream& out, std::span<const UserEvalRow> rows) {
    out << "user_id,K,precision,recall,f\n";
    for (const auto& r : rows) {
        out << r.user << ',' << r.k << ',' << fixed6(r.precision) << ',' << fixed6(r.recall) << ','
            << fixed6(r.f_measure) << '\n';
    }
}

}  // namespace topiccf
