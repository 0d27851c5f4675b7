#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "topiccf/ingest.hpp"
#include "topiccf/recommend.hpp"

namespace topiccf {

struct PrecisionRecall {
    double precision = 0.0;
    double recall = 0.0;
    std::size_t hits = 0;
};

/// `recs` is the list already truncated to K. Precision is hits over the
/// list length (0 for an empty list); recall is hits over |relevant|, which
/// must be non-empty.
PrecisionRecall precision_recall_at_k(std::span<const Recommendation> recs, const std::set<ItemId>& relevant);

/// Harmonic mean; 0 when both inputs are 0.
double f_measure(double precision, double recall);

struct EvalRow {
    std::size_t k = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f_measure = 0.0;
    std::size_t users = 0;
};

struct EvalReport {
    std::string algorithm;
    std::vector<EvalRow> rows;
    /// Evaluated users whose list was shorter than max K. They stay in every
    /// average with their short lists.
    std::size_t short_list_users = 0;
};

struct UserEvalRow {
    UserId user = 0;
    std::size_t k = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f_measure = 0.0;
    std::size_t hits = 0;
    std::size_t list_size = 0;
    std::size_t relevant_size = 0;
};

std::vector<std::size_t> default_ks();  // 5, 10, ..., 75

struct EvalOptions {
    std::vector<std::size_t> ks = default_ks();
    std::size_t max_k = kDefaultMaxK;
    /// Test ratings below this are not relevant. The default counts every
    /// test item.
    double relevance_threshold = 0.0;
};

using RecommendFn = std::function<RecommendationList(UserId, std::size_t)>;

/// Requests max_k recommendations once per test user, truncates per K and
/// averages per-user metrics (F included) over users with a non-empty
/// relevant set. Users who get fewer than K items keep their short lists.
/// `details`, when given, receives one row per (user, K).
EvalReport evaluate_sweep(const std::string& algorithm, const RecommendFn& recommend, const RatingDataset& test,
                          const EvalOptions& options, std::vector<UserEvalRow>* details = nullptr);

/// `algorithm,K,precision,recall,f_measure,users` with six decimals, in the
/// order given.
void write_report_csv(std::ostream& out, std::span<const EvalReport> reports);
void write_user_details_csv(std::ostream& out, std::span<const UserEvalRow> rows);

}  // namespace topiccf
