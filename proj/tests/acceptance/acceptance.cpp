// Acceptance report: one PASS/FAIL/SKIPPED line per criterion.
//
//   acceptance              run every criterion
//   acceptance -c 3         run one criterion (exit status reflects it alone;
//                           77 when it was skipped)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "naive.hpp"
#include "synthetic.hpp"
#include "topiccf/config.hpp"
#include "topiccf/evaluate.hpp"
#include "topiccf/lda.hpp"
#include "topiccf/persona.hpp"
#include "topiccf/pipeline.hpp"
#include "topiccf/recommend.hpp"
#include "topiccf/similarity.hpp"

namespace fs = std::filesystem;
using namespace topiccf;

namespace {

// Tolerances and budgets.
constexpr double kSimilarityTolerance = 1e-9;
constexpr int kOracleInstances = 50;
constexpr double kC1Budget = 5.0;
constexpr double kC2Budget = 10.0;
constexpr double kC3Budget = 30.0;
constexpr double kC3MassThreshold = 0.80;
constexpr double kC3ConsistencyThreshold = 0.95;
constexpr double kC4Budget = 30.0;
constexpr double kC4TopicFloor = 0.6;
constexpr double kC4PearsonCeiling = 0.1;
constexpr double kC5Budget = 120.0;
constexpr int kC5DiagnosticSeeds = 20;
constexpr double kC6IntegerTolerance = 1e-9;
constexpr double kC6AvgTolerance = 0.5;
constexpr double kC8HybridFloor = 0.20;
constexpr double kC8Ratio = 3.0;

enum class Status { pass, fail, skipped };
constexpr int kSkipExitCode = 77;

struct Outcome {
    Status status = Status::pass;
    std::string detail;
};

struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
};

std::string fmt(double x, int digits = 4) {
    std::ostringstream s;
    s.precision(digits);
    s << std::fixed << x;
    return s.str();
}

class Timer {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

bool close(const SimilarityScore& got, const naive::Score& want) {
    if (got.defined != want.defined) return false;
    return !got.defined || std::abs(got.value - want.value) <= kSimilarityTolerance;
}

bool same_list(const RecommendationList& got, const std::vector<naive::Rec>& want) {
    if (got.items.size() != want.size()) return false;
    for (std::size_t i = 0; i < want.size(); ++i) {
        if (got.items[i].item != want[i].item) return false;
    }
    return true;
}

// 1 ------------------------------------------------------------------------

Outcome similarity_oracle() {
    Timer timer;
    std::mt19937_64 rng(20240101);
    std::size_t compared = 0;
    std::size_t mismatches = 0;
    std::string first_mismatch;
    auto check = [&](bool ok, const std::string& what) {
        ++compared;
        if (!ok && mismatches++ == 0) first_mismatch = what;
    };
    for (int t = 0; t < kOracleInstances; ++t) {
        const auto inst = synthetic::random_instance(rng);
        const UserSimilarityIndex pearson(inst.train, UserMeasure::pearson);
        const UserSimilarityIndex llr(inst.train, UserMeasure::llr);
        const UserSimilarityIndex topic(inst.train, UserMeasure::topic, &inst.personas);
        const UserSimilarityIndex hybrid(inst.train, UserMeasure::hybrid, &inst.personas);
        for (const auto u : inst.train.users()) {
            for (const auto v : inst.train.users()) {
                if (u == v) continue;
                const std::string at = " at instance " + std::to_string(t);
                const auto p_want = naive::pearson(inst.ratings, u, v);
                check(close(pearson_similarity(inst.train, u, v), p_want), "pearson" + at);
                check(close(pearson(u, v), p_want), "pearson index" + at);
                const auto l_want = naive::llr(inst.ratings, u, v);
                check(close(llr_similarity(inst.train, u, v), l_want), "llr" + at);
                check(close(llr(u, v), l_want), "llr index" + at);
                const auto t_want = naive::topic(inst.naive_personas, u, v);
                check(close(topic_similarity(inst.personas.at(u), inst.personas.at(v)), t_want), "topic" + at);
                check(close(topic(u, v), t_want), "topic index" + at);
                const auto h_want = naive::hybrid(inst.ratings, inst.naive_personas, u, v);
                check(close(hybrid_similarity(inst.personas, inst.train, u, v), h_want), "hybrid" + at);
                check(close(hybrid(u, v), h_want), "hybrid index" + at);
                const auto& p = inst.naive_personas.at(u);
                const auto& q = inst.naive_personas.at(v);
                if (!p.empty() && !q.empty()) {
                    check(std::abs(symmetric_kl(p, q) - naive::symmetric_kl(p, q)) <= kSimilarityTolerance,
                          "symmetric_kl" + at);
                }
            }
        }
        for (const auto i : inst.train.items()) {
            for (const auto j : inst.train.items()) {
                if (i == j) continue;
                check(close(item_llr_similarity(inst.train, i, j), naive::item_llr(inst.ratings, i, j)),
                      "item llr at instance " + std::to_string(t));
            }
        }
    }
    const double secs = timer.seconds();
    Outcome out;
    out.detail = std::to_string(compared) + " comparisons, " + std::to_string(mismatches) + " mismatches, " +
                 fmt(secs, 2) + " s";
    if (mismatches > 0) out.detail += "; first: " + first_mismatch;
    if (mismatches > 0 || secs >= kC1Budget) out.status = Status::fail;
    return out;
}

// 2 ------------------------------------------------------------------------

Outcome algorithm_oracle() {
    Timer timer;
    std::mt19937_64 rng(20240202);
    std::size_t lists = 0;
    std::size_t mismatches = 0;
    std::string first_mismatch;
    for (int t = 0; t < kOracleInstances; ++t) {
        const auto inst = synthetic::random_instance(rng);
        const auto n = static_cast<std::size_t>(synthetic::uniform_int(rng, 1, 4));
        const auto k = static_cast<std::size_t>(synthetic::uniform_int(rng, 1, 5));
        const auto& r = inst.ratings;
        const auto& np = inst.naive_personas;
        auto check = [&](const RecommendationList& got, const std::vector<naive::Rec>& want, const char* what) {
            ++lists;
            if (!same_list(got, want) && mismatches++ == 0) {
                first_mismatch = std::string(what) + " at instance " + std::to_string(t) + " user " +
                                 std::to_string(got.user);
            }
        };
        for (const auto u : inst.train.users()) {
            const auto hybrid_nbrs =
                naive::neighborhood(r, u, [&](auto a, auto b) { return naive::hybrid(r, np, a, b); }, n);
            check(recommend_hybrid(u, inst.personas, inst.train, n, k),
                  naive::neighborhood_recs(r, u, hybrid_nbrs, k, kMinRating), "hybrid");

            const auto topic_nbrs = naive::neighborhood(r, u, [&](auto a, auto b) { return naive::topic(np, a, b); }, n);
            check(recommend_topic_only(u, inst.personas, inst.train, n, k),
                  naive::neighborhood_recs(r, u, topic_nbrs, k, kMinRating), "topic_only");

            const auto pearson_nbrs =
                naive::neighborhood(r, u, [&](auto a, auto b) { return naive::pearson(r, a, b); }, n);
            check(recommend_user_based(u, inst.train, UserMeasure::pearson, n, k),
                  naive::user_based_recs(r, u, pearson_nbrs, k), "ubcf_pearson");

            const auto llr_nbrs = naive::neighborhood(r, u, [&](auto a, auto b) { return naive::llr(r, a, b); }, n);
            check(recommend_user_based(u, inst.train, UserMeasure::llr, n, k),
                  naive::user_based_recs(r, u, llr_nbrs, k), "ubcf_llr");

            check(recommend_item_based(u, inst.train, k), naive::item_based_recs(r, u, k), "ibcf_llr");
        }
    }
    const double secs = timer.seconds();
    Outcome out;
    out.detail = std::to_string(lists) + " lists, " + std::to_string(mismatches) + " mismatches, " + fmt(secs, 2) + " s";
    if (mismatches > 0) out.detail += "; first: " + first_mismatch;
    if (mismatches > 0 || secs >= kC2Budget) out.status = Status::fail;
    return out;
}

// 3 ------------------------------------------------------------------------

Outcome lda_recovery() {
    Timer timer;
    constexpr std::size_t kLength = 50;
    constexpr std::uint32_t kSupport = 10;
    const auto data = synthetic::two_topic_corpus(3, 200, kLength, kSupport);
    LdaOptions options;
    options.num_topics = 2;
    options.alpha_sum = 2.0;
    options.beta = 0.01;
    options.iterations = 500;
    options.seed = 3;
    const auto model = train_lda(data.corpus, options);

    // topic_of[s]: the topic carrying most of support s's probability
    std::size_t topic_of[2];
    for (std::size_t s = 0; s < 2; ++s) {
        double best = -1.0;
        for (std::size_t t = 0; t < 2; ++t) {
            const auto phi = model.phi(t);
            double mass = 0.0;
            for (std::uint32_t w = 0; w < kSupport; ++w) mass += phi[s * kSupport + w];
            if (mass > best) {
                best = mass;
                topic_of[s] = t;
            }
        }
    }
    const bool bijective = topic_of[0] != topic_of[1];

    // The true dominant support of a document is the one that generated the
    // majority of its tokens.
    const double a = options.alpha_sum / 2.0;
    double mass_sum = 0.0;
    double optimum_sum = 0.0;
    std::size_t consistent = 0;
    for (std::size_t d = 0; d < data.corpus.num_docs(); ++d) {
        const std::size_t in_a = data.tokens_in_a[d];
        const std::size_t dominant = 2 * in_a >= kLength ? 0 : 1;
        const auto theta = model.theta(d);
        const double mass = theta[topic_of[dominant]];
        mass_sum += mass;
        consistent += bijective && mass >= theta[topic_of[1 - dominant]];
        const double majority = static_cast<double>(std::max(in_a, kLength - in_a));
        optimum_sum += (majority + a) / (static_cast<double>(kLength) + options.alpha_sum);
    }
    const double docs = static_cast<double>(data.corpus.num_docs());
    const double mean_mass = mass_sum / docs;
    const double consistency = static_cast<double>(consistent) / docs;
    const double secs = timer.seconds();

    Outcome out;
    out.detail = "mean dominant mass " + fmt(mean_mass) + " (need >= " + fmt(kC3MassThreshold, 2) +
                 "; exact-recovery optimum for this corpus " + fmt(optimum_sum / docs) + "), consistency " +
                 fmt(consistency) + " (need >= " + fmt(kC3ConsistencyThreshold, 2) + "), " + fmt(secs, 2) + " s";
    if (mean_mass < kC3MassThreshold || consistency < kC3ConsistencyThreshold || secs >= kC3Budget) {
        out.status = Status::fail;
    }
    return out;
}

// shared by 4 and 5 ----------------------------------------------------------

struct BenchResult {
    std::map<std::string, double> precision_at_5;
    std::vector<EvalReport> reports;
    std::map<std::string, std::vector<UserEvalRow>> details;  // per algorithm
};

BenchResult run_benchmark(const synthetic::Benchmark& bench, std::size_t topics, double alpha_sum,
                          std::size_t iterations, std::size_t neighbors, std::span<const Algorithm> algorithms,
                          const EvalOptions& eval) {
    const auto encoded = build_vocabulary(bench.corpus, default_stopwords());
    LdaOptions lda;
    lda.num_topics = topics;
    lda.alpha_sum = alpha_sum;
    lda.iterations = iterations;
    lda.seed = 11;
    const auto model = train_lda(encoded.corpus, lda);
    const auto personas = build_all_personas(bench.train, item_profiles(model, encoded.corpus)).personas;

    BenchResult result;
    for (const auto algorithm : algorithms) {
        const auto rec = make_recommender(algorithm, bench.train, &personas, {neighbors, kMinRating});
        auto report = evaluate_sweep(
            to_string(algorithm), [&](UserId u, std::size_t k) { return rec->recommend(u, k); }, bench.test, eval,
            &result.details[to_string(algorithm)]);
        for (const auto& row : report.rows) {
            if (row.k == 5) result.precision_at_5[report.algorithm] = row.precision;
        }
        result.reports.push_back(std::move(report));
    }
    return result;
}

bool same_reports(const std::vector<EvalReport>& a, const std::vector<EvalReport>& b) {
    std::ostringstream x, y;
    write_report_csv(x, a);
    write_report_csv(y, b);
    return x.str() == y.str();
}

// 4 ------------------------------------------------------------------------

Outcome sparsity_advantage() {
    Timer timer;
    const auto bench = synthetic::sparsity_benchmark(4);
    // every target shares zero co-rated items with everybody
    std::size_t overlapping_targets = 0;
    for (const auto u : bench.test.users()) {
        for (const auto v : bench.train.users()) {
            if (u != v && pearson_similarity(bench.train, u, v).defined) {
                ++overlapping_targets;
                break;
            }
        }
    }
    constexpr Algorithm algorithms[] = {Algorithm::topic_only, Algorithm::ubcf_pearson};
    EvalOptions eval;
    eval.ks = {5};
    eval.max_k = 5;
    // the neighborhood is smaller than a cluster, as in any realistic setting
    constexpr std::size_t kNeighbors = 10;
    const auto first = run_benchmark(bench, 2, 2.0, 300, kNeighbors, algorithms, eval);
    const auto second = run_benchmark(synthetic::sparsity_benchmark(4), 2, 2.0, 300, kNeighbors, algorithms, eval);
    const double secs = timer.seconds();

    const double topic = first.precision_at_5.at("topic_only");
    const double pearson = first.precision_at_5.at("ubcf_pearson");
    const bool deterministic = same_reports(first.reports, second.reports);
    Outcome out;
    out.detail = "topic_only P@5 " + fmt(topic) + " (need >= " + fmt(kC4TopicFloor, 2) + "), ubcf_pearson P@5 " +
                 fmt(pearson) + " (need <= " + fmt(kC4PearsonCeiling, 2) + "), targets with a co-rated item " +
                 std::to_string(overlapping_targets) + ", rerun identical " + (deterministic ? "yes" : "no") + ", " +
                 fmt(secs, 2) + " s";
    if (topic < kC4TopicFloor || pearson > kC4PearsonCeiling || overlapping_targets > 0 || !deterministic ||
        secs >= kC4Budget) {
        out.status = Status::fail;
    }
    return out;
}

// 5 ------------------------------------------------------------------------

Outcome relative_ordering() {
    Timer timer;
    const auto bench = synthetic::clustered_benchmark(5);
    EvalOptions eval;
    eval.ks = {5};
    eval.max_k = 5;
    const auto result = run_benchmark(bench, 4, 2.0, 300, kDefaultNeighbors, kAllAlgorithms, eval);
    const double secs = timer.seconds();
    const auto& p = result.precision_at_5;
    const double hybrid = p.at("hybrid"), topic = p.at("topic_only"), llr = p.at("ubcf_llr"),
                 item = p.at("ibcf_llr"), pearson = p.at("ubcf_pearson");
    Outcome out;
    out.detail = "P@5 hybrid " + fmt(hybrid) + ", topic_only " + fmt(topic) + ", ubcf_llr " + fmt(llr) +
                 ", ibcf_llr " + fmt(item) + " (ubcf_pearson " + fmt(pearson) + "), " + fmt(secs, 2) + " s";
    if (!(hybrid >= topic && topic > llr && llr > item) || secs >= kC5Budget) out.status = Status::fail;

    // Diagnostic only: how often each pairwise ordering holds across other
    // benchmark seeds. The verdict above uses the fixed seed alone.
    int held[3] = {0, 0, 0};
    for (std::uint64_t seed = 101; seed < 101 + kC5DiagnosticSeeds; ++seed) {
        const auto r = run_benchmark(synthetic::clustered_benchmark(seed), 4, 2.0, 300, kDefaultNeighbors,
                                     kAllAlgorithms, eval)
                           .precision_at_5;
        held[0] += r.at("hybrid") >= r.at("topic_only");
        held[1] += r.at("topic_only") > r.at("ubcf_llr");
        held[2] += r.at("ubcf_llr") > r.at("ibcf_llr");
    }
    const std::string of = "/" + std::to_string(kC5DiagnosticSeeds);
    out.detail += "; over other seeds: hybrid>=topic_only " + std::to_string(held[0]) + of + ", topic_only>ubcf_llr " +
                  std::to_string(held[1]) + of + ", ubcf_llr>ibcf_llr " + std::to_string(held[2]) + of;
    return out;
}

// 6 ------------------------------------------------------------------------

bool near_integer(double x) { return std::abs(x - std::round(x)) <= kC6IntegerTolerance; }

Outcome metric_integrity() {
    const auto bench = synthetic::clustered_benchmark(6);
    EvalOptions eval;  // K = 5..75
    const auto result = run_benchmark(bench, 4, 2.0, 100, kDefaultNeighbors, kAllAlgorithms, eval);
    std::size_t rows = 0;
    std::size_t violations = 0;
    std::map<std::pair<std::string, UserId>, double> last_recall;
    for (const auto& [algorithm, details] : result.details) {
      for (const auto& row : details) {
        ++rows;
        const auto shown = static_cast<double>(std::min(row.k, row.list_size));
        if (!near_integer(row.precision * shown)) ++violations;
        if (!near_integer(row.recall * static_cast<double>(row.relevant_size))) ++violations;
        auto [it, inserted] = last_recall.try_emplace({algorithm, row.user}, row.recall);
        if (!inserted) {
            if (row.recall < it->second) ++violations;
            it->second = row.recall;
        }
      }
    }
    for (const auto& report : result.reports) {
        for (std::size_t i = 1; i < report.rows.size(); ++i) {
            if (report.rows[i].recall < report.rows[i - 1].recall) ++violations;
        }
    }
    Outcome out;
    out.detail = std::to_string(rows) + " per-user rows, " + std::to_string(violations) + " violations";
    if (violations > 0) out.status = Status::fail;

    const char* ml1m = std::getenv("TOPICCF_ML1M");
    if (ml1m == nullptr) {
        out.detail += "; Table 1 check SKIPPED (set TOPICCF_ML1M to ratings.dat)";
        return out;
    }
    RunConfig config;
    config.ratings = ml1m;
    config.out = (fs::temp_directory_path() / "topiccf_acceptance_c6").string();
    std::ostringstream log;
    const auto summary = cmd_split(config, log);
    const bool users_ok = summary.train.users == 6040 && summary.test.users == 6040;
    const bool avg_ok = std::abs(summary.train.avg_ratings_per_user - 132.48) <= kC6AvgTolerance &&
                        std::abs(summary.test.avg_ratings_per_user - 32.11) <= kC6AvgTolerance;
    out.detail += "; Table 1: users " + std::to_string(summary.train.users) + "/" +
                  std::to_string(summary.test.users) + ", avg " + fmt(summary.train.avg_ratings_per_user, 2) + "/" +
                  fmt(summary.test.avg_ratings_per_user, 2);
    if (!users_ok || !avg_ok) out.status = Status::fail;
    return out;
}

// 7 ------------------------------------------------------------------------

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string without_out_line(const std::string& text) {
    std::istringstream in(text);
    std::string line, kept;
    while (std::getline(in, line)) {
        if (line.rfind("out=", 0) != 0) kept += line + '\n';
    }
    return kept;
}

Outcome determinism() {
    Timer timer;
    const fs::path root = fs::temp_directory_path() / "topiccf_acceptance_c7";
    fs::remove_all(root);
    fs::create_directories(root);
    const auto bench = synthetic::clustered_benchmark(7, 4, 80, 160, 0.08, 0.8);
    std::vector<RatingRecord> all(bench.train.records().begin(), bench.train.records().end());
    all.insert(all.end(), bench.test.records().begin(), bench.test.records().end());
    save_ratings_csv(root / "ratings.csv", RatingDataset(all));
    {
        std::ofstream tsv(root / "corpus.tsv");
        for (const auto& [item, text] : bench.corpus.docs) tsv << item << '\t' << text << '\n';
    }

    std::vector<fs::path> outs;
    std::ostringstream log;
    for (int run = 0; run < 2; ++run) {
        RunConfig config;
        config.ratings = (root / "ratings.csv").string();
        config.format = RatingFormat::csv;
        config.corpus = (root / "corpus.tsv").string();
        config.out = (root / ("run" + std::to_string(run))).string();
        config.topics = 4;
        config.alpha_sum = 2.0;
        config.iterations = 100;
        config.per_user = true;
        // the second run uses a different worker count
        setenv("TOPICCF_THREADS", run == 0 ? "1" : "3", 1);
        cmd_split(config, log);
        cmd_train(config, log);
        cmd_personas(config, log);
        cmd_evaluate(config, log);
        outs.push_back(config.out);
    }
    unsetenv("TOPICCF_THREADS");

    std::size_t files = 0;
    std::vector<std::string> differing;
    for (const auto& entry : fs::directory_iterator(outs[0])) {
        const auto name = entry.path().filename();
        ++files;
        auto a = slurp(entry.path());
        auto b = slurp(outs[1] / name);
        if (name.string().rfind("config_", 0) == 0) {
            a = without_out_line(a);
            b = without_out_line(b);
        }
        if (a != b || !fs::exists(outs[1] / name)) differing.push_back(name.string());
    }
    const auto count = static_cast<std::size_t>(
        std::distance(fs::directory_iterator(outs[1]), fs::directory_iterator{}));
    Outcome out;
    out.detail = std::to_string(files) + " artifacts compared, " + std::to_string(differing.size()) +
                 " differ (config files compared without their out= line), " + fmt(timer.seconds(), 2) + " s";
    if (!differing.empty()) out.detail += "; first: " + differing.front();
    if (!differing.empty() || count != files || files == 0) out.status = Status::fail;
    fs::remove_all(root);
    return out;
}

// 8 ------------------------------------------------------------------------

Outcome full_scale() {
    const char* ratings = std::getenv("TOPICCF_ML1M");
    const char* corpus = std::getenv("TOPICCF_PLOTS");
    if (ratings == nullptr || corpus == nullptr) {
        return {Status::skipped, "set TOPICCF_ML1M (ratings.dat) and TOPICCF_PLOTS (plot corpus) to run"};
    }
    Timer timer;
    RunConfig config;
    config.ratings = ratings;
    config.corpus = corpus;
    config.out = (fs::temp_directory_path() / "topiccf_acceptance_c8").string();
    config.algorithms = {Algorithm::hybrid, Algorithm::ubcf_llr};
    std::ostringstream log;
    cmd_split(config, log);
    cmd_train(config, log);
    cmd_personas(config, log);
    const auto reports = cmd_evaluate(config, log);
    double hybrid = 0, llr = 0;
    for (const auto& r : reports) {
        for (const auto& row : r.rows) {
            if (row.k != 5) continue;
            (r.algorithm == "hybrid" ? hybrid : llr) = row.precision;
        }
    }
    Outcome out;
    out.detail = "hybrid P@5 " + fmt(hybrid) + ", ubcf_llr P@5 " + fmt(llr) + ", " + fmt(timer.seconds(), 0) + " s";
    if (hybrid < kC8HybridFloor || hybrid < kC8Ratio * llr || timer.seconds() >= 3600.0) out.status = Status::fail;
    return out;
}

const char* label(Status s) {
    switch (s) {
        case Status::pass:
            return "PASS";
        case Status::fail:
            return "FAIL";
        case Status::skipped:
            return "SKIPPED";
    }
    return "?";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria report"};
    int only = 0;
    app.add_option("-c,--criterion", only, "run a single criterion")->check(CLI::Range(1, 8));
    CLI11_PARSE(app, argc, argv);

    const std::vector<Criterion> criteria = {
        {1, "similarity oracle equivalence", similarity_oracle},
        {2, "recommender oracle equivalence", algorithm_oracle},
        {3, "LDA recovery", lda_recovery},
        {4, "sparsity advantage", sparsity_advantage},
        {5, "relative ordering at desk scale", relative_ordering},
        {6, "metric integrity", metric_integrity},
        {7, "determinism", determinism},
        {8, "full-scale check", full_scale},
    };
    int failures = 0;
    int skipped = 0;
    for (const auto& c : criteria) {
        if (only != 0 && c.id != only) continue;
        Outcome outcome;
        try {
            outcome = c.run();
        } catch (const std::exception& e) {
            outcome = {Status::fail, std::string("exception: ") + e.what()};
        }
        failures += outcome.status == Status::fail;
        skipped += outcome.status == Status::skipped;
        std::cout << "[" << label(outcome.status) << "] " << c.id << ". " << c.name << ": " << outcome.detail
                  << std::endl;
    }
    if (failures > 0) return 1;
    return only != 0 && skipped > 0 ? kSkipExitCode : 0;
}
