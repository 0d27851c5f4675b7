#include "topiccf/pipeline.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "topiccf/error.hpp"
#include "topiccf/lda.hpp"
#include "topiccf/parallel.hpp"
#include "topiccf/persona.hpp"
#include "topiccf/recommend.hpp"

namespace topiccf {

namespace {

namespace fs = std::filesystem;

fs::path out_dir(const RunConfig& config) {
    const fs::path dir(config.out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
    return dir;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << content;
    if (!out) throw IoError("write failed: " + path.string());
}

template <typename Writer>
void write_with(const fs::path& path, Writer&& writer) {
    std::ostringstream buf;
    writer(buf);
    write_file(path, buf.str());
}

void save_config(const fs::path& dir, const std::string& stage, const RunConfig& config) {
    write_with(dir / ("config_" + stage + ".txt"), [&](std::ostream& o) { write_config(o, config); });
}

void require(const fs::path& path, const std::string& what) {
    if (!fs::exists(path)) throw IoError("missing " + what + ": " + path.string());
}

}  // namespace

void print_summary_table(std::ostream& out, const SplitSummary& s) {
    char line[160];
    out << "Dataset    Users    Items    Max.RatingsPU    Avg.RatingsPU\n";
    for (const auto& [name, d] : {std::pair{"Training", s.train}, std::pair{"Testing", s.test}}) {
        std::snprintf(line, sizeof line, "%-10s %-8zu %-8zu %-16zu %.2f\n", name, d.users, d.items,
                      d.max_ratings_per_user, d.avg_ratings_per_user);
        out << line;
    }
}

SplitSummary cmd_split(const RunConfig& config, std::ostream& log) {
    validate(config);
    if (config.ratings.empty()) throw ConfigError("no ratings file given");
    const auto dir = out_dir(config);
    const auto ds = load_ratings(config.ratings, config.format);
    if (ds.duplicates_dropped() > 0) {
        log << "warning: " << ds.duplicates_dropped() << " duplicate (user, item) ratings; kept the last\n";
    }
    const auto split = split_train_test(ds, config.fraction, config.split_seed);
    save_ratings_csv(dir / "train.csv", split.train);
    save_ratings_csv(dir / "test.csv", split.test);
    save_config(dir, "split", config);
    SplitSummary summary{summarize(split.train), summarize(split.test), ds.duplicates_dropped()};
    print_summary_table(log, summary);
    return summary;
}

void cmd_train(const RunConfig& config, std::ostream& log) {
    validate(config);
    if (config.corpus.empty()) throw ConfigError("no corpus given");
    const auto dir = out_dir(config);
    const auto corpus = load_corpus(config.corpus);
    if (corpus.empty()) throw ConfigError("corpus " + config.corpus + " has no documents");
    const auto stopwords = config.stopwords.empty() ? default_stopwords() : load_stopwords(config.stopwords);
    const auto encoded = build_vocabulary(corpus, stopwords, config.min_df);
    log << "corpus: " << encoded.corpus.num_docs() << " documents, " << encoded.corpus.num_tokens() << " tokens, "
        << encoded.vocabulary.size() << " word types\n";

    LdaOptions options;
    options.num_topics = config.topics;
    options.alpha_sum = config.alpha_sum;
    options.beta = config.beta;
    options.iterations = config.iterations;
    options.seed = config.lda_seed;
    options.log_every = 100;
    options.on_progress = [&](std::size_t sweep, double ll) {
        log << "sweep " << sweep << " log-likelihood " << ll << '\n';
    };
    const auto model = train_lda(encoded.corpus, options);

    write_with(dir / "theta.csv", [&](std::ostream& o) { write_theta_csv(o, model, encoded.corpus); });
    write_with(dir / "phi.csv", [&](std::ostream& o) { write_phi_csv(o, model, encoded.vocabulary); });
    write_with(dir / "topics.txt", [&](std::ostream& o) { write_topics_txt(o, model, encoded.vocabulary, 20); });
    save_config(dir, "train", config);
}

std::size_t cmd_personas(const RunConfig& config, std::ostream& log) {
    validate(config);
    const auto dir = out_dir(config);
    require(dir / "theta.csv", "topic profiles (run train first)");
    require(dir / "train.csv", "training split (run split first)");
    const auto profiles = load_theta_csv(dir / "theta.csv");
    const auto train = load_ratings(dir / "train.csv", RatingFormat::csv);
    const auto built = build_all_personas(train, profiles);
    write_with(dir / "personas.csv", [&](std::ostream& o) { write_personas_csv(o, built.personas); });
    save_config(dir, "personas", config);
    log << "personas: " << built.personas.size() << " users, " << built.undefined << " undefined\n";
    return built.undefined;
}

std::vector<EvalReport> cmd_evaluate(const RunConfig& config, std::ostream& log) {
    validate(config);
    const auto dir = out_dir(config);
    require(dir / "train.csv", "training split (run split first)");
    require(dir / "test.csv", "test split (run split first)");
    const auto train = load_ratings(dir / "train.csv", RatingFormat::csv);
    const auto test = load_ratings(dir / "test.csv", RatingFormat::csv);

    bool personas_needed = false;
    for (const auto a : config.algorithms) personas_needed = personas_needed || needs_personas(a);
    PersonaTable personas;
    if (personas_needed) {
        require(dir / "personas.csv", "personas (run personas first)");
        personas = load_personas_csv(dir / "personas.csv");
    }

    EvalOptions eval;
    eval.ks = config.ks;
    eval.max_k = config.max_k;
    eval.relevance_threshold = config.relevance_threshold;
    const RecommenderOptions rec_options{config.neighbors, config.like_threshold};

    std::vector<EvalReport> reports;
    std::ostringstream meta;
    for (const auto algorithm : config.algorithms) {
        const auto label = to_string(algorithm);
        log << "evaluating " << label << " over " << test.num_users() << " test users\n";
        const auto recommender = make_recommender(algorithm, train, &personas, rec_options);

        const auto users = test.users();
        std::vector<RecommendationList> lists(users.size());
        parallel_for(users.size(), [&](std::size_t u) { lists[u] = recommender->recommend(users[u], config.max_k); });
        const auto lookup = [&](UserId user, std::size_t) { return lists[*test.user_index(user)]; };

        std::vector<UserEvalRow> details;
        reports.push_back(evaluate_sweep(label, lookup, test, eval, config.per_user ? &details : nullptr));
        write_with(dir / ("recs_" + label + ".csv"), [&](std::ostream& o) { write_recommendations_csv(o, lists); });
        if (config.per_user) {
            write_with(dir / ("per_user_" + label + ".csv"), [&](std::ostream& o) { write_user_details_csv(o, details); });
        }
        const auto& first = reports.back().rows.front();
        meta << label << ": users_evaluated=" << first.users << " short_list_users=" << reports.back().short_list_users
             << " (short lists are averaged with precision over their actual length)\n";
    }
    write_with(dir / "report.csv", [&](std::ostream& o) { write_report_csv(o, reports); });
    write_file(dir / "report_meta.txt", meta.str());
    save_config(dir, "evaluate", config);
    return reports;
}

}  // namespace topiccf
