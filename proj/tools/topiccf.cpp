#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "topiccf/config.hpp"
#include "topiccf/error.hpp"
#include "topiccf/pipeline.hpp"

namespace {

struct Flag {
    const char* key;
    const char* help;
};

constexpr Flag kFlags[] = {
    {"ratings", "ratings file"},
    {"format", "ratings format: movielens_dat or csv"},
    {"corpus", "item documents: directory of <item_id>.txt or a TSV file"},
    {"stopwords", "stopword list, one token per line (default: built-in English list)"},
    {"out", "output directory for every artifact"},
    {"topics", "number of LDA topics"},
    {"alpha-sum", "Dirichlet concentration summed over topics"},
    {"beta", "topic-word smoothing"},
    {"iterations", "Gibbs sweeps"},
    {"lda-seed", "LDA sampler seed"},
    {"min-df", "minimum document frequency of a vocabulary word"},
    {"fraction", "share of each user's ratings used for training"},
    {"split-seed", "train/test split seed"},
    {"neighbors", "neighborhood size N"},
    {"like-threshold", "minimum rating counted as a like in total_weight"},
    {"max-k", "recommendations generated per user"},
    {"ks", "comma-separated cutoffs, e.g. 5,10,15"},
    {"relevance-threshold", "minimum test rating counted as relevant"},
    {"algorithms", "comma-separated: hybrid,topic_only,ubcf_pearson,ubcf_llr,ibcf_llr"},
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Topic-model assisted collaborative filtering: split, train, personas, evaluate"};
    app.require_subcommand(1);

    std::string config_path;
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option*> options;
    bool per_user = false;
    app.add_option("--config", config_path, "key=value config file; flags override it");
    for (const auto& f : kFlags) options[f.key] = app.add_option(std::string("--") + f.key, values[f.key], f.help);
    auto* per_user_flag = app.add_flag("--per-user", per_user, "also write per-user metric rows");

    auto* split = app.add_subcommand("split", "write deterministic per-user train/test splits");
    auto* train = app.add_subcommand("train", "fit LDA on the item corpus");
    auto* personas = app.add_subcommand("personas", "project training users into topic space");
    auto* evaluate = app.add_subcommand("evaluate", "run recommenders and write the precision/recall/F report");
    auto* run = app.add_subcommand("run", "split, train, personas and evaluate in sequence");
    for (auto* sub : {split, train, personas, evaluate, run}) sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        topiccf::RunConfig config;
        if (!config_path.empty()) config = topiccf::load_config(config_path);
        for (const auto& f : kFlags) {
            if (options[f.key]->count() > 0) topiccf::apply_setting(config, f.key, values[f.key]);
        }
        if (per_user_flag->count() > 0) config.per_user = per_user;
        topiccf::validate(config);

        auto& log = std::cout;
        if (split->parsed() || run->parsed()) topiccf::cmd_split(config, log);
        if (train->parsed() || run->parsed()) topiccf::cmd_train(config, log);
        if (personas->parsed() || run->parsed()) topiccf::cmd_personas(config, log);
        if (evaluate->parsed() || run->parsed()) {
            const auto reports = topiccf::cmd_evaluate(config, log);
            for (const auto& report : reports) {
                const auto& first = report.rows.front();
                std::cout << report.algorithm << " precision@" << first.k << "=" << first.precision << " recall@"
                          << first.k << "=" << first.recall << '\n';
            }
        }
    } catch (const topiccf::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
