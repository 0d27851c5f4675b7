#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "topiccf/config.hpp"
#include "topiccf/evaluate.hpp"
#include "topiccf/ingest.hpp"

namespace topiccf {

/// Pipeline stages. Each reads its inputs from disk, writes its artifacts
/// into `config.out` together with `config_<stage>.txt` (the effective
/// config), and logs progress to `log`. Reruns with the same config write
/// byte-identical artifacts.

struct SplitSummary {
    DatasetSummary train;
    DatasetSummary test;
    std::size_t duplicates = 0;
};

/// ratings -> train.csv, test.csv. Prints the dataset-properties table.
SplitSummary cmd_split(const RunConfig& config, std::ostream& log);

/// corpus -> theta.csv, phi.csv, topics.txt. Logs the corpus
/// log-likelihood every 100 sweeps.
void cmd_train(const RunConfig& config, std::ostream& log);

/// theta.csv + train.csv -> personas.csv. Returns the number of undefined
/// personas.
std::size_t cmd_personas(const RunConfig& config, std::ostream& log);

/// train.csv, test.csv (+ personas.csv) -> report.csv, recs_<algorithm>.csv,
/// report_meta.txt and, with per_user, per_user_<algorithm>.csv.
std::vector<EvalReport> cmd_evaluate(const RunConfig& config, std::ostream& log);

void print_summary_table(std::ostream& out, const SplitSummary& summary);

}  // namespace topiccf
