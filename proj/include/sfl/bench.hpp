#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sfl/evaluation.hpp"
#include "sfl/learner.hpp"

namespace sfl {

struct BenchConfig {
  std::string name;
  LearnConfig learn;
};

/// The configurations compared in the evaluation: stream sketching with 1-3
/// futures, stream Alergia with k = 0 and 1, and batch Alergia with k = 2.
std::vector<BenchConfig> standard_configs();
/// Looks a configuration up by name among standard_configs().
std::optional<BenchConfig> find_config(const std::string& name);

/// Paths of one PAutomaC problem: <id>.pautomac.train, <id>.pautomac.test,
/// <id>.pautomac_solution.txt.
struct ScenarioFiles {
  int id = 0;
  std::filesystem::path train;
  std::filesystem::path test;
  std::filesystem::path solution;
};

std::optional<ScenarioFiles> locate_scenario(const std::filesystem::path& dir, int id);

/// Learns on the training file and scores on the test/solution pair.
PerplexityReport run_scenario(const ScenarioFiles& files, const BenchConfig& config);

struct BenchSummary {
  std::string config;
  std::string mode;
  std::string heuristic;
  std::string params;
  std::size_t scenarios = 0;
  double mean_error = 0.0;
  double total_wall_ms = 0.0;
};

struct BenchResult {
  std::vector<PerplexityReport> rows;  // scenario-major, config order preserved
  std::vector<BenchSummary> summaries;
  std::vector<int> missing;
};

/// Runs every (scenario, config) pair on up to `jobs` worker threads.
/// Missing scenarios are reported on `warnings` and skipped.
BenchResult run_bench(const std::filesystem::path& dir, const std::vector<BenchConfig>& configs,
                      const std::vector<int>& scenarios, unsigned jobs, std::ostream& warnings);

/// Header, one row per (scenario, config), then one "summary:<config>" row per config
/// whose error column is the mean error and wall_ms the total wall time.
void write_bench_csv(std::ostream& out, const BenchResult& result);

/// Worker count: SFL_JOBS when set, else hardware concurrency.
unsigned default_jobs();

}  // namespace sfl
