#include "sfl/bench.hpp"

#include <atomic>
#include <cstdlib>
#include <map>
#include <ostream>
#include <thread>

#include "sfl/data_io.hpp"
#include "sfl/error.hpp"

namespace sfl {

std::vector<BenchConfig> standard_configs() {
  std::vector<BenchConfig> out;
  for (std::uint32_t nf : {1u, 2u, 3u}) {
    LearnConfig c;
    c.mode = Mode::Stream;
    c.heuristic = HeuristicKind::Sketch;
    c.n_futures = nf;
    out.push_back({"stream-sketch-nf" + std::to_string(nf), c});
  }
  for (int k : {0, 1}) {
    LearnConfig c;
    c.mode = Mode::Stream;
    c.heuristic = HeuristicKind::Alergia;
    c.k = k;
    out.push_back({"stream-alergia-k" + std::to_string(k), c});
  }
  LearnConfig batch;
  batch.mode = Mode::Batch;
  batch.heuristic = HeuristicKind::Alergia;
  batch.k = 2;
  out.push_back({"batch-alergia-k2", batch});
  return out;
}

std::optional<BenchConfig> find_config(const std::string& name) {
  for (auto& c : standard_configs()) {
    if (c.name == name) return c;
  }
  return std::nullopt;
}

std::optional<ScenarioFiles> locate_scenario(const std::filesystem::path& dir, int id) {
  const std::string stem = std::to_string(id) + ".pautomac";
  ScenarioFiles f{id, dir / (stem + ".train"), dir / (stem + ".test"), dir / (stem + "_solution.txt")};
  if (!std::filesystem::exists(f.train) || !std::filesystem::exists(f.test) || !std::filesystem::exists(f.solution)) {
    return std::nullopt;
  }
  return f;
}

PerplexityReport run_scenario(const ScenarioFiles& files, const BenchConfig& config) {
  const Dataset train = read_abbadingo_file(files.train);
  const Dataset test = read_abbadingo_file(files.test);
  const SolutionFile solution = read_solution_file(files.solution);
  if (test.alphabet_size > train.alphabet_size) {
    throw InputError("scenario " + std::to_string(files.id) + ": test alphabet larger than training alphabet");
  }

  LearnResult result = learn(train, config.learn);
  PerplexityReport r = evaluate_scenario(result.model, test, solution);
  r.scenario = std::to_string(files.id);
  r.mode = to_string(config.learn.mode);
  r.heuristic = to_string(config.learn.heuristic);
  r.params = config.learn.describe();
  r.wall_ms = result.wall_ms;
  r.stored_states = result.stats.peak_stored;
  if (config.learn.heuristic == HeuristicKind::Sketch) {
    r.sketch_bytes = result.stats.peak_stored * config.learn.n_futures * config.learn.cms.depth *
                     (config.learn.cms.width + 1) * sizeof(std::uint64_t);
  }
  return r;
}

BenchResult run_bench(const std::filesystem::path& dir, const std::vector<BenchConfig>& configs,
                      const std::vector<int>& scenarios, unsigned jobs, std::ostream& warnings) {
  BenchResult result;
  std::vector<ScenarioFiles> found;
  for (int id : scenarios) {
    if (auto f = locate_scenario(dir, id)) {
      found.push_back(*f);
    } else {
      result.missing.push_back(id);
      warnings << "warning: scenario " << id << " not found in " << dir.string() << ", skipped\n";
    }
  }

  const std::size_t total = found.size() * configs.size();
  std::vector<std::optional<PerplexityReport>> slots(total);
  std::vector<std::string> errors(total);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < total; i = next++) {
      try {
        slots[i] = run_scenario(found[i / configs.size()], configs[i % configs.size()]);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(total, 1))));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (std::size_t i = 0; i < total; ++i) {
    if (!errors[i].empty()) {
      warnings << "warning: scenario " << found[i / configs.size()].id << " config "
               << configs[i % configs.size()].name << " failed: " << errors[i] << '\n';
      continue;
    }
    result.rows.push_back(*slots[i]);
  }

  for (std::size_t c = 0; c < configs.size(); ++c) {
    BenchSummary s;
    s.config = configs[c].name;
    s.mode = to_string(configs[c].learn.mode);
    s.heuristic = to_string(configs[c].learn.heuristic);
    s.params = configs[c].learn.describe();
    for (std::size_t f = 0; f < found.size(); ++f) {
      const auto& slot = slots[f * configs.size() + c];
      if (!slot) continue;
      ++s.scenarios;
      s.mean_error += slot->error;
      s.total_wall_ms += slot->wall_ms;
    }
    if (s.scenarios > 0) s.mean_error /= static_cast<double>(s.scenarios);
    result.summaries.push_back(s);
  }
  return result;
}

void write_bench_csv(std::ostream& out, const BenchResult& result) {
  out << csv_header() << '\n';
  for (const auto& r : result.rows) out << csv_row(r) << '\n';
  // Summary rows carry the mean error and total wall time; per-scenario columns stay empty.
  for (const auto& s : result.summaries) {
    out << csv_quote("summary:" + s.config) << ',' << s.mode << ',' << s.heuristic << ',' << csv_quote(s.params)
        << ",,," << csv_format(s.mean_error) << ',' << csv_format(s.total_wall_ms) << ",,\n";
  }
}

unsigned default_jobs() {
  if (const char* env = std::getenv("SFL_JOBS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace sfl
