// sfl: learn probabilistic automata from sequence streams, score them by
// PAutomaC perplexity, and benchmark heuristics across scenarios.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "sfl/bench.hpp"
#include "sfl/error.hpp"
#include "sfl/evaluation.hpp"
#include "sfl/learner.hpp"
#include "sfl/model_io.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitInput = 3;
constexpr int kExitInternal = 4;

struct LearnArgs {
  std::string mode = "stream";
  std::string heuristic = "sketch";
  std::string train;
  bool from_stdin = false;
  sfl::LearnConfig config;
  std::string out;
  std::string dot;
  bool save_sketches = false;
  std::size_t queue = 1024;
};

struct EvalArgs {
  std::string model;
  std::string test;
  std::string solution;
  std::string scenario = "-";
};

struct ExportArgs {
  std::string model;
  std::string dot;
};

struct BenchArgs {
  std::string dir;
  std::string configs;
  std::string scenarios = "1-48";
  unsigned jobs = 0;
  std::string out;
};

std::vector<int> parse_scenarios(const std::string& spec) {
  std::vector<int> ids;
  std::stringstream ss(spec);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (part.empty()) continue;
    const auto dash = part.find('-');
    try {
      if (dash == std::string::npos) {
        ids.push_back(std::stoi(part));
      } else {
        const int lo = std::stoi(part.substr(0, dash));
        const int hi = std::stoi(part.substr(dash + 1));
        if (hi < lo) throw sfl::UsageError("empty scenario range " + part);
        for (int i = lo; i <= hi; ++i) ids.push_back(i);
      }
    } catch (const std::logic_error&) {
      throw sfl::UsageError("bad scenario list \"" + spec + "\"");
    }
  }
  return ids;
}

std::vector<sfl::BenchConfig> parse_configs(const std::string& spec) {
  if (spec.empty()) return sfl::standard_configs();
  std::vector<sfl::BenchConfig> out;
  std::stringstream ss(spec);
  std::string name;
  while (std::getline(ss, name, ',')) {
    auto c = sfl::find_config(name);
    if (!c) {
      std::string known;
      for (const auto& k : sfl::standard_configs()) known += " " + k.name;
      throw sfl::UsageError("unknown config \"" + name + "\"; known:" + known);
    }
    out.push_back(*c);
  }
  return out;
}

void print_stats(const sfl::LearnResult& r) {
  const auto& s = r.stats;
  std::cout << "stats: sequences=" << s.sequences << " red=" << s.red << " blue=" << s.blue << " white=" << s.white
            << " stored=" << s.stored << " peak_stored=" << s.peak_stored << " retired=" << s.retired
            << " sketch_bytes=" << s.sketch_bytes << " merges=" << s.merges << " phases=" << s.merge_phases
            << " wall_ms=" << static_cast<long long>(r.wall_ms) << '\n';
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw sfl::InputError("cannot open " + path + " for writing");
  out << text;
}

int run_learn(LearnArgs& a) {
  a.config.mode = a.mode == "batch" ? sfl::Mode::Batch : sfl::Mode::Stream;
  a.config.heuristic = a.heuristic == "alergia" ? sfl::HeuristicKind::Alergia : sfl::HeuristicKind::Sketch;
  a.config.validate();

  sfl::LearnResult result = [&] {
    if (a.config.mode == sfl::Mode::Stream) {
      if (a.from_stdin) {
        sfl::QueuedStreamSource source(std::make_unique<sfl::AbbadingoStreamSource>(std::cin), a.queue);
        return sfl::learn_stream(source, a.config);
      }
      auto source = sfl::AbbadingoStreamSource::open(a.train);
      return sfl::learn_stream(*source, a.config);
    }
    const sfl::Dataset data = a.from_stdin ? sfl::read_abbadingo(std::cin) : sfl::read_abbadingo_file(a.train);
    return sfl::learn(data, a.config);
  }();

  if (!a.out.empty()) sfl::save_model_file(a.out, result.model, a.save_sketches);
  if (!a.dot.empty()) write_text(a.dot, sfl::export_dot(result.model));
  print_stats(result);
  return 0;
}

int run_eval(const EvalArgs& a) {
  const sfl::Pdfa model = sfl::load_model_file(a.model);
  const sfl::Dataset test = sfl::read_abbadingo_file(a.test);
  const sfl::SolutionFile solution = sfl::read_solution_file(a.solution);
  sfl::PerplexityReport r = sfl::evaluate_scenario(model, test, solution);
  r.scenario = a.scenario;
  r.mode = "-";
  r.heuristic = "-";
  r.params = "model=" + a.model;
  r.stored_states = model.live_count();
  std::cout << sfl::csv_header() << '\n' << sfl::csv_row(r) << '\n';
  return 0;
}

int run_export(const ExportArgs& a) {
  const sfl::Pdfa model = sfl::load_model_file(a.model);
  const std::string dot = sfl::export_dot(model);
  if (a.dot.empty() || a.dot == "-") {
    std::cout << dot;
  } else {
    write_text(a.dot, dot);
  }
  return 0;
}

int run_bench_cmd(const BenchArgs& a) {
  const auto configs = parse_configs(a.configs);
  const auto scenarios = parse_scenarios(a.scenarios);
  if (!std::filesystem::is_directory(a.dir)) throw sfl::InputError("not a directory: " + a.dir);
  const unsigned jobs = a.jobs > 0 ? a.jobs : sfl::default_jobs();
  const auto result = sfl::run_bench(a.dir, configs, scenarios, jobs, std::cerr);
  if (a.out.empty() || a.out == "-") {
    sfl::write_bench_csv(std::cout, result);
  } else {
    std::ofstream out(a.out);
    if (!out) throw sfl::InputError("cannot open " + a.out + " for writing");
    sfl::write_bench_csv(out, result);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Learn probabilistic automata from sequence streams with count-min sketches"};
  app.require_subcommand(1);

  LearnArgs learn;
  auto* cmd_learn = app.add_subcommand("learn", "Learn a model from training sequences");
  cmd_learn->add_option("--mode", learn.mode, "stream or batch")->check(CLI::IsMember({"stream", "batch"}));
  cmd_learn->add_option("--heuristic", learn.heuristic, "sketch or alergia")->check(CLI::IsMember({"sketch", "alergia"}));
  auto* train_opt = cmd_learn->add_option("--train", learn.train, "Abbadingo training file");
  auto* stdin_opt = cmd_learn->add_flag("--stdin", learn.from_stdin, "Read sequences from standard input");
  train_opt->excludes(stdin_opt);
  cmd_learn->add_option("--alpha", learn.config.alpha, "Hoeffding significance")->capture_default_str();
  cmd_learn->add_option("--nfutures", learn.config.n_futures, "Sketches per state")->capture_default_str();
  cmd_learn->add_option("--k", learn.config.k, "Alergia k-tails depth")->capture_default_str();
  cmd_learn->add_option("--batchsize", learn.config.batch_size, "Sequences between merge phases")->capture_default_str();
  cmd_learn->add_option("--threshold", learn.config.threshold, "Evidence needed before a state turns blue")
      ->capture_default_str();
  cmd_learn->add_option("--cms-width", learn.config.cms.width, "Hashed sketch columns")->capture_default_str();
  cmd_learn->add_option("--cms-depth", learn.config.cms.depth, "Sketch rows")->capture_default_str();
  cmd_learn->add_option("--seed", learn.config.cms.seed, "Sketch hash seed")->capture_default_str();
  bool no_completion = false;
  cmd_learn->add_flag("--no-completion", no_completion,
                      "Stream mode: keep the white frontier as it is at end of stream");
  cmd_learn->add_option("--out", learn.out, "Model file to write");
  cmd_learn->add_option("--dot", learn.dot, "Graphviz file to write");
  cmd_learn->add_flag("--save-sketches", learn.save_sketches, "Keep per-state sketches in the model file");
  cmd_learn->add_option("--queue", learn.queue, "Bounded queue length for --stdin streaming")->capture_default_str();

  EvalArgs eval;
  auto* cmd_eval = app.add_subcommand("eval", "Score a model by perplexity against target probabilities");
  cmd_eval->add_option("--model", eval.model, "Model file")->required();
  cmd_eval->add_option("--test", eval.test, "Abbadingo test file")->required();
  cmd_eval->add_option("--solution", eval.solution, "Target probabilities")->required();
  cmd_eval->add_option("--scenario", eval.scenario, "Label for the scenario column");

  ExportArgs exp;
  auto* cmd_export = app.add_subcommand("export", "Render a model as Graphviz DOT");
  cmd_export->add_option("--model", exp.model, "Model file")->required();
  cmd_export->add_option("--dot", exp.dot, "Output path, '-' for stdout");

  BenchArgs bench;
  auto* cmd_bench = app.add_subcommand("bench", "Run configurations across PAutomaC scenarios, CSV to stdout");
  cmd_bench->add_option("--pautomac-dir", bench.dir, "Directory with <id>.pautomac.{train,test} and solutions")
      ->required();
  cmd_bench->add_option("--configs", bench.configs, "Comma-separated config names (default: all)");
  cmd_bench->add_option("--scenarios", bench.scenarios, "Scenario ids, e.g. 1-48 or 8,20,21")->capture_default_str();
  cmd_bench->add_option("--jobs", bench.jobs, "Worker threads (default: SFL_JOBS or core count)");
  cmd_bench->add_option("--out", bench.out, "CSV path, '-' for stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*cmd_learn) {
      if (learn.train.empty() && !learn.from_stdin) throw sfl::UsageError("learn needs --train PATH or --stdin");
      learn.config.complete_fringe = !no_completion;
      return run_learn(learn);
    }
    if (*cmd_eval) return run_eval(eval);
    if (*cmd_export) return run_export(exp);
    if (*cmd_bench) return run_bench_cmd(bench);
  } catch (const sfl::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  } catch (const sfl::InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const sfl::Error& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitUsage;
}
