#include "sfl/learner.hpp"

#include <chrono>
#include <sstream>

#include "sfl/error.hpp"
#include "sfl/merge_engine.hpp"

namespace sfl {

const char* to_string(Mode m) { return m == Mode::Stream ? "stream" : "batch"; }
const char* to_string(HeuristicKind h) { return h == HeuristicKind::Sketch ? "sketch" : "alergia"; }

void LearnConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw UsageError("--alpha must lie in (0, 1)");
  if (n_futures < 1) throw UsageError("--nfutures must be >= 1");
  if (k < 0) throw UsageError("--k must be >= 0");
  if (batch_size < 1) throw UsageError("--batchsize must be >= 1");
  if (threshold < 1) throw UsageError("--threshold must be >= 1");
  cms.validate();
  if (mode == Mode::Stream && heuristic == HeuristicKind::Alergia && k > 1) {
    throw UsageError("--k " + std::to_string(k) +
                     " is meaningless in stream mode: only one layer below the fringe is stored (use k <= 1)");
  }
}

std::string LearnConfig::describe() const {
  std::ostringstream out;
  out << "alpha=" << alpha;
  if (heuristic == HeuristicKind::Sketch) {
    out << " nfutures=" << n_futures << " cms=" << cms.width << 'x' << cms.depth << " seed=" << cms.seed;
  } else {
    out << " k=" << k;
  }
  if (mode == Mode::Stream) out << " b=" << batch_size << " t=" << threshold;
  if (mode == Mode::Stream && !complete_fringe) out << " completion=off";
  return out.str();
}

std::unique_ptr<Heuristic> make_heuristic(const LearnConfig& config) {
  if (config.heuristic == HeuristicKind::Sketch) {
    return std::make_unique<SketchHeuristic>(SketchHeuristicParams{config.alpha, config.n_futures});
  }
  return std::make_unique<AlergiaHeuristic>(AlergiaParams{config.alpha, config.k});
}

namespace {

StreamParams stream_params(const LearnConfig& config) {
  StreamParams p;
  p.batch_size = config.batch_size;
  p.threshold = config.threshold;
  p.complete_fringe = config.complete_fringe;
  if (config.heuristic == HeuristicKind::Sketch) {
    p.sketches = SketchShape{config.cms, config.n_futures};
  } else {
    p.sketches.reset();
  }
  return p;
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

LearnResult learn_stream(StreamSource& source, const LearnConfig& config) {
  config.validate();
  if (config.mode != Mode::Stream) throw UsageError("batch mode needs the whole dataset");
  const auto start = std::chrono::steady_clock::now();
  auto heuristic = make_heuristic(config);
  StatsRecord stats;
  Pdfa model = run_stream(source, stream_params(config), *heuristic, &stats);
  return LearnResult{std::move(model), stats, elapsed_ms(start)};
}

LearnResult learn(const Dataset& data, const LearnConfig& config) {
  config.validate();
  if (config.mode == Mode::Stream) {
    DatasetSource source(data);
    return learn_stream(source, config);
  }

  const auto start = std::chrono::steady_clock::now();
  auto heuristic = make_heuristic(config);
  std::optional<SketchShape> shape;
  if (config.heuristic == HeuristicKind::Sketch) shape = SketchShape{config.cms, config.n_futures};
  Pdfa h = build_apta(data, shape);
  const std::uint64_t apta_states = h.live_count();
  ScoreCache cache;
  const auto merges = merge_until_fixpoint(h, *heuristic, 0, &cache);
  h.freeze();

  StatsRecord stats = live_stats(h);
  stats.sequences = data.sequences.size();
  stats.peak_stored = apta_states;
  stats.merges = merges;
  stats.merge_phases = 1;
  return LearnResult{std::move(h), stats, elapsed_ms(start)};
}

}  // namespace sfl
