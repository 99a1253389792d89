#pragma once

#include <memory>
#include <string>

#include "sfl/alergia_heuristic.hpp"
#include "sfl/data_io.hpp"
#include "sfl/sketch_heuristic.hpp"
#include "sfl/stream_driver.hpp"

namespace sfl {

enum class Mode { Stream, Batch };
enum class HeuristicKind { Sketch, Alergia };

const char* to_string(Mode m);
const char* to_string(HeuristicKind h);

/// Everything needed to reproduce a learning run.
struct LearnConfig {
  Mode mode = Mode::Stream;
  HeuristicKind heuristic = HeuristicKind::Sketch;
  double alpha = 0.05;
  std::uint32_t n_futures = 2;
  int k = 1;
  std::uint64_t batch_size = 500;
  std::uint64_t threshold = 100;
  CmsConfig cms;
  bool complete_fringe = true;

  /// Throws UsageError on out-of-range values and on k >= 2 in stream mode.
  void validate() const;
  /// Heuristic-specific parameters as "key=value" pairs separated by spaces.
  std::string describe() const;
};

std::unique_ptr<Heuristic> make_heuristic(const LearnConfig& config);

struct LearnResult {
  Pdfa model;
  StatsRecord stats;
  double wall_ms = 0.0;
};

/// Streams `source` through the online learner (stream mode only).
LearnResult learn_stream(StreamSource& source, const LearnConfig& config);
/// Learns from a materialised dataset in either mode.
LearnResult learn(const Dataset& data, const LearnConfig& config);

}  // namespace sfl
