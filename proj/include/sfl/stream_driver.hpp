#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "sfl/data_io.hpp"
#include "sfl/heuristic.hpp"
#include "sfl/merge_engine.hpp"
#include "sfl/pdfa.hpp"

namespace sfl {

struct StreamParams {
  std::uint64_t batch_size = 500;
  std::uint64_t threshold = 100;
  /// Sketch layout kept on every stored state; nullopt for exact-count heuristics.
  std::optional<SketchShape> sketches = SketchShape{};
  /// At end of stream, merge or promote every remaining white child of the
  /// red core regardless of `threshold`, then point transitions that never
  /// got a target at the root's transition on the same symbol.
  bool complete_fringe = true;

  void validate() const;
};

struct StatsRecord {
  std::uint64_t red = 0;
  std::uint64_t blue = 0;
  std::uint64_t white = 0;
  std::uint64_t retired = 0;
  std::uint64_t stored = 0;
  std::uint64_t sketch_bytes = 0;
  std::uint64_t sequences = 0;
  std::uint64_t peak_stored = 0;
  std::uint64_t merges = 0;
  std::uint64_t merge_phases = 0;
};

/// Color and memory counts of `h`; `sequences` is filled in by the caller.
StatsRecord live_stats(const Pdfa& h);

/// Every stored state is Red, a Blue child of a Red state with size >= t, or a
/// White child of a Red or Blue state. Returns a description of the first
/// violation, or nullopt.
std::optional<std::string> frontier_violation(const Pdfa& h, std::uint64_t threshold);

/// stored <= reds * (1 + |alphabet|) + blues * |alphabet| + 1.
bool within_memory_bound(const Pdfa& h);

/// Online learner: ingests sequences one at a time and keeps only the red
/// core, the blue fringe, and one layer of white states.
class StreamLearner {
 public:
  StreamLearner(std::uint32_t alphabet_size, StreamParams params, const Heuristic& heuristic);

  /// One structural pass of `x`; does not trigger merging.
  void ingest(std::span<const Symbol> x);
  /// ingest() plus a merge phase every batch_size sequences.
  void push(std::span<const Symbol> x);
  /// Merges until no merge or promotion is possible; returns the merge count.
  std::size_t merge_phase();
  /// Final merge phase (with fringe completion when enabled); freezes and
  /// returns the model.
  Pdfa finish();

  const Pdfa& hypothesis() const { return h_; }
  const StreamParams& params() const { return params_; }
  StatsRecord stats() const;

 private:
  void maybe_mark_blue(StateId q);
  void complete_fringe();

  StreamParams params_;
  const Heuristic& heuristic_;
  Pdfa h_;
  ScoreCache cache_;
  std::uint64_t since_merge_ = 0;
  std::uint64_t sequences_ = 0;
  std::uint64_t peak_stored_ = 1;
  std::uint64_t merges_ = 0;
  std::uint64_t phases_ = 0;
};

/// Streams every sequence of `source` through a StreamLearner.
Pdfa run_stream(StreamSource& source, const StreamParams& params, const Heuristic& heuristic,
                StatsRecord* stats = nullptr);

}  // namespace sfl
