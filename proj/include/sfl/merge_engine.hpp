#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <variant>
#include <vector>

#include "sfl/data_io.hpp"
#include "sfl/heuristic.hpp"
#include "sfl/pdfa.hpp"

namespace sfl {

struct MergeCandidate {
  StateId red;
  StateId blue;
  double score = 0.0;

  friend bool operator==(const MergeCandidate&, const MergeCandidate&) = default;
};

/// Log of the primitive mutations performed by one merge. Replaying it
/// backwards restores the hypothesis exactly; committing it frees the
/// retired states for good.
class MergeJournal {
 public:
  enum class Status { Empty, Applied, Undone, Committed };

  Status status() const { return status_; }
  std::size_t size() const { return entries_.size(); }
  /// States folded away by the merge (the blue state first).
  std::vector<StateId> retired_states() const;

  /// Reclaims the retired states. The merge can no longer be undone.
  void commit(Pdfa& h);

 private:
  friend void merge(Pdfa&, StateId, StateId, MergeJournal&, std::uint64_t);
  friend void undo(Pdfa&, MergeJournal&);
  friend void fold_into(Pdfa&, StateId, StateId, MergeJournal&);
  friend void refresh_fringe(Pdfa&, std::uint64_t, MergeJournal*);

  struct Absorb {
    StateId dst;
    StateId src;
    std::vector<Symbol> created;  // symbols that had no edge in dst before
  };
  struct Retarget {
    StateId state;
    Symbol symbol;
    StateId old_target;
  };
  struct Reparent {
    StateId state;
    StateId old_parent;
    Symbol old_symbol;
  };
  struct Recolor {
    StateId state;
    Color old_color;
  };
  struct Retire {
    StateId state;
  };
  using Entry = std::variant<Absorb, Retarget, Reparent, Recolor, Retire>;

  std::vector<Entry> entries_;
  std::uint64_t epoch_before_ = 0;
  std::uint64_t epoch_after_ = 0;
  Status status_ = Status::Empty;
};

/// Prefix tree of `data` with exact counts and, optionally, filled sketches.
/// Root is Red, its children Blue, everything else White.
Pdfa build_apta(const Dataset& data, std::optional<SketchShape> sketches = std::nullopt);

/// Merges `blue` into `red`: retargets blue's incoming edge to red, adds
/// counts and sketches, and folds same-symbol children recursively. White
/// children of red states that reach `blue_threshold` become Blue.
void merge(Pdfa& h, StateId red, StateId blue, MergeJournal& journal, std::uint64_t blue_threshold = 0);

/// Reverts the most recent, not yet undone or committed, merge.
void undo(Pdfa& h, MergeJournal& journal);

/// Remembers heuristic evaluations between search steps. An entry is reused
/// only while every state the heuristic looks at is unchanged.
class ScoreCache {
 public:
  struct Evaluation {
    bool consistent = false;
    double score = 0.0;
  };

  Evaluation evaluate(const Pdfa& h, const Heuristic& heur, const State& red, const State& blue);
  void clear() { entries_.clear(); }
  std::size_t hits() const { return hits_; }
  std::size_t misses() const { return misses_; }

 private:
  struct Entry {
    std::uint64_t signature = 0;
    Evaluation value;
  };
  std::unordered_map<std::uint64_t, Entry> entries_;
  std::size_t hits_ = 0;
  std::size_t misses_ = 0;
};

/// Highest-scoring consistent (red, blue) pair; ties go to the older red,
/// then the older blue.
std::optional<MergeCandidate> best_merge(const Pdfa& h, const Heuristic& heur, ScoreCache* cache = nullptr);

/// Recolors a Blue state Red and lets its White children with size >=
/// `blue_threshold` join the fringe. With `strict` set, refuses a state that
/// still has a consistent merge.
void promote(Pdfa& h, StateId blue, std::uint64_t blue_threshold = 0, const Heuristic* strict = nullptr);

/// Turns White children of Red states with size >= threshold Blue.
void refresh_fringe(Pdfa& h, std::uint64_t blue_threshold, MergeJournal* journal = nullptr);

/// Merges the best candidate until none is left, promoting the largest Blue
/// state (oldest on ties) whenever no merge is consistent. Returns the number
/// of merges performed.
std::size_t merge_until_fixpoint(Pdfa& h, const Heuristic& heur, std::uint64_t blue_threshold = 0,
                                 ScoreCache* cache = nullptr);

}  // namespace sfl
