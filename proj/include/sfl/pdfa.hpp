#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sfl/cms.hpp"
#include "sfl/types.hpp"

namespace sfl {

/// Outgoing transition. `count` is the exact number of passes that read the
/// symbol in the owning state. `target` may be absent: white frontier states
/// count symbols without expanding them into stored children.
struct Edge {
  StateId target;
  std::uint64_t count = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct State {
  StateId id;
  Color color = Color::White;
  StateId parent;  // tree parent; none for the root
  Symbol parent_symbol = 0;
  std::uint64_t size = 0;
  std::uint64_t termination_count = 0;
  std::map<Symbol, Edge> outgoing;
  std::optional<SketchSet> sketches;
  bool retired = false;
  std::uint64_t revision = 0;  // bumped on every mutation; not part of equality

  const Edge* edge(Symbol a) const;
  StateId child(Symbol a) const;
  std::uint64_t count(Symbol a) const;

  friend bool operator==(const State& a, const State& b);
};

struct SketchShape {
  CmsConfig cms;
  std::uint32_t n_futures = 2;

  friend bool operator==(const SketchShape&, const SketchShape&) = default;
};

/// The hypothesis automaton. Stores counts; probabilities are derived on demand.
/// State slots are indexed by StateId and never reused; merged-away states stay
/// in place with `retired` set.
class Pdfa {
 public:
  explicit Pdfa(std::uint32_t alphabet_size, std::optional<SketchShape> sketches = std::nullopt);

  StateId root() const { return StateId(0); }
  std::uint32_t alphabet_size() const { return alphabet_size_; }
  const std::optional<SketchShape>& sketch_shape() const { return sketch_shape_; }

  const State& state(StateId id) const;
  /// Mutable access; marks the state as changed.
  State& mutate(StateId id);

  /// Creates a White state whose tree parent is `parent` via `via`. Does not link the edge.
  StateId add_state(StateId parent, Symbol via);

  void retire(StateId id);
  void unretire(StateId id);
  /// Frees the payload (edges, sketches) of a retired state.
  void reclaim(StateId id);

  std::size_t slot_count() const { return states_.size(); }
  std::size_t live_count() const { return live_; }
  std::size_t retired_count() const { return states_.size() - live_; }

  std::vector<StateId> live_states() const;
  std::vector<StateId> states_with_color(Color c) const;

  /// Number of committed merges minus undone ones; guards journal ordering.
  std::uint64_t epoch() const { return epoch_; }
  void set_epoch(std::uint64_t e) { epoch_ = e; }

  bool frozen() const { return frozen_; }
  void freeze() { frozen_ = true; }

  /// Throws InputError if `a` is outside the alphabet.
  void check_symbol(Symbol a) const;

  /// Deep equality of all slots, colors, counts, and sketches.
  friend bool operator==(const Pdfa& a, const Pdfa& b);

 private:
  std::uint32_t alphabet_size_;
  std::optional<SketchShape> sketch_shape_;
  std::vector<State> states_;
  std::size_t live_ = 0;
  std::uint64_t clock_ = 0;
  std::uint64_t epoch_ = 0;
  bool frozen_ = false;
};

/// How zero or missing factors are treated when scoring a sequence.
struct SmoothingPolicy {
  double floor = 1e-30;
};

/// count(a) / size. Throws DistributionError when size == 0.
double symbol_prob(const State& state, Symbol a);
/// termination_count / size. Throws DistributionError when size == 0.
double final_prob(const State& state);

/// Probability of `s` under a frozen model. Any missing transition or zero
/// factor makes the result `policy.floor`.
double probability(const Pdfa& model, std::span<const Symbol> s, const SmoothingPolicy& policy = {});

/// Largest |final_prob + sum symbol_prob - 1| over live states with size > 0.
double normalization_error(const Pdfa& model);

/// Graphviz rendering: nodes show size and final probability, edges show
/// symbol and probability, node fill encodes the color.
std::string export_dot(const Pdfa& model);

}  // namespace sfl
