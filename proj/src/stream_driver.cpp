#include "sfl/stream_driver.hpp"

#include "sfl/error.hpp"
#include "sfl/sketch_ingest.hpp"

namespace sfl {

void StreamParams::validate() const {
  if (batch_size < 1) throw UsageError("batch size must be >= 1");
  if (threshold < 1) throw UsageError("threshold must be >= 1");
  if (sketches) {
    sketches->cms.validate();
    if (sketches->n_futures < 1) throw UsageError("n_futures must be >= 1");
  }
}

StatsRecord live_stats(const Pdfa& h) {
  StatsRecord s;
  for (StateId id : h.live_states()) {
    switch (h.state(id).color) {
      case Color::Red: ++s.red; break;
      case Color::Blue: ++s.blue; break;
      case Color::White: ++s.white; break;
    }
  }
  s.stored = h.live_count();
  s.retired = h.retired_count();
  if (const auto& shape = h.sketch_shape()) {
    s.sketch_bytes = s.stored * shape->n_futures * shape->cms.depth * (shape->cms.width + 1) * sizeof(std::uint64_t);
  }
  s.peak_stored = s.stored;
  return s;
}

std::optional<std::string> frontier_violation(const Pdfa& h, std::uint64_t threshold) {
  if (h.state(h.root()).color != Color::Red) return "root is not red";
  for (StateId id : h.live_states()) {
    const State& s = h.state(id);
    if (id == h.root() || s.color == Color::Red) continue;
    const std::string name = "state " + std::to_string(id.index());
    if (!s.parent.valid()) return name + " has no parent";
    const State& p = h.state(s.parent);
    if (p.retired) return name + " hangs below a retired state";
    if (p.child(s.parent_symbol) != id) return name + " is not linked from its parent";
    if (s.color == Color::Blue) {
      if (p.color != Color::Red) return name + " is blue below a non-red state";
      if (s.size < threshold) return name + " is blue below the evidence threshold";
    } else if (p.color == Color::White) {
      return name + " is white below a white state";
    }
  }
  return std::nullopt;
}

bool within_memory_bound(const Pdfa& h) {
  const auto s = live_stats(h);
  const std::uint64_t sigma = h.alphabet_size();
  return s.stored <= s.red * (1 + sigma) + s.blue * sigma + 1;
}

StreamLearner::StreamLearner(std::uint32_t alphabet_size, StreamParams params, const Heuristic& heuristic)
    : params_(std::move(params)), heuristic_(heuristic), h_(alphabet_size, params_.sketches) {
  params_.validate();
}

void StreamLearner::maybe_mark_blue(StateId q) {
  const State& s = h_.state(q);
  if (s.color != Color::White || !s.parent.valid() || s.size < params_.threshold) return;
  if (h_.state(s.parent).color != Color::Red) return;
  h_.mutate(q).color = Color::Blue;
}

void StreamLearner::ingest(std::span<const Symbol> x) {
  for (Symbol a : x) h_.check_symbol(a);
  StateId q = h_.root();
  for (std::size_t j = 0;; ++j) {
    State& st = h_.mutate(q);
    ++st.size;
    if (st.sketches) record_futures(*st.sketches, x.subspan(j));
    if (j == x.size()) {
      ++st.termination_count;
      maybe_mark_blue(q);
      break;
    }
    const Symbol a = x[j];
    Edge& e = st.outgoing[a];
    ++e.count;
    if (e.target.valid()) {
      q = e.target;
      continue;
    }
    if (st.color == Color::Red || st.color == Color::Blue) {
      const StateId child = h_.add_state(q, a);
      h_.mutate(q).outgoing[a].target = child;
      q = child;
      continue;
    }
    // White frontier state: the rest of the sequence only lives in its sketches.
    maybe_mark_blue(q);
    break;
  }
  ++sequences_;
  peak_stored_ = std::max<std::uint64_t>(peak_stored_, h_.live_count());
}

void StreamLearner::push(std::span<const Symbol> x) {
  ingest(x);
  if (++since_merge_ == params_.batch_size) {
    merge_phase();
    since_merge_ = 0;
  }
}

std::size_t StreamLearner::merge_phase() {
  const auto n = merge_until_fixpoint(h_, heuristic_, params_.threshold, &cache_);
  merges_ += n;
  ++phases_;
  return n;
}

void StreamLearner::complete_fringe() {
  // No more evidence is coming, so waiting for `threshold` passes is moot:
  // every stored white child of the red core gets merged or promoted.
  refresh_fringe(h_, 1);
  merges_ += merge_until_fixpoint(h_, heuristic_, 1, &cache_);

  // Counts seen on white states never got a target. Back off to the state the
  // root reaches on the same symbol (or the root itself) instead of dropping
  // every continuation to the probability floor.
  const StateId root = h_.root();
  for (StateId id : h_.live_states()) {
    for (auto& [a, e] : h_.mutate(id).outgoing) {
      if (e.target.valid()) continue;
      const StateId back = h_.state(root).child(a);
      e.target = back.valid() ? back : root;
    }
  }
}

Pdfa StreamLearner::finish() {
  merge_phase();
  if (params_.complete_fringe) complete_fringe();
  cache_.clear();
  h_.freeze();
  return h_;
}

StatsRecord StreamLearner::stats() const {
  auto s = live_stats(h_);
  s.sequences = sequences_;
  s.peak_stored = std::max<std::uint64_t>(peak_stored_, s.stored);
  s.merges = merges_;
  s.merge_phases = phases_;
  return s;
}

Pdfa run_stream(StreamSource& source, const StreamParams& params, const Heuristic& heuristic, StatsRecord* stats) {
  StreamLearner learner(source.alphabet_size(), params, heuristic);
  while (auto seq = source.next()) learner.push(*seq);
  Pdfa model = learner.finish();
  if (stats) *stats = learner.stats();
  return model;
}

}  // namespace sfl
