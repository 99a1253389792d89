#include "sfl/merge_engine.hpp"

#include <algorithm>

#include "sfl/error.hpp"
#include "sfl/sketch_ingest.hpp"

namespace sfl {

std::vector<StateId> MergeJournal::retired_states() const {
  std::vector<StateId> out;
  for (const auto& e : entries_) {
    if (const auto* r = std::get_if<Retire>(&e)) out.push_back(r->state);
  }
  return out;
}

void MergeJournal::commit(Pdfa& h) {
  if (status_ != Status::Applied) throw UsageError("only an applied merge can be committed");
  if (h.epoch() != epoch_after_) throw CorruptionError("journal committed against a different hypothesis epoch");
  for (StateId s : retired_states()) h.reclaim(s);
  status_ = Status::Committed;
}

Pdfa build_apta(const Dataset& data, std::optional<SketchShape> sketches) {
  if (data.sequences.empty()) throw InputError("cannot build a prefix tree from an empty dataset");
  Pdfa h(data.alphabet_size, std::move(sketches));
  for (const auto& seq : data.sequences) {
    StateId q = h.root();
    for (std::size_t j = 0;; ++j) {
      State& st = h.mutate(q);
      ++st.size;
      if (st.sketches) record_futures(*st.sketches, std::span<const Symbol>(seq).subspan(j));
      if (j == seq.size()) {
        ++st.termination_count;
        break;
      }
      const Symbol a = seq[j];
      h.check_symbol(a);
      Edge& e = st.outgoing[a];
      ++e.count;
      if (!e.target.valid()) {
        const StateId child = h.add_state(q, a);
        // add_state may reallocate the slot vector; re-fetch the parent.
        h.mutate(q).outgoing[a].target = child;
        q = child;
      } else {
        q = e.target;
      }
    }
  }
  refresh_fringe(h, 0);
  return h;
}

void fold_into(Pdfa& h, StateId dst, StateId src, MergeJournal& journal) {
  std::vector<Symbol> created;
  {
    const State& s = h.state(src);
    State& d = h.mutate(dst);
    d.size += s.size;
    d.termination_count += s.termination_count;
    for (const auto& [a, e] : s.outgoing) {
      auto [it, inserted] = d.outgoing.try_emplace(a);
      if (inserted) created.push_back(a);
      it->second.count += e.count;
    }
    if (d.sketches && s.sketches) {
      d.sketches->add(*s.sketches);
    } else if (d.sketches.has_value() != s.sketches.has_value()) {
      throw CorruptionError("merging a state with sketches into one without");
    }
  }
  journal.entries_.emplace_back(MergeJournal::Absorb{dst, src, std::move(created)});
  h.retire(src);
  journal.entries_.emplace_back(MergeJournal::Retire{src});

  // Copy: folding may touch src's children but never src's own edge map.
  const auto src_edges = h.state(src).outgoing;
  for (const auto& [a, e] : src_edges) {
    if (!e.target.valid()) continue;
    const StateId existing = h.state(dst).child(a);
    if (existing.valid()) {
      fold_into(h, existing, e.target, journal);
    } else {
      h.mutate(dst).outgoing[a].target = e.target;
      journal.entries_.emplace_back(MergeJournal::Retarget{dst, a, StateId::none()});
      State& child = h.mutate(e.target);
      journal.entries_.emplace_back(MergeJournal::Reparent{e.target, child.parent, child.parent_symbol});
      child.parent = dst;
      child.parent_symbol = a;
    }
  }
}

void merge(Pdfa& h, StateId red, StateId blue, MergeJournal& journal, std::uint64_t blue_threshold) {
  if (journal.status_ != MergeJournal::Status::Empty) throw UsageError("merge needs a fresh journal");
  const State& r = h.state(red);
  const State& b = h.state(blue);
  if (r.retired || b.retired) throw UsageError("cannot merge retired states");
  if (r.color != Color::Red) throw UsageError("merge target must be red");
  if (b.color != Color::Blue) throw UsageError("merged state must be blue");

  journal.epoch_before_ = h.epoch();
  const StateId parent = b.parent;
  const Symbol via = b.parent_symbol;
  Edge& incoming = h.mutate(parent).outgoing.at(via);
  if (incoming.target != blue) throw CorruptionError("blue state is not the target of its parent edge");
  incoming.target = red;
  journal.entries_.emplace_back(MergeJournal::Retarget{parent, via, blue});

  fold_into(h, red, blue, journal);
  refresh_fringe(h, blue_threshold, &journal);

  h.set_epoch(h.epoch() + 1);
  journal.epoch_after_ = h.epoch();
  journal.status_ = MergeJournal::Status::Applied;
}

void undo(Pdfa& h, MergeJournal& journal) {
  if (journal.status_ != MergeJournal::Status::Applied) {
    throw CorruptionError("undo of a merge that is not the latest applied one");
  }
  if (h.epoch() != journal.epoch_after_) throw CorruptionError("undo applied out of order");

  for (auto it = journal.entries_.rbegin(); it != journal.entries_.rend(); ++it) {
    std::visit(
        [&](const auto& entry) {
          using T = std::decay_t<decltype(entry)>;
          if constexpr (std::is_same_v<T, MergeJournal::Absorb>) {
            const State& s = h.state(entry.src);
            State& d = h.mutate(entry.dst);
            if (d.size < s.size || d.termination_count < s.termination_count) {
              throw CorruptionError("undo would make counts negative");
            }
            d.size -= s.size;
            d.termination_count -= s.termination_count;
            for (const auto& [a, e] : s.outgoing) {
              auto found = d.outgoing.find(a);
              if (found == d.outgoing.end() || found->second.count < e.count) {
                throw CorruptionError("undo would make an edge count negative");
              }
              found->second.count -= e.count;
            }
            for (Symbol a : entry.created) d.outgoing.erase(a);
            if (d.sketches && s.sketches) d.sketches->subtract(*s.sketches);
          } else if constexpr (std::is_same_v<T, MergeJournal::Retarget>) {
            h.mutate(entry.state).outgoing.at(entry.symbol).target = entry.old_target;
          } else if constexpr (std::is_same_v<T, MergeJournal::Reparent>) {
            State& s = h.mutate(entry.state);
            s.parent = entry.old_parent;
            s.parent_symbol = entry.old_symbol;
          } else if constexpr (std::is_same_v<T, MergeJournal::Recolor>) {
            h.mutate(entry.state).color = entry.old_color;
          } else if constexpr (std::is_same_v<T, MergeJournal::Retire>) {
            h.unretire(entry.state);
          }
        },
        *it);
  }
  h.set_epoch(journal.epoch_before_);
  journal.status_ = MergeJournal::Status::Undone;
}

void refresh_fringe(Pdfa& h, std::uint64_t blue_threshold, MergeJournal* journal) {
  for (StateId red : h.states_with_color(Color::Red)) {
    for (const auto& [a, e] : h.state(red).outgoing) {
      if (!e.target.valid()) continue;
      const State& c = h.state(e.target);
      if (c.retired || c.color != Color::White || c.parent != red || c.size < blue_threshold) continue;
      if (journal) journal->entries_.emplace_back(MergeJournal::Recolor{c.id, c.color});
      h.mutate(e.target).color = Color::Blue;
    }
  }
}

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
  return h;
}

std::uint64_t footprint(const Pdfa& h, const State& s, int depth, std::uint64_t acc) {
  acc = mix(acc, s.id.index());
  acc = mix(acc, s.revision);
  if (depth <= 0) return acc;
  for (const auto& [a, e] : s.outgoing) {
    if (!e.target.valid()) continue;
    acc = mix(acc, a);
    acc = footprint(h, h.state(e.target), depth - 1, acc);
  }
  return acc;
}

}  // namespace

ScoreCache::Evaluation ScoreCache::evaluate(const Pdfa& h, const Heuristic& heur, const State& red, const State& blue) {
  const std::uint64_t key = (static_cast<std::uint64_t>(red.id.index()) << 32) | blue.id.index();
  const int depth = heur.lookahead();
  const std::uint64_t signature = footprint(h, blue, depth, footprint(h, red, depth, 0x5F1ULL));
  auto it = entries_.find(key);
  if (it != entries_.end() && it->second.signature == signature) {
    ++hits_;
    return it->second.value;
  }
  ++misses_;
  Evaluation value;
  value.consistent = heur.consistency_check(h, red, blue);
  if (value.consistent) value.score = heur.assign_score(h, red, blue);
  entries_[key] = Entry{signature, value};
  return value;
}

std::optional<MergeCandidate> best_merge(const Pdfa& h, const Heuristic& heur, ScoreCache* cache) {
  const auto reds = h.states_with_color(Color::Red);
  const auto blues = h.states_with_color(Color::Blue);
  std::optional<MergeCandidate> best;
  for (StateId r : reds) {
    const State& red = h.state(r);
    for (StateId b : blues) {
      const State& blue = h.state(b);
      bool consistent = false;
      double score = 0.0;
      if (cache) {
        const auto ev = cache->evaluate(h, heur, red, blue);
        consistent = ev.consistent;
        score = ev.score;
      } else {
        consistent = heur.consistency_check(h, red, blue);
        if (consistent) score = heur.assign_score(h, red, blue);
      }
      if (consistent && (!best || score > best->score)) best = MergeCandidate{r, b, score};
    }
  }
  return best;
}

void promote(Pdfa& h, StateId blue, std::uint64_t blue_threshold, const Heuristic* strict) {
  const State& b = h.state(blue);
  if (b.retired || b.color != Color::Blue) throw UsageError("only a blue state can be promoted");
  if (strict) {
    for (StateId r : h.states_with_color(Color::Red)) {
      if (strict->consistency_check(h, h.state(r), b)) {
        throw UsageError("state " + std::to_string(blue.index()) + " still has a consistent merge");
      }
    }
  }
  h.mutate(blue).color = Color::Red;
  refresh_fringe(h, blue_threshold);
}

std::size_t merge_until_fixpoint(Pdfa& h, const Heuristic& heur, std::uint64_t blue_threshold, ScoreCache* cache) {
  std::size_t merges = 0;
  while (true) {
    if (auto cand = best_merge(h, heur, cache)) {
      MergeJournal journal;
      merge(h, cand->red, cand->blue, journal, blue_threshold);
      journal.commit(h);
      ++merges;
      continue;
    }
    const auto blues = h.states_with_color(Color::Blue);
    if (blues.empty()) break;
    // Largest evidence first; states_with_color is id-ordered so the first max is the oldest.
    StateId pick = blues.front();
    for (StateId b : blues) {
      if (h.state(b).size > h.state(pick).size) pick = b;
    }
    promote(h, pick, blue_threshold);
  }
  return merges;
}

}  // namespace sfl
