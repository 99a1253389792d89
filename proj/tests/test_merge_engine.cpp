#include <doctest.h>

#include <map>
#include <random>

#include "sfl/alergia_heuristic.hpp"
#include "sfl/error.hpp"
#include "sfl/merge_engine.hpp"
#include "sfl/sketch_heuristic.hpp"
#include "synthetic.hpp"

using namespace sfl;

namespace {

Dataset data(std::uint32_t alphabet, std::vector<Sequence> seqs) { return Dataset{alphabet, std::move(seqs)}; }

// Consistent exactly for the listed (red, blue) index pairs, with fixed scores.
class Scripted final : public Heuristic {
 public:
  std::map<std::pair<std::uint32_t, std::uint32_t>, double> scores;

  bool consistency_check(const Pdfa&, const State& r, const State& b) const override {
    return scores.count({r.id.index(), b.id.index()}) > 0;
  }
  double assign_score(const Pdfa&, const State& r, const State& b) const override {
    return scores.at({r.id.index(), b.id.index()});
  }
  std::string name() const override { return "scripted"; }
};

class Never final : public Heuristic {
 public:
  bool consistency_check(const Pdfa&, const State&, const State&) const override { return false; }
  double assign_score(const Pdfa&, const State&, const State&) const override { return 0.0; }
  std::string name() const override { return "never"; }
};

std::uint64_t live_termination_mass(const Pdfa& h) {
  std::uint64_t total = 0;
  for (StateId id : h.live_states()) total += h.state(id).termination_count;
  return total;
}

void check_mass_balance(const Pdfa& h) {
  for (StateId id : h.live_states()) {
    const State& s = h.state(id);
    std::uint64_t mass = s.termination_count;
    for (const auto& [a, e] : s.outgoing) mass += e.count;
    REQUIRE(mass == s.size);
  }
}

}  // namespace

TEST_CASE("prefix tree of {a, a, b}") {
  const Pdfa h = build_apta(data(2, {{0}, {0}, {1}}));
  const State& root = h.state(h.root());
  CHECK(h.live_count() == 3);
  CHECK(root.size == 3);
  CHECK(root.count(0) == 2);
  CHECK(root.count(1) == 1);
  CHECK(root.color == Color::Red);
  const State& a = h.state(root.child(0));
  const State& b = h.state(root.child(1));
  CHECK(a.termination_count == 2);
  CHECK(b.termination_count == 1);
  CHECK(a.color == Color::Blue);
  CHECK(b.color == Color::Blue);
}

TEST_CASE("prefix tree edge cases") {
  const Pdfa empty = build_apta(data(3, {{}}));
  CHECK(empty.live_count() == 1);
  CHECK(empty.state(empty.root()).termination_count == 1);

  const Pdfa shared = build_apta(data(3, {{0, 1}, {0, 2}}));
  CHECK(shared.live_count() == 4);
  const State& a = shared.state(shared.state(shared.root()).child(0));
  CHECK(a.color == Color::Blue);
  CHECK(shared.state(a.child(1)).color == Color::White);

  CHECK_THROWS_AS(build_apta(data(2, {})), InputError);
  CHECK_THROWS_AS(build_apta(data(2, {{2}})), InputError);
}

TEST_CASE("merging an empty blue only redirects the edge") {
  Pdfa h(2);
  const StateId blue = h.add_state(h.root(), 0);
  h.mutate(h.root()).outgoing[0] = Edge{blue, 0};
  h.mutate(blue).color = Color::Blue;
  h.mutate(h.root()).size = 3;
  h.mutate(h.root()).termination_count = 3;

  MergeJournal j;
  merge(h, h.root(), blue, j);
  const State& root = h.state(h.root());
  CHECK(root.size == 3);
  CHECK(root.termination_count == 3);
  CHECK(root.child(0) == h.root());
  CHECK(h.state(blue).retired);
}

TEST_CASE("one-level fold") {
  // root -a-> X (3 passes) and root -b-> Y (2 passes); Y -a-> Y1 (2 passes).
  Pdfa h = build_apta(data(2, {{0, 0}, {0, 0}, {0, 0}, {1, 0}, {1, 0}}));
  const StateId x = h.state(h.root()).child(0);
  const StateId y = h.state(h.root()).child(1);
  promote(h, x);
  REQUIRE(h.state(x).color == Color::Red);
  REQUIRE(h.state(x).count(0) == 3);
  REQUIRE(h.state(y).count(0) == 2);
  const StateId x1 = h.state(x).child(0);
  const StateId y1 = h.state(y).child(0);

  MergeJournal j;
  merge(h, x, y, j);
  CHECK(h.state(x).count(0) == 5);
  CHECK(h.state(x).size == 5);
  CHECK(h.state(x).termination_count == 0);
  CHECK(h.state(x1).size == 5);
  CHECK(h.state(x1).termination_count == 5);
  CHECK(h.state(h.root()).child(1) == x);
  CHECK(j.retired_states() == std::vector<StateId>{y, y1});
  check_mass_balance(h);

  j.commit(h);
  CHECK(j.status() == MergeJournal::Status::Committed);
  CHECK(h.retired_count() == 2);
  CHECK(h.state(y).outgoing.empty());
  CHECK_THROWS_AS(undo(h, j), CorruptionError);
}

TEST_CASE("merge preconditions") {
  Pdfa h = build_apta(data(2, {{0}, {1}}));
  const StateId a = h.state(h.root()).child(0);
  MergeJournal j;
  CHECK_THROWS_AS(merge(h, h.root(), h.root(), j), UsageError);
  CHECK_THROWS_AS(merge(h, a, h.root(), j), UsageError);
}

TEST_CASE("merge then undo restores the hypothesis exactly") {
  const SketchShape shape{CmsConfig{16, 2, 3}, 2};
  Pdfa h = build_apta(data(2, {{0, 0}, {0, 0}, {0, 0}, {1, 0}, {1, 0}}), shape);
  const StateId x = h.state(h.root()).child(0);
  const StateId y = h.state(h.root()).child(1);
  promote(h, x);
  const Pdfa before = h;

  MergeJournal j;
  merge(h, x, y, j);
  CHECK_FALSE(h == before);
  undo(h, j);
  CHECK(h == before);
  CHECK(j.status() == MergeJournal::Status::Undone);
  CHECK_THROWS_AS(undo(h, j), CorruptionError);
}

TEST_CASE("undo out of order is refused") {
  Pdfa h = build_apta(data(3, {{0}, {1}, {2}}));
  const auto blues = h.states_with_color(Color::Blue);
  MergeJournal first;
  merge(h, h.root(), blues[0], first);
  MergeJournal second;
  merge(h, h.root(), blues[1], second);
  CHECK_THROWS_AS(undo(h, first), CorruptionError);
  undo(h, second);
  undo(h, first);
}

TEST_CASE("random merge and undo round trips") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const bool sketches = trial % 2 == 0;
    Pdfa h = testing::random_apta(rng, 40, 3,
                                  sketches ? std::optional<SketchShape>(SketchShape{CmsConfig{8, 2, 5}, 2}) : std::nullopt);
    // Grow the red core a bit so that folds reach several levels.
    for (int p = 0; p < 2; ++p) {
      const auto blues = h.states_with_color(Color::Blue);
      if (blues.empty()) break;
      promote(h, blues[rng() % blues.size()]);
    }
    const auto reds = h.states_with_color(Color::Red);
    const auto blues = h.states_with_color(Color::Blue);
    if (blues.empty()) continue;
    const Pdfa before = h;
    const std::uint64_t term = live_termination_mass(h);
    MergeJournal j;
    merge(h, reds[rng() % reds.size()], blues[rng() % blues.size()], j);
    REQUIRE(live_termination_mass(h) == term);
    check_mass_balance(h);
    undo(h, j);
    REQUIRE(h == before);
  }
}

TEST_CASE("best merge picks the highest score with creation-order ties") {
  Pdfa h = build_apta(data(3, {{0}, {1}, {2}}));
  Never never;
  CHECK_FALSE(best_merge(Pdfa(2), never).has_value());
  CHECK_FALSE(best_merge(h, never).has_value());

  Scripted s;
  s.scores[{0, 2}] = 1.7;
  CHECK(best_merge(h, s) == MergeCandidate{StateId(0), StateId(2), 1.7});
  s.scores[{0, 3}] = 1.9;
  CHECK(best_merge(h, s) == MergeCandidate{StateId(0), StateId(3), 1.9});
  s.scores[{0, 1}] = 1.9;
  CHECK(best_merge(h, s) == MergeCandidate{StateId(0), StateId(1), 1.9});
  // Pure: repeated calls agree.
  CHECK(best_merge(h, s) == best_merge(h, s));
}

TEST_CASE("promotion") {
  Pdfa h = build_apta(data(2, {{0, 0}, {0, 0}, {0, 0}, {0, 1}}));
  const StateId a = h.state(h.root()).child(0);
  const StateId aa = h.state(a).child(0);
  const StateId ab = h.state(a).child(1);

  Never never;
  Scripted always;
  always.scores[{0, 1}] = 1.0;
  CHECK_THROWS_AS(promote(h, a, 2, &always), UsageError);

  const Pdfa before = h;
  promote(h, a, 2, &never);
  CHECK(h.states_with_color(Color::Red).size() == 2);
  CHECK(h.state(aa).color == Color::Blue);   // size 3 >= 2
  CHECK(h.state(ab).color == Color::White);  // size 1 < 2
  for (StateId id : h.live_states()) {
    CHECK(h.state(id).size == before.state(id).size);
    CHECK(h.state(id).outgoing == before.state(id).outgoing);
  }
  CHECK_THROWS_AS(promote(h, a), UsageError);
}

TEST_CASE("merge until fixpoint") {
  Pdfa lone(2);
  AlergiaHeuristic alergia({0.05, 0});
  CHECK(merge_until_fixpoint(lone, alergia) == 0);

  // Two blues with identical futures under one red.
  std::vector<Sequence> seqs;
  for (int i = 0; i < 50; ++i) {
    seqs.push_back({0, 1});
    seqs.push_back({2, 1});
  }
  Pdfa h = build_apta(data(3, seqs));
  CHECK(merge_until_fixpoint(h, alergia) >= 1);
  CHECK(h.states_with_color(Color::Blue).empty());
  CHECK(h.states_with_color(Color::White).empty());
  const State& root = h.state(h.root());
  CHECK(root.child(0) == root.child(2));
  check_mass_balance(h);
}

TEST_CASE("cached search equals uncached search") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const auto target = testing::random_target(rng, testing::TargetShape{5, 3});
    const Dataset d = testing::sample_dataset(target, rng, 300);
    const SketchShape shape{CmsConfig{16, 3, 2}, 2};
    SketchHeuristic sketch({0.05, 2});
    AlergiaHeuristic alergia({0.05, 1});
    for (const Heuristic* heur : {static_cast<const Heuristic*>(&sketch), static_cast<const Heuristic*>(&alergia)}) {
      Pdfa plain = build_apta(d, shape);
      Pdfa cached = plain;
      ScoreCache cache;
      const auto m1 = merge_until_fixpoint(plain, *heur);
      const auto m2 = merge_until_fixpoint(cached, *heur, 0, &cache);
      REQUIRE(m1 == m2);
      REQUIRE(plain == cached);
      check_mass_balance(plain);
      REQUIRE(live_termination_mass(plain) == d.sequences.size());
    }
  }
}
