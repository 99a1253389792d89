#include <doctest.h>

#include <random>

#include "sfl/error.hpp"
#include "sfl/learner.hpp"
#include "sfl/stream_driver.hpp"
#include "synthetic.hpp"

using namespace sfl;

namespace {

const SketchHeuristic kSketch({0.05, 2});

StreamParams params(std::uint64_t b, std::uint64_t t) {
  StreamParams p;
  p.batch_size = b;
  p.threshold = t;
  return p;
}

}  // namespace

TEST_CASE("fresh learner holds only the red root") {
  StreamLearner l(2, params(500, 100), kSketch);
  const auto s = l.stats();
  CHECK(s.red == 1);
  CHECK(s.blue == 0);
  CHECK(s.white == 0);
}

TEST_CASE("first trace stops at the new white child") {
  StreamLearner l(2, params(500, 100), kSketch);
  l.ingest(Sequence{0, 1});
  const Pdfa& h = l.hypothesis();
  const State& root = h.state(h.root());
  CHECK(root.size == 1);
  CHECK(root.count(0) == 1);
  const State& child = h.state(root.child(0));
  CHECK(child.color == Color::White);
  CHECK(child.size == 1);
  CHECK(child.count(1) == 1);
  CHECK_FALSE(child.child(1).valid());
  CHECK(child.termination_count == 0);
  CHECK(child.sketches->at(1).query(1) == 1);
  CHECK(child.sketches->at(2).query_termination() == 1);

  const auto s = l.stats();
  CHECK(s.red == 1);
  CHECK(s.blue == 0);
  CHECK(s.white == 1);
  CHECK(s.stored == 2);
}

TEST_CASE("a white child of the red core turns blue at the threshold") {
  StreamLearner l(2, params(500, 3), kSketch);
  l.ingest(Sequence{0});
  l.ingest(Sequence{0});
  const StateId c = l.hypothesis().state(l.hypothesis().root()).child(0);
  CHECK(l.hypothesis().state(c).color == Color::White);
  l.ingest(Sequence{0});
  CHECK(l.hypothesis().state(c).color == Color::Blue);
  CHECK(l.hypothesis().state(c).size == 3);
}

TEST_CASE("empty sequence") {
  StreamLearner l(2, params(500, 100), kSketch);
  l.ingest(Sequence{});
  const State& root = l.hypothesis().state(l.hypothesis().root());
  CHECK(root.size == 1);
  CHECK(root.termination_count == 1);
  CHECK(root.sketches->at(1).query_termination() == 1);
  CHECK(root.sketches->at(2).query_termination() == 1);
}

TEST_CASE("out-of-alphabet symbols are rejected before any change") {
  StreamLearner l(2, params(500, 100), kSketch);
  l.ingest(Sequence{0});
  const Pdfa before = l.hypothesis();
  CHECK_THROWS_AS(l.ingest(Sequence{0, 2}), InputError);
  CHECK(l.hypothesis() == before);
}

TEST_CASE("merge phases follow the batch counter") {
  std::mt19937_64 rng(2);
  const auto target = testing::random_target(rng, testing::TargetShape{4, 3});
  const Dataset small = testing::sample_dataset(target, rng, 200);
  StatsRecord s;
  DatasetSource one(small);
  run_stream(one, params(500, 20), kSketch, &s);
  CHECK(s.merge_phases == 1);
  CHECK(s.sequences == 200);

  const Dataset big = testing::sample_dataset(target, rng, 1000);
  DatasetSource three(big);
  run_stream(three, params(500, 20), kSketch, &s);
  CHECK(s.merge_phases == 3);
}

TEST_CASE("replaying a stream gives an identical model") {
  std::mt19937_64 rng(6);
  const auto target = testing::random_target(rng, testing::TargetShape{6, 4});
  const Dataset d = testing::sample_dataset(target, rng, 1500);
  DatasetSource a(d);
  DatasetSource b(d);
  const Pdfa m1 = run_stream(a, params(300, 30), kSketch);
  const Pdfa m2 = run_stream(b, params(300, 30), kSketch);
  CHECK(m1 == m2);
  CHECK(m1.frozen());
}

TEST_CASE("sketch bytes follow the stored-state formula") {
  StreamParams p = params(500, 100);
  p.sketches = SketchShape{CmsConfig{50, 3, 1}, 2};
  StreamLearner l(3, p, kSketch);
  l.ingest(Sequence{0, 1});
  l.ingest(Sequence{1});
  const auto s = l.stats();
  CHECK(s.stored == 3);
  CHECK(s.sketch_bytes == 3u * 2 * 3 * 51 * 8);

  StreamParams exact = params(500, 100);
  exact.sketches.reset();
  AlergiaHeuristic alergia({0.05, 1});
  StreamLearner e(3, exact, alergia);
  e.ingest(Sequence{0});
  CHECK(e.stats().sketch_bytes == 0);
}

TEST_CASE("root size counts ingests while nothing merges into the root") {
  std::mt19937_64 rng(10);
  const auto target = testing::random_target(rng, testing::TargetShape{5, 3});
  StreamLearner l(3, params(500, 10), kSketch);
  for (int n = 1; n <= 700; ++n) {
    l.ingest(testing::sample(target, rng));
    REQUIRE(l.hypothesis().state(l.hypothesis().root()).size == static_cast<std::uint64_t>(n));
  }
}

TEST_CASE("frontier and memory bound hold throughout a run") {
  std::mt19937_64 rng(14);
  for (const auto& [heur_kind, seed] : {std::pair{0, 1}, std::pair{1, 2}, std::pair{0, 3}}) {
    const auto target = testing::random_target(rng, testing::TargetShape{8, 5});
    StreamParams p = params(50, 15);
    SketchHeuristic sketch({0.05, 2});
    AlergiaHeuristic alergia({0.05, 1});
    if (heur_kind == 1) p.sketches.reset();
    const Heuristic& heur = heur_kind == 0 ? static_cast<const Heuristic&>(sketch) : alergia;
    StreamLearner l(5, p, heur);
    for (int n = 0; n < 1500; ++n) {
      l.push(testing::sample(target, rng));
      const auto v = frontier_violation(l.hypothesis(), p.threshold);
      REQUIRE_MESSAGE(!v, *v);
      REQUIRE(within_memory_bound(l.hypothesis()));
    }
    CHECK(l.stats().merges > 0);
    (void)seed;
  }
}

TEST_CASE("stream mode rejects deep k-tails") {
  LearnConfig c;
  c.heuristic = HeuristicKind::Alergia;
  c.k = 2;
  CHECK_THROWS_AS(c.validate(), UsageError);
  c.mode = Mode::Batch;
  CHECK_NOTHROW(c.validate());
  CHECK_THROWS_AS(StreamLearner(2, params(0, 1), kSketch), UsageError);
}

TEST_CASE("finishing completes the white frontier unless told not to") {
  std::mt19937_64 rng(19);
  const auto target = testing::random_target(rng, testing::TargetShape{10, 5});
  const Dataset d = testing::sample_dataset(target, rng, 3000);

  StreamParams strict = params(500, 100);
  strict.complete_fringe = false;
  DatasetSource a(d);
  StatsRecord s;
  const Pdfa raw = run_stream(a, strict, kSketch, &s);
  REQUIRE(s.white > 0);
  bool dangling = false;
  for (StateId id : raw.live_states()) {
    for (const auto& [sym, e] : raw.state(id).outgoing) dangling = dangling || !e.target.valid();
  }
  CHECK(dangling);

  DatasetSource b(d);
  const Pdfa done = run_stream(b, params(500, 100), kSketch, &s);
  CHECK(s.white == 0);
  CHECK(s.blue == 0);
  for (StateId id : done.live_states()) {
    for (const auto& [sym, e] : done.state(id).outgoing) {
      REQUIRE(e.target.valid());
      REQUIRE_FALSE(done.state(e.target).retired);
    }
  }
  CHECK(normalization_error(done) <= 1e-9);
  // Fewer training sequences fall to the probability floor.
  std::size_t floored_raw = 0;
  std::size_t floored_done = 0;
  for (const auto& seq : d.sequences) {
    floored_raw += probability(raw, seq) <= 1e-30;
    floored_done += probability(done, seq) <= 1e-30;
  }
  CHECK(floored_done < floored_raw);
}
