#include <doctest.h>

#include <random>
#include <set>

#include "sfl/merge_engine.hpp"
#include "sfl/sketch_ingest.hpp"

using namespace sfl;

namespace {

// A configuration where the symbols used below land in distinct columns in every row.
CmsConfig collision_free(std::initializer_list<Symbol> symbols) {
  CmsConfig c{64, 3, 1};
  auto ok = [&] {
    for (std::uint32_t r = 0; r < c.depth; ++r) {
      std::set<std::uint32_t> cols;
      for (Symbol s : symbols) cols.insert(hash_column(c, r, s));
      if (cols.size() != symbols.size()) return false;
    }
    return true;
  };
  while (!ok()) ++c.seed;
  return c;
}

}  // namespace

TEST_CASE("each sketch holds the symbol at its future depth") {
  // Two futures leave the same state: 2 4 3 and 3 15 1.
  SketchSet set(collision_free({1, 2, 3, 4, 15}), 3);
  record_futures(set, Sequence{2, 4, 3});
  record_futures(set, Sequence{3, 15, 1});

  CHECK(set.at(1).query(2) == 1);
  CHECK(set.at(1).query(3) == 1);
  CHECK(set.at(1).total() == 2);
  CHECK(set.at(2).query(4) == 1);
  CHECK(set.at(2).query(15) == 1);
  CHECK(set.at(2).query(2) == 0);
  CHECK(set.at(3).query(3) == 1);
  CHECK(set.at(3).query(1) == 1);
  for (std::uint32_t m = 1; m <= 3; ++m) CHECK(set.at(m).query_termination() == 0);
}

TEST_CASE("a sequence ending here records a termination at every depth") {
  SketchSet set(CmsConfig{}, 4);
  record_futures(set, Sequence{});
  for (std::uint32_t m = 1; m <= 4; ++m) {
    CHECK(set.at(m).query_termination() == 1);
    CHECK(set.at(m).total() == 1);
  }
}

TEST_CASE("short futures terminate beyond their end") {
  SketchSet set(CmsConfig{}, 2);
  record_futures(set, Sequence{5});
  CHECK(set.at(1).query(5) == 1);
  CHECK(set.at(1).query_termination() == 0);
  CHECK(set.at(2).query_termination() == 1);
}

TEST_CASE("every depth sees one event per pass and depth one bounds exact counts") {
  std::mt19937_64 rng(21);
  Dataset d;
  d.alphabet_size = 6;
  for (int i = 0; i < 400; ++i) {
    Sequence s(rng() % 7);
    for (auto& x : s) x = static_cast<Symbol>(rng() % 6);
    d.sequences.push_back(s);
  }
  const Pdfa h = build_apta(d, SketchShape{CmsConfig{8, 2, 5}, 3});
  for (StateId id : h.live_states()) {
    const State& s = h.state(id);
    const auto& set = *s.sketches;
    for (std::uint32_t m = 1; m <= 3; ++m) REQUIRE(set.at(m).total() == s.size);
    REQUIRE(set.at(1).query_termination() == s.termination_count);
    for (const auto& [a, e] : s.outgoing) REQUIRE(set.at(1).query(a) >= e.count);
  }
}
