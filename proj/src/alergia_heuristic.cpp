#include "sfl/alergia_heuristic.hpp"

#include <algorithm>
#include <cmath>

#include "sfl/error.hpp"
#include "sfl/sketch_heuristic.hpp"

namespace sfl {
namespace {

bool states_consistent(const State& s1, const State& s2, double alpha) {
  if (s1.size == 0 || s2.size == 0) return true;
  const double n1 = static_cast<double>(s1.size);
  const double n2 = static_cast<double>(s2.size);
  const double bound = hoeffding_bound(n1, n2, alpha);
  auto differs = [&](std::uint64_t x, std::uint64_t y) {
    return !(std::abs(static_cast<double>(x) / n1 - static_cast<double>(y) / n2) < bound);
  };
  if (differs(s1.termination_count, s2.termination_count)) return false;

  // Walk both sorted symbol maps; a symbol absent on one side counts as zero.
  auto i = s1.outgoing.begin();
  auto j = s2.outgoing.begin();
  while (i != s1.outgoing.end() || j != s2.outgoing.end()) {
    if (j == s2.outgoing.end() || (i != s1.outgoing.end() && i->first < j->first)) {
      if (differs(i->second.count, 0)) return false;
      ++i;
    } else if (i == s1.outgoing.end() || j->first < i->first) {
      if (differs(0, j->second.count)) return false;
      ++j;
    } else {
      if (differs(i->second.count, j->second.count)) return false;
      ++i;
      ++j;
    }
  }
  return true;
}

template <typename Visit>
bool for_each_child_pair(const Pdfa& model, const State& s1, const State& s2, Visit&& visit) {
  for (const auto& [a, e1] : s1.outgoing) {
    if (!e1.target.valid()) continue;
    const Edge* e2 = s2.edge(a);
    if (e2 == nullptr || !e2->target.valid()) continue;
    if (!visit(model.state(e1.target), model.state(e2->target))) return false;
  }
  return true;
}

}  // namespace

void AlergiaParams::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw UsageError("alpha must lie in (0, 1)");
  if (k < 0) throw UsageError("k must be >= 0");
}

bool alergia_check(const Pdfa& model, const State& s1, const State& s2, double alpha, int k) {
  if (!states_consistent(s1, s2, alpha)) return false;
  if (k <= 0) return true;
  return for_each_child_pair(model, s1, s2, [&](const State& c1, const State& c2) {
    return alergia_check(model, c1, c2, alpha, k - 1);
  });
}

double alergia_score(const Pdfa& model, const State& s1, const State& s2, int k) {
  double score = static_cast<double>(std::min(s1.size, s2.size));
  if (k <= 0) return score;
  for_each_child_pair(model, s1, s2, [&](const State& c1, const State& c2) {
    score += alergia_score(model, c1, c2, k - 1);
    return true;
  });
  return score;
}

AlergiaHeuristic::AlergiaHeuristic(AlergiaParams params) : params_(params) { params_.validate(); }

bool AlergiaHeuristic::consistency_check(const Pdfa& model, const State& red, const State& blue) const {
  return alergia_check(model, red, blue, params_.alpha, params_.k);
}

double AlergiaHeuristic::assign_score(const Pdfa& model, const State& red, const State& blue) const {
  return alergia_score(model, red, blue, params_.k);
}

}  // namespace sfl
