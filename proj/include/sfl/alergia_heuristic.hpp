#pragma once

#include "sfl/heuristic.hpp"

namespace sfl {

struct AlergiaParams {
  double alpha = 0.05;
  int k = 1;

  void validate() const;
};

/// Hoeffding test on the exact (termination, count(a)...) vectors of the two
/// states, repeated on same-symbol children down to depth k. A child missing
/// on either side contributes no evidence.
bool alergia_check(const Pdfa& model, const State& s1, const State& s2, double alpha, int k);

/// Shared evidence: sum of min(size1, size2) over the pairs compared down to depth k.
double alergia_score(const Pdfa& model, const State& s1, const State& s2, int k);

class AlergiaHeuristic final : public Heuristic {
 public:
  explicit AlergiaHeuristic(AlergiaParams params);

  bool consistency_check(const Pdfa& model, const State& red, const State& blue) const override;
  double assign_score(const Pdfa& model, const State& red, const State& blue) const override;
  int lookahead() const override { return params_.k; }
  std::string name() const override { return "alergia"; }

  const AlergiaParams& params() const { return params_; }

 private:
  AlergiaParams params_;
};

}  // namespace sfl
