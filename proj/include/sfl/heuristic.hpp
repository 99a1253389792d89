#pragma once

#include <string>

#include "sfl/pdfa.hpp"

namespace sfl {

/// Merge heuristic plugged into the red-blue search. Both procedures are pure
/// functions of the hypothesis; `model` gives access to descendants for
/// heuristics that look past the pair itself.
class Heuristic {
 public:
  virtual ~Heuristic() = default;

  virtual bool consistency_check(const Pdfa& model, const State& red, const State& blue) const = 0;
  virtual double assign_score(const Pdfa& model, const State& red, const State& blue) const = 0;

  /// How many transition levels below each state the heuristic inspects.
  /// Used to decide when a cached evaluation is stale.
  virtual int lookahead() const { return 0; }

  virtual std::string name() const = 0;
};

}  // namespace sfl
