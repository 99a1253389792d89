#pragma once

#include <cstdint>
#include <span>

#include "sfl/heuristic.hpp"

namespace sfl {

struct SketchHeuristicParams {
  double alpha = 0.05;
  std::uint32_t n_futures = 2;

  void validate() const;
};

/// sqrt(ln(2 / alpha) / 2) * (1/sqrt(n1) + 1/sqrt(n2)).
double hoeffding_bound(double n1, double n2, double alpha);

/// True iff every column's relative frequencies differ by less than the
/// Hoeffding bound. A row without mass is no evidence and always passes.
bool hoeffding_row_check(std::span<const std::uint64_t> row1, std::span<const std::uint64_t> row2, double alpha);

/// Cosine similarity; 1 when both rows are zero, 0 when exactly one is.
double cosine_similarity(std::span<const std::uint64_t> row1, std::span<const std::uint64_t> row2);

/// Compares corresponding sketch rows at every future depth.
class SketchHeuristic final : public Heuristic {
 public:
  explicit SketchHeuristic(SketchHeuristicParams params);

  bool consistency_check(const Pdfa& model, const State& red, const State& blue) const override;
  /// Sum over depths of the row-averaged cosine similarity, in [0, n_futures].
  double assign_score(const Pdfa& model, const State& red, const State& blue) const override;
  std::string name() const override { return "sketch"; }

  const SketchHeuristicParams& params() const { return params_; }

 private:
  void require_sketches(const State& red, const State& blue) const;

  SketchHeuristicParams params_;
};

}  // namespace sfl
