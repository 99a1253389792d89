#include "sfl/sketch_heuristic.hpp"

#include <cmath>

#include "sfl/error.hpp"

namespace sfl {

void SketchHeuristicParams::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw UsageError("alpha must lie in (0, 1)");
  if (n_futures < 1) throw UsageError("n_futures must be >= 1");
}

double hoeffding_bound(double n1, double n2, double alpha) {
  return std::sqrt(0.5 * std::log(2.0 / alpha)) * (1.0 / std::sqrt(n1) + 1.0 / std::sqrt(n2));
}

bool hoeffding_row_check(std::span<const std::uint64_t> row1, std::span<const std::uint64_t> row2, double alpha) {
  if (row1.size() != row2.size()) throw UsageError("rows differ in length");
  double n1 = 0.0;
  double n2 = 0.0;
  for (auto v : row1) n1 += static_cast<double>(v);
  for (auto v : row2) n2 += static_cast<double>(v);
  if (n1 == 0.0 || n2 == 0.0) return true;

  const double bound = hoeffding_bound(n1, n2, alpha);
  for (std::size_t i = 0; i < row1.size(); ++i) {
    if (row1[i] == 0 && row2[i] == 0) continue;
    const double diff = std::abs(static_cast<double>(row1[i]) / n1 - static_cast<double>(row2[i]) / n2);
    if (!(diff < bound)) return false;
  }
  return true;
}

double cosine_similarity(std::span<const std::uint64_t> row1, std::span<const std::uint64_t> row2) {
  if (row1.size() != row2.size()) throw UsageError("rows differ in length");
  double dot = 0.0;
  double norm1 = 0.0;
  double norm2 = 0.0;
  for (std::size_t i = 0; i < row1.size(); ++i) {
    const double x = static_cast<double>(row1[i]);
    const double y = static_cast<double>(row2[i]);
    dot += x * y;
    norm1 += x * x;
    norm2 += y * y;
  }
  if (norm1 == 0.0 && norm2 == 0.0) return 1.0;
  if (norm1 == 0.0 || norm2 == 0.0) return 0.0;
  return dot / (std::sqrt(norm1) * std::sqrt(norm2));
}

SketchHeuristic::SketchHeuristic(SketchHeuristicParams params) : params_(params) { params_.validate(); }

void SketchHeuristic::require_sketches(const State& red, const State& blue) const {
  if (!red.sketches || !blue.sketches) throw UsageError("sketch heuristic needs states with sketches");
  if (red.sketches->config() != blue.sketches->config()) throw UsageError("sketch configurations differ");
  if (red.sketches->n_futures() != params_.n_futures || blue.sketches->n_futures() != params_.n_futures) {
    throw UsageError("sketch sets do not match the configured n_futures");
  }
}

bool SketchHeuristic::consistency_check(const Pdfa&, const State& red, const State& blue) const {
  require_sketches(red, blue);
  const auto depth = red.sketches->config().depth;
  for (std::uint32_t m = 1; m <= params_.n_futures; ++m) {
    const auto& a = red.sketches->at(m);
    const auto& b = blue.sketches->at(m);
    if (a.empty() || b.empty()) continue;
    for (std::uint32_t r = 0; r < depth; ++r) {
      if (!hoeffding_row_check(a.row(r), b.row(r), params_.alpha)) return false;
    }
  }
  return true;
}

double SketchHeuristic::assign_score(const Pdfa&, const State& red, const State& blue) const {
  require_sketches(red, blue);
  const auto depth = red.sketches->config().depth;
  double score = 0.0;
  for (std::uint32_t m = 1; m <= params_.n_futures; ++m) {
    const auto& a = red.sketches->at(m);
    const auto& b = blue.sketches->at(m);
    double rows = 0.0;
    for (std::uint32_t r = 0; r < depth; ++r) rows += cosine_similarity(a.row(r), b.row(r));
    score += rows / depth;
  }
  return score;
}

}  // namespace sfl
