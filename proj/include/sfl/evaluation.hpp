#pragma once

#include <span>
#include <string>
#include <vector>

#include "sfl/data_io.hpp"
#include "sfl/pdfa.hpp"

namespace sfl {

/// PAutomaC perplexity 2^(-sum_s T(s) log2 C(s)). Candidate values are floored
/// at `floor`; both vectors are normalised over the test set.
double perplexity(std::span<const double> candidate, std::span<const double> target, double floor = 1e-30);

struct PerplexityReport {
  std::string scenario;
  std::string mode;
  std::string heuristic;
  std::string params;
  double candidate_perplexity = 0.0;
  double target_perplexity = 0.0;
  double error = 0.0;  // |candidate - target|
  double wall_ms = 0.0;
  std::uint64_t stored_states = 0;
  std::uint64_t sketch_bytes = 0;
};

/// Probabilities of every test sequence under a frozen model.
std::vector<double> sequence_probabilities(const Pdfa& model, const Dataset& test, const SmoothingPolicy& policy = {});

/// Scores `model` against the target probabilities; only the perplexity
/// fields of the report are filled in.
PerplexityReport evaluate_scenario(const Pdfa& model, const Dataset& test, const SolutionFile& solution,
                                   const SmoothingPolicy& policy = {});

std::string csv_header();
std::string csv_row(const PerplexityReport& r);
/// Quotes a field when it contains a comma or a double quote.
std::string csv_quote(const std::string& s);
/// Fixed six-decimal rendering used for every real-valued column.
std::string csv_format(double v);

}  // namespace sfl
