#include "sfl/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "sfl/error.hpp"

namespace sfl {

double perplexity(std::span<const double> candidate, std::span<const double> target, double floor) {
  if (candidate.size() != target.size()) {
    throw InputError("candidate has " + std::to_string(candidate.size()) + " probabilities, target has " +
                     std::to_string(target.size()));
  }
  if (candidate.empty()) throw InputError("empty test set");
  if (std::all_of(candidate.begin(), candidate.end(), [](double p) { return p == 0.0; })) {
    throw InputError("candidate assigns zero probability to every test sequence");
  }
  double target_sum = 0.0;
  for (double t : target) {
    if (!(t >= 0.0)) throw InputError("negative or NaN target probability");
    target_sum += t;
  }
  if (target_sum <= 0.0) throw InputError("target probabilities sum to zero");

  double candidate_sum = 0.0;
  for (double c : candidate) candidate_sum += std::max(c, floor);

  double cross_entropy = 0.0;
  for (std::size_t i = 0; i < candidate.size(); ++i) {
    const double t = target[i] / target_sum;
    if (t == 0.0) continue;
    cross_entropy += t * std::log2(std::max(candidate[i], floor) / candidate_sum);
  }
  return std::exp2(-cross_entropy);
}

std::vector<double> sequence_probabilities(const Pdfa& model, const Dataset& test, const SmoothingPolicy& policy) {
  std::vector<double> out;
  out.reserve(test.sequences.size());
  for (const auto& seq : test.sequences) out.push_back(probability(model, seq, policy));
  return out;
}

PerplexityReport evaluate_scenario(const Pdfa& model, const Dataset& test, const SolutionFile& solution,
                                   const SmoothingPolicy& policy) {
  if (test.sequences.size() != solution.probabilities.size()) {
    throw InputError("test set has " + std::to_string(test.sequences.size()) + " sequences, solution has " +
                     std::to_string(solution.probabilities.size()) + " probabilities");
  }
  const auto candidate = sequence_probabilities(model, test, policy);
  PerplexityReport r;
  r.candidate_perplexity = perplexity(candidate, solution.probabilities, policy.floor);
  r.target_perplexity = perplexity(solution.probabilities, solution.probabilities, policy.floor);
  r.error = std::abs(r.candidate_perplexity - r.target_perplexity);
  return r;
}

std::string csv_header() {
  return "scenario,mode,heuristic,params,candidate_perplexity,target_perplexity,error,wall_ms,stored_states,sketch_bytes";
}

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string csv_format(double v) { return num(v); }

std::string csv_row(const PerplexityReport& r) {
  std::ostringstream out;
  out << csv_quote(r.scenario) << ',' << r.mode << ',' << r.heuristic << ',' << csv_quote(r.params) << ','
      << num(r.candidate_perplexity) << ',' << num(r.target_perplexity) << ',' << num(r.error) << ','
      << num(r.wall_ms) << ',' << r.stored_states << ',' << r.sketch_bytes;
  return out.str();
}

}  // namespace sfl
