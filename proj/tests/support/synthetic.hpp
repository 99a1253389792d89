#pragma once

// Test-only generators: random target automata in the PAutomaC mould,
// samplers, exact probabilities, and random hypotheses for property tests.

#include <filesystem>
#include <random>
#include <vector>

#include "sfl/data_io.hpp"
#include "sfl/pdfa.hpp"

namespace sfl::testing {

/// A reference PDFA given by probabilities rather than counts.
struct TargetPdfa {
  std::uint32_t alphabet_size = 0;
  std::vector<std::vector<int>> next;             // [state][symbol] -> state or -1
  std::vector<std::vector<double>> symbol_prob;   // [state][symbol]
  std::vector<double> final_prob;                 // [state]
};

struct TargetShape {
  int states = 10;
  std::uint32_t alphabet_size = 4;
  double symbol_density = 0.6;  // chance that a symbol is allowed in a state
  double min_final = 0.05;
  double max_final = 0.35;
};

TargetPdfa random_target(std::mt19937_64& rng, const TargetShape& shape);
Sequence sample(const TargetPdfa& target, std::mt19937_64& rng, std::size_t max_length = 200);
double target_probability(const TargetPdfa& target, const Sequence& s);
Dataset sample_dataset(const TargetPdfa& target, std::mt19937_64& rng, std::size_t n);

/// Writes <id>.pautomac.train / .test / _solution.txt. The test set holds
/// `n_test` distinct sampled sequences.
void write_scenario(const std::filesystem::path& dir, int id, const TargetPdfa& target, std::mt19937_64& rng,
                    std::size_t n_train, std::size_t n_test);

/// Random prefix-tree hypothesis with at most `max_states` states.
Pdfa random_apta(std::mt19937_64& rng, std::size_t max_states, std::uint32_t alphabet_size,
                 std::optional<SketchShape> sketches);

}  // namespace sfl::testing
