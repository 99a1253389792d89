#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "sfl/types.hpp"

namespace sfl {

/// Shape and hashing seed of a count-min sketch.
///
/// `width` counts only the hashed columns; every sketch carries one extra
/// column (index `width`) that is reserved for sequence terminations.
struct CmsConfig {
  std::uint32_t width = 128;
  std::uint32_t depth = 4;
  std::uint64_t seed = 1;

  /// Throws UsageError unless width >= 2 and depth >= 1.
  void validate() const;

  friend bool operator==(const CmsConfig&, const CmsConfig&) = default;
};

/// Seed of row `row`, derived from `config.seed` by a splitmix64 step.
std::uint64_t row_seed(const CmsConfig& config, std::uint32_t row);

/// Hashed column of `symbol` in row `row`, in [0, width).
std::uint32_t hash_column(const CmsConfig& config, std::uint32_t row, Symbol symbol);

class CountMinSketch {
 public:
  CountMinSketch() = default;
  explicit CountMinSketch(const CmsConfig& config);

  void store(Symbol e);
  void store_termination();

  /// Row minimum over the hashed columns of `e`; never below the true count.
  std::uint64_t query(Symbol e) const;
  /// Exact: the termination column is never hashed into.
  std::uint64_t query_termination() const;

  /// Element-wise sum; configs must match.
  void add(const CountMinSketch& other);
  /// Element-wise difference; throws CorruptionError if any cell would go negative.
  void subtract(const CountMinSketch& other);

  /// Row `r` including the termination column (width + 1 cells).
  std::span<const std::uint64_t> row(std::uint32_t r) const;

  const CmsConfig& config() const { return config_; }
  std::uint64_t total() const { return total_; }
  std::uint32_t columns() const { return config_.width + 1; }
  bool empty() const { return total_ == 0; }

  void write_snapshot(std::ostream& out) const;
  static CountMinSketch read_snapshot(std::istream& in);

  friend bool operator==(const CountMinSketch&, const CountMinSketch&) = default;

 private:
  std::uint64_t& cell(std::uint32_t r, std::uint32_t c) { return counts_[static_cast<std::size_t>(r) * columns() + c]; }
  void bump(std::uint32_t r, std::uint32_t c);

  CmsConfig config_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

/// The per-state sketches, one per future depth. `at(m)` is the sketch of the
/// symbol m steps ahead, m in [1, n_futures].
class SketchSet {
 public:
  SketchSet() = default;
  SketchSet(const CmsConfig& config, std::uint32_t n_futures);

  std::uint32_t n_futures() const { return static_cast<std::uint32_t>(per_future_.size()); }
  const CmsConfig& config() const { return config_; }

  CountMinSketch& at(std::uint32_t m);
  const CountMinSketch& at(std::uint32_t m) const;

  void add(const SketchSet& other);
  void subtract(const SketchSet& other);

  /// Bytes used by counters: n_futures * depth * (width + 1) * 8.
  std::uint64_t counter_bytes() const;

  friend bool operator==(const SketchSet&, const SketchSet&) = default;

 private:
  void require_compatible(const SketchSet& other) const;

  CmsConfig config_;
  std::vector<CountMinSketch> per_future_;
};

}  // namespace sfl
