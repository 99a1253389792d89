#include "sfl/cms.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "binary_io.hpp"
#include "sfl/error.hpp"

namespace sfl {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

void CmsConfig::validate() const {
  if (width < 2) throw UsageError("count-min sketch width must be >= 2");
  if (depth < 1) throw UsageError("count-min sketch depth must be >= 1");
}

std::uint64_t row_seed(const CmsConfig& config, std::uint32_t row) {
  return splitmix64(config.seed + 0x632BE59BD9B4E019ULL * (static_cast<std::uint64_t>(row) + 1));
}

std::uint32_t hash_column(const CmsConfig& config, std::uint32_t row, Symbol symbol) {
  return static_cast<std::uint32_t>(splitmix64(row_seed(config, row) ^ symbol) % config.width);
}

CountMinSketch::CountMinSketch(const CmsConfig& config) : config_(config) {
  config_.validate();
  counts_.assign(static_cast<std::size_t>(config_.depth) * columns(), 0);
}

void CountMinSketch::bump(std::uint32_t r, std::uint32_t c) {
  auto& v = cell(r, c);
  if (v == std::numeric_limits<std::uint64_t>::max()) throw CorruptionError("count-min sketch counter overflow");
  ++v;
}

void CountMinSketch::store(Symbol e) {
  for (std::uint32_t r = 0; r < config_.depth; ++r) bump(r, hash_column(config_, r, e));
  ++total_;
}

void CountMinSketch::store_termination() {
  for (std::uint32_t r = 0; r < config_.depth; ++r) bump(r, config_.width);
  ++total_;
}

std::uint64_t CountMinSketch::query(Symbol e) const {
  std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
  for (std::uint32_t r = 0; r < config_.depth; ++r) {
    best = std::min(best, counts_[static_cast<std::size_t>(r) * columns() + hash_column(config_, r, e)]);
  }
  return counts_.empty() ? 0 : best;
}

std::uint64_t CountMinSketch::query_termination() const { return counts_.empty() ? 0 : counts_[config_.width]; }

void CountMinSketch::add(const CountMinSketch& other) {
  if (config_ != other.config_) throw UsageError("cannot add count-min sketches with different configurations");
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    if (counts_[i] > std::numeric_limits<std::uint64_t>::max() - other.counts_[i]) {
      throw CorruptionError("count-min sketch counter overflow");
    }
    counts_[i] += other.counts_[i];
  }
  total_ += other.total_;
}

void CountMinSketch::subtract(const CountMinSketch& other) {
  if (config_ != other.config_) throw UsageError("cannot subtract count-min sketches with different configurations");
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    if (counts_[i] < other.counts_[i]) throw CorruptionError("count-min sketch subtraction went negative");
  }
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] -= other.counts_[i];
  total_ -= other.total_;
}

std::span<const std::uint64_t> CountMinSketch::row(std::uint32_t r) const {
  if (r >= config_.depth) throw UsageError("count-min sketch row out of range");
  return {counts_.data() + static_cast<std::size_t>(r) * columns(), columns()};
}

void CountMinSketch::write_snapshot(std::ostream& out) const {
  detail::write_magic(out, "CMS1");
  detail::write_le<std::uint32_t>(out, config_.width);
  detail::write_le<std::uint32_t>(out, config_.depth);
  detail::write_le<std::uint64_t>(out, config_.seed);
  for (auto v : counts_) detail::write_le<std::uint64_t>(out, v);
}

CountMinSketch CountMinSketch::read_snapshot(std::istream& in) {
  detail::expect_magic(in, "CMS1");
  CmsConfig config;
  config.width = detail::read_le<std::uint32_t>(in);
  config.depth = detail::read_le<std::uint32_t>(in);
  config.seed = detail::read_le<std::uint64_t>(in);
  try {
    config.validate();
  } catch (const UsageError& e) {
    throw InputError(std::string("invalid sketch snapshot: ") + e.what());
  }
  CountMinSketch sketch(config);
  for (auto& v : sketch.counts_) v = detail::read_le<std::uint64_t>(in);
  sketch.total_ = std::accumulate(sketch.counts_.begin(), sketch.counts_.begin() + sketch.columns(), std::uint64_t{0});
  for (std::uint32_t r = 1; r < config.depth; ++r) {
    auto row = sketch.row(r);
    if (std::accumulate(row.begin(), row.end(), std::uint64_t{0}) != sketch.total_) {
      throw InputError("invalid sketch snapshot: row sums differ");
    }
  }
  return sketch;
}

SketchSet::SketchSet(const CmsConfig& config, std::uint32_t n_futures) : config_(config) {
  if (n_futures < 1) throw UsageError("n_futures must be >= 1");
  per_future_.assign(n_futures, CountMinSketch(config));
}

CountMinSketch& SketchSet::at(std::uint32_t m) {
  if (m < 1 || m > per_future_.size()) throw UsageError("future index out of range");
  return per_future_[m - 1];
}

const CountMinSketch& SketchSet::at(std::uint32_t m) const {
  if (m < 1 || m > per_future_.size()) throw UsageError("future index out of range");
  return per_future_[m - 1];
}

void SketchSet::require_compatible(const SketchSet& other) const {
  if (config_ != other.config_ || per_future_.size() != other.per_future_.size()) {
    throw UsageError("sketch sets differ in configuration or n_futures");
  }
}

void SketchSet::add(const SketchSet& other) {
  require_compatible(other);
  for (std::size_t i = 0; i < per_future_.size(); ++i) per_future_[i].add(other.per_future_[i]);
}

void SketchSet::subtract(const SketchSet& other) {
  require_compatible(other);
  // Validate every depth first so a failure leaves the set untouched.
  for (std::size_t i = 0; i < per_future_.size(); ++i) {
    for (std::uint32_t r = 0; r < config_.depth; ++r) {
      auto mine = per_future_[i].row(r);
      auto theirs = other.per_future_[i].row(r);
      for (std::size_t c = 0; c < mine.size(); ++c) {
        if (mine[c] < theirs[c]) throw CorruptionError("sketch subtraction went negative");
      }
    }
  }
  for (std::size_t i = 0; i < per_future_.size(); ++i) per_future_[i].subtract(other.per_future_[i]);
}

std::uint64_t SketchSet::counter_bytes() const {
  return static_cast<std::uint64_t>(per_future_.size()) * config_.depth * (config_.width + 1) * sizeof(std::uint64_t);
}

}  // namespace sfl
