#pragma once

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <exception>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "sfl/types.hpp"

namespace sfl {

/// Training or test sequences in Abbadingo/PAutomaC layout.
struct Dataset {
  std::uint32_t alphabet_size = 0;
  std::vector<Sequence> sequences;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

/// Target probabilities, one per test sequence.
struct SolutionFile {
  std::vector<double> probabilities;
};

/// Parses "N A" followed by N lines of "len s1 ... s_len". Errors carry the line number.
Dataset read_abbadingo(std::istream& in);
Dataset read_abbadingo_text(std::string_view text);
Dataset read_abbadingo_file(const std::filesystem::path& path);

void write_abbadingo(std::ostream& out, const Dataset& data);

/// Parses a count line followed by that many probabilities in [0, 1].
SolutionFile read_solution(std::istream& in);
SolutionFile read_solution_text(std::string_view text);
SolutionFile read_solution_file(const std::filesystem::path& path);

/// A source of sequences consumed one at a time.
class StreamSource {
 public:
  virtual ~StreamSource() = default;
  virtual std::uint32_t alphabet_size() const = 0;
  /// Next sequence, or nullopt when the source is exhausted.
  virtual std::optional<Sequence> next() = 0;
  /// Number of sequences handed out so far.
  virtual std::uint64_t position() const = 0;
};

/// Reads the Abbadingo layout line by line from any stream (a file or stdin)
/// without materialising the whole dataset. The header count is enforced at EOF.
class AbbadingoStreamSource final : public StreamSource {
 public:
  explicit AbbadingoStreamSource(std::istream& in);
  static std::unique_ptr<AbbadingoStreamSource> open(const std::filesystem::path& path);

  std::uint32_t alphabet_size() const override { return alphabet_size_; }
  std::optional<Sequence> next() override;
  std::uint64_t position() const override { return delivered_; }
  std::uint64_t declared_count() const { return declared_; }

 private:
  std::unique_ptr<std::istream> owned_;
  std::istream* in_;
  std::uint64_t declared_ = 0;
  std::uint32_t alphabet_size_ = 0;
  std::uint64_t delivered_ = 0;
  std::size_t line_ = 1;
};

/// Replays an in-memory dataset.
class DatasetSource final : public StreamSource {
 public:
  explicit DatasetSource(const Dataset& data) : data_(data) {}

  std::uint32_t alphabet_size() const override { return data_.alphabet_size; }
  std::optional<Sequence> next() override;
  std::uint64_t position() const override { return index_; }

 private:
  const Dataset& data_;
  std::size_t index_ = 0;
};

/// Pulls from an inner source on a producer thread through a bounded queue.
/// Errors raised by the producer are rethrown from next().
class QueuedStreamSource final : public StreamSource {
 public:
  QueuedStreamSource(std::unique_ptr<StreamSource> inner, std::size_t capacity);
  ~QueuedStreamSource() override;

  QueuedStreamSource(const QueuedStreamSource&) = delete;
  QueuedStreamSource& operator=(const QueuedStreamSource&) = delete;

  std::uint32_t alphabet_size() const override { return alphabet_size_; }
  std::optional<Sequence> next() override;
  std::uint64_t position() const override { return delivered_; }

 private:
  void produce();

  std::unique_ptr<StreamSource> inner_;
  std::uint32_t alphabet_size_;
  std::size_t capacity_;
  std::mutex mutex_;
  std::condition_variable not_full_;
  std::condition_variable not_empty_;
  std::deque<Sequence> queue_;
  bool done_ = false;
  bool stop_ = false;
  std::exception_ptr error_;
  std::uint64_t delivered_ = 0;
  std::thread producer_;
};

}  // namespace sfl
