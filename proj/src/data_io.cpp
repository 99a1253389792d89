#include "sfl/data_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "sfl/error.hpp"

namespace sfl {
namespace {

std::vector<std::string_view> tokenize(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    const std::size_t start = i;
    while (i < line.size() && !is_space(line[i])) ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

template <typename T>
T parse_integer(std::string_view token, std::size_t line, const char* what) {
  T value{};
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw ParseError(line, std::string("expected non-negative integer for ") + what + ", got \"" + std::string(token) + "\"");
  }
  return value;
}

struct Header {
  std::uint64_t count = 0;
  std::uint32_t alphabet_size = 0;
};

Header parse_header(std::istream& in, std::size_t& line_no) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(1, "missing header \"N A\"");
  line_no = 1;
  auto tokens = tokenize(line);
  if (tokens.size() != 2) throw ParseError(1, "header must be \"N A\" (sequence count, alphabet size)");
  Header h;
  h.count = parse_integer<std::uint64_t>(tokens[0], 1, "sequence count");
  h.alphabet_size = parse_integer<std::uint32_t>(tokens[1], 1, "alphabet size");
  return h;
}

Sequence parse_sequence(const std::vector<std::string_view>& tokens, std::size_t line, std::uint32_t alphabet_size) {
  const auto len = parse_integer<std::uint64_t>(tokens[0], line, "sequence length");
  if (len != tokens.size() - 1) {
    throw ParseError(line, "declared length " + std::to_string(len) + ", found " + std::to_string(tokens.size() - 1) +
                               " symbols");
  }
  Sequence seq;
  seq.reserve(len);
  for (std::size_t i = 1; i < tokens.size(); ++i) {
    const auto s = parse_integer<Symbol>(tokens[i], line, "symbol");
    if (s >= alphabet_size) {
      throw ParseError(line, "symbol " + std::to_string(s) + " outside alphabet of size " + std::to_string(alphabet_size));
    }
    seq.push_back(s);
  }
  return seq;
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return in;
}

}  // namespace

Dataset read_abbadingo(std::istream& in) {
  AbbadingoStreamSource source(in);
  Dataset data;
  data.alphabet_size = source.alphabet_size();
  data.sequences.reserve(source.declared_count());
  while (auto seq = source.next()) data.sequences.push_back(std::move(*seq));
  return data;
}

Dataset read_abbadingo_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  return read_abbadingo(in);
}

Dataset read_abbadingo_file(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  try {
    return read_abbadingo(in);
  } catch (const ParseError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void write_abbadingo(std::ostream& out, const Dataset& data) {
  out << data.sequences.size() << ' ' << data.alphabet_size << '\n';
  for (const auto& seq : data.sequences) {
    out << seq.size();
    for (Symbol s : seq) out << ' ' << s;
    out << '\n';
  }
}

SolutionFile read_solution(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(1, "missing count line");
  auto header = tokenize(line);
  if (header.size() != 1) throw ParseError(1, "first line must hold the probability count");
  const auto count = parse_integer<std::uint64_t>(header[0], 1, "probability count");

  SolutionFile sol;
  sol.probabilities.reserve(count);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    auto tokens = tokenize(line);
    if (tokens.empty()) continue;
    if (tokens.size() != 1) throw ParseError(line_no, "expected one probability per line");
    if (sol.probabilities.size() == count) throw ParseError(line_no, "more probabilities than the declared " + std::to_string(count));
    double p = 0.0;
    auto tok = tokens[0];
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), p);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
      throw ParseError(line_no, "not a number: \"" + std::string(tok) + "\"");
    }
    if (!(p >= 0.0 && p <= 1.0)) throw ParseError(line_no, "probability " + std::string(tok) + " outside [0, 1]");
    sol.probabilities.push_back(p);
  }
  if (sol.probabilities.size() != count) {
    throw ParseError(line_no + 1, "declared " + std::to_string(count) + " probabilities, found " +
                                      std::to_string(sol.probabilities.size()));
  }
  return sol;
}

SolutionFile read_solution_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  return read_solution(in);
}

SolutionFile read_solution_file(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  try {
    return read_solution(in);
  } catch (const ParseError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

AbbadingoStreamSource::AbbadingoStreamSource(std::istream& in) : in_(&in) {
  const auto header = parse_header(*in_, line_);
  declared_ = header.count;
  alphabet_size_ = header.alphabet_size;
}

std::unique_ptr<AbbadingoStreamSource> AbbadingoStreamSource::open(const std::filesystem::path& path) {
  auto file = std::make_unique<std::ifstream>(path);
  if (!*file) throw InputError("cannot open " + path.string());
  auto source = std::make_unique<AbbadingoStreamSource>(*file);
  source->owned_ = std::move(file);
  return source;
}

std::optional<Sequence> AbbadingoStreamSource::next() {
  std::string line;
  while (std::getline(*in_, line)) {
    ++line_;
    auto tokens = tokenize(line);
    if (tokens.empty()) {
      if (delivered_ < declared_) throw ParseError(line_, "blank line where a sequence was expected");
      continue;
    }
    if (delivered_ == declared_) {
      throw ParseError(line_, "more sequences than the declared " + std::to_string(declared_));
    }
    auto seq = parse_sequence(tokens, line_, alphabet_size_);
    ++delivered_;
    return seq;
  }
  if (in_->bad()) throw InputError("read failure after line " + std::to_string(line_));
  if (delivered_ != declared_) {
    throw ParseError(line_ + 1, "declared " + std::to_string(declared_) + " sequences, found " + std::to_string(delivered_));
  }
  return std::nullopt;
}

std::optional<Sequence> DatasetSource::next() {
  if (index_ >= data_.sequences.size()) return std::nullopt;
  return data_.sequences[index_++];
}

QueuedStreamSource::QueuedStreamSource(std::unique_ptr<StreamSource> inner, std::size_t capacity)
    : inner_(std::move(inner)), alphabet_size_(inner_->alphabet_size()), capacity_(capacity == 0 ? 1 : capacity) {
  producer_ = std::thread([this] { produce(); });
}

QueuedStreamSource::~QueuedStreamSource() {
  {
    std::lock_guard lock(mutex_);
    stop_ = true;
  }
  not_full_.notify_all();
  if (producer_.joinable()) producer_.join();
}

void QueuedStreamSource::produce() {
  try {
    while (true) {
      auto seq = inner_->next();
      std::unique_lock lock(mutex_);
      if (!seq) break;
      not_full_.wait(lock, [&] { return queue_.size() < capacity_ || stop_; });
      if (stop_) return;
      queue_.push_back(std::move(*seq));
      lock.unlock();
      not_empty_.notify_one();
    }
  } catch (...) {
    std::lock_guard lock(mutex_);
    error_ = std::current_exception();
  }
  {
    std::lock_guard lock(mutex_);
    done_ = true;
  }
  not_empty_.notify_all();
}

std::optional<Sequence> QueuedStreamSource::next() {
  std::unique_lock lock(mutex_);
  not_empty_.wait(lock, [&] { return !queue_.empty() || done_; });
  if (!queue_.empty()) {
    Sequence seq = std::move(queue_.front());
    queue_.pop_front();
    ++delivered_;
    lock.unlock();
    not_full_.notify_one();
    return seq;
  }
  if (error_) std::rethrow_exception(error_);
  return std::nullopt;
}

}  // namespace sfl
