#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

namespace sfl {

/// Index into the alphabet, always < alphabet_size.
using Symbol = std::uint32_t;
using Sequence = std::vector<Symbol>;

/// Creation-ordered handle of a hypothesis state. Never reused within a run.
class StateId {
 public:
  constexpr StateId() = default;
  constexpr explicit StateId(std::uint32_t index) : index_(index) {}

  static constexpr StateId none() { return StateId(); }

  constexpr std::uint32_t index() const { return index_; }
  constexpr bool valid() const { return index_ != kInvalid; }

  friend constexpr auto operator<=>(StateId, StateId) = default;

 private:
  static constexpr std::uint32_t kInvalid = std::numeric_limits<std::uint32_t>::max();
  std::uint32_t index_ = kInvalid;
};

enum class Color : std::uint8_t { Red = 0, Blue = 1, White = 2 };

const char* to_string(Color c);

}  // namespace sfl

template <>
struct std::hash<sfl::StateId> {
  std::size_t operator()(sfl::StateId id) const noexcept { return std::hash<std::uint32_t>{}(id.index()); }
};
