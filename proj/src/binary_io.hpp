#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string_view>

#include "sfl/error.hpp"

namespace sfl::detail {

template <typename T>
void write_le(std::ostream& out, T value) {
  std::array<char, sizeof(T)> bytes{};
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    bytes[i] = static_cast<char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xFF);
  }
  out.write(bytes.data(), bytes.size());
}

template <typename T>
T read_le(std::istream& in) {
  std::array<unsigned char, sizeof(T)> bytes{};
  in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  if (!in) throw InputError("unexpected end of binary data");
  std::uint64_t value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) value |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  return static_cast<T>(value);
}

inline void write_magic(std::ostream& out, std::string_view magic) { out.write(magic.data(), magic.size()); }

inline void expect_magic(std::istream& in, std::string_view magic) {
  std::array<char, 8> got{};
  in.read(got.data(), magic.size());
  if (!in || std::string_view(got.data(), magic.size()) != magic) {
    throw InputError("bad magic, expected \"" + std::string(magic) + "\"");
  }
}

}  // namespace sfl::detail
