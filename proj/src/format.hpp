#pragma once

#include <array>
#include <charconv>
#include <string>

namespace steinerlab::detail {

// Shortest decimal that reads back to the same double.
inline std::string fmt_double(double v) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return {buf.data(), res.ptr};
}

inline std::string fmt_fixed(double v, int precision) {
  std::array<char, 64> buf{};
  const auto res =
      std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::fixed, precision);
  return {buf.data(), res.ptr};
}

}  // namespace steinerlab::detail
