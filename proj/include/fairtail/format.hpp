#ifndef FAIRTAIL_FORMAT_HPP_
#define FAIRTAIL_FORMAT_HPP_

#include <charconv>
#include <cmath>
#include <cstdint>
#include <string>

namespace fairtail {

/// Shortest round-trip decimal form of a double. std::to_chars output is
/// unique, which keeps report files byte-identical across runs.
inline std::string format_double(double value) {
  char buffer[32];
  auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

/// Counts are integral in raw data; print them without an exponent.
inline std::string format_count(double value) {
  if (std::floor(value) == value && std::fabs(value) < 9.007199254740992e15)
    return std::to_string(static_cast<std::int64_t>(value));
  return format_double(value);
}

}  // namespace fairtail

#endif  // FAIRTAIL_FORMAT_HPP_
