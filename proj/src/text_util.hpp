#pragma once

#include <charconv>
#include <string>

namespace cliquelab::detail {

// Shortest decimal form that round-trips to the same double; the one
// formatting used by every CSV and JSON export so reruns are byte-stable.
inline std::string format_double(double value) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

}  // namespace cliquelab::detail
