#pragma once

#include <charconv>
#include <cstdio>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "entrokey/error.hpp"

namespace entrokey::detail {

/// Shortest decimal that round-trips to the same double.
inline std::string shortest(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

inline std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

inline std::string significant17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline double parse_double(std::string_view text, std::string_view what) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto r = std::from_chars(text.data(), end, v);
  if (r.ec != std::errc() || r.ptr != end) {
    throw_data("cannot parse " + std::string(what) + " from \"" + std::string(text) + "\"");
  }
  return v;
}

template <typename Int>
Int parse_int(std::string_view text, std::string_view what) {
  Int v{};
  const auto* end = text.data() + text.size();
  const auto r = std::from_chars(text.data(), end, v);
  if (r.ec != std::errc() || r.ptr != end) {
    throw_data("cannot parse " + std::string(what) + " from \"" + std::string(text) + "\"");
  }
  return v;
}

inline std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(line.substr(start));
      return parts;
    }
    parts.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace entrokey::detail
