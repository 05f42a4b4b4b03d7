#include "entrokey/unicode.hpp"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include "entrokey/error.hpp"

namespace entrokey::unicode {

char32_t next_code_point(std::string_view text, std::size_t& offset) {
  const auto* bytes = reinterpret_cast<const uint8_t*>(text.data());
  const auto length = static_cast<int32_t>(text.size());
  auto i = static_cast<int32_t>(offset);
  UChar32 c = 0;
  U8_NEXT(bytes, i, length, c);
  if (c < 0) {
    throw_data("invalid UTF-8 at byte " + std::to_string(offset));
  }
  offset = static_cast<std::size_t>(i);
  return static_cast<char32_t>(c);
}

std::vector<std::size_t> code_point_offsets(std::string_view text) {
  std::vector<std::size_t> offsets;
  offsets.reserve(text.size() + 1);
  std::size_t i = 0;
  while (i < text.size()) {
    offsets.push_back(i);
    next_code_point(text, i);
  }
  offsets.push_back(text.size());
  return offsets;
}

std::size_t code_point_count(std::string_view text) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < text.size(); ++n) next_code_point(text, i);
  return n;
}

bool is_whitespace(char32_t cp) { return u_isUWhiteSpace(static_cast<UChar32>(cp)) != 0; }

bool is_noise(char32_t cp) {
  if (is_whitespace(cp)) return true;
  const uint32_t mask = U_GET_GC_MASK(static_cast<UChar32>(cp));
  return (mask & (U_GC_P_MASK | U_GC_N_MASK | U_GC_Z_MASK | U_GC_S_MASK)) != 0;
}

std::string_view trim(std::string_view text) {
  std::size_t begin = 0;
  std::size_t end = text.size();
  while (begin < end) {
    std::size_t next = begin;
    if (!is_whitespace(next_code_point(text, next))) break;
    begin = next;
  }
  if (begin == end) return text.substr(begin, 0);
  // Walk backwards by scanning forward from begin and remembering the last
  // non-whitespace boundary.
  std::size_t last_end = begin;
  for (std::size_t i = begin; i < end;) {
    const char32_t cp = next_code_point(text, i);
    if (!is_whitespace(cp)) last_end = i;
  }
  return text.substr(begin, last_end - begin);
}

std::string remove_whitespace(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size();) {
    const std::size_t start = i;
    if (!is_whitespace(next_code_point(text, i))) out.append(text.substr(start, i - start));
  }
  return out;
}

std::vector<std::string> split_whitespace(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (std::size_t i = 0; i < text.size();) {
    const std::size_t start = i;
    if (is_whitespace(next_code_point(text, i))) {
      if (!current.empty()) tokens.push_back(std::move(current));
      current.clear();
    } else {
      current.append(text.substr(start, i - start));
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

}  // namespace entrokey::unicode
