#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace entrokey::unicode {

/// Byte offsets of every code point start in `text`, plus text.size() as a
/// sentinel. Invalid UTF-8 sequences are reported as data errors.
std::vector<std::size_t> code_point_offsets(std::string_view text);

std::size_t code_point_count(std::string_view text);

/// Decodes one code point starting at byte `offset`; advances offset.
char32_t next_code_point(std::string_view text, std::size_t& offset);

bool is_whitespace(char32_t cp);

/// True for general categories P*, N*, Z*, S* and for white space.
bool is_noise(char32_t cp);

std::string_view trim(std::string_view text);
std::string remove_whitespace(std::string_view text);
std::vector<std::string> split_whitespace(std::string_view text);

}  // namespace entrokey::unicode
