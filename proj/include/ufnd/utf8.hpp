#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ufnd::utf8 {

// Malformed sequences decode to U+FFFD.
std::u32string decode(std::string_view text);
std::string encode(std::u32string_view code_points);
void append(std::string& out, char32_t code_point);

bool is_whitespace(char32_t code_point);

std::string trim(std::string_view text);

// "U+064A" or "064A" -> 0x064A. Throws ConfigError on bad input.
char32_t parse_code_point(std::string_view token);
std::string format_code_point(char32_t code_point);

}  // namespace ufnd::utf8
