#include "ufnd/utf8.hpp"

#include "ufnd/types.hpp"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include <cctype>
#include <charconv>
#include <cstdio>

namespace ufnd {

std::string_view label_name(Label label) { return label == Label::Fake ? "Fake" : "Real"; }

std::optional<Label> parse_label(std::string_view token) {
  std::string lower;
  for (char c : token) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (lower == "fake") return Label::Fake;
  if (lower == "real") return Label::Real;
  return std::nullopt;
}

std::string_view split_name(Split split) {
  switch (split) {
    case Split::Train: return "train";
    case Split::Test: return "test";
    case Split::Unlabeled: return "unlabeled";
  }
  return "unknown";
}

std::optional<Split> parse_split(std::string_view token) {
  if (token == "train") return Split::Train;
  if (token == "test") return Split::Test;
  if (token == "unlabeled") return Split::Unlabeled;
  return std::nullopt;
}

}  // namespace ufnd

namespace ufnd::utf8 {

std::u32string decode(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  const auto* bytes = reinterpret_cast<const uint8_t*>(text.data());
  const auto length = static_cast<int32_t>(text.size());
  int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(bytes, i, length, c);
    out.push_back(c < 0 ? U'�' : static_cast<char32_t>(c));
  }
  return out;
}

void append(std::string& out, char32_t code_point) {
  uint8_t buf[U8_MAX_LENGTH];
  int32_t n = 0;
  UBool error = false;
  U8_APPEND(buf, n, U8_MAX_LENGTH, static_cast<UChar32>(code_point), error);
  if (error) {
    n = 0;
    U8_APPEND_UNSAFE(buf, n, 0xFFFD);
  }
  out.append(reinterpret_cast<const char*>(buf), static_cast<size_t>(n));
}

std::string encode(std::u32string_view code_points) {
  std::string out;
  out.reserve(code_points.size() * 2);
  for (char32_t c : code_points) append(out, c);
  return out;
}

bool is_whitespace(char32_t code_point) { return u_isUWhiteSpace(static_cast<UChar32>(code_point)); }

std::string trim(std::string_view text) {
  const auto cps = decode(text);
  size_t begin = 0;
  size_t end = cps.size();
  while (begin < end && is_whitespace(cps[begin])) ++begin;
  while (end > begin && is_whitespace(cps[end - 1])) --end;
  return encode(std::u32string_view(cps).substr(begin, end - begin));
}

char32_t parse_code_point(std::string_view token) {
  if (token.starts_with("U+") || token.starts_with("u+")) token.remove_prefix(2);
  unsigned value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value, 16);
  if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size() || value > 0x10FFFF) {
    throw ConfigError("invalid code point '" + std::string(token) + "'");
  }
  return static_cast<char32_t>(value);
}

std::string format_code_point(char32_t code_point) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "U+%04X", static_cast<unsigned>(code_point));
  return buf;
}

}  // namespace ufnd::utf8
