#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace parrot::utf8 {

inline constexpr char32_t kReplacement = 0xFFFD;

struct Decoded {
  char32_t cp;        // kReplacement when invalid
  std::size_t length; // bytes consumed, always >= 1
  bool valid;
};

// Decodes one code point at `pos`. Invalid input consumes the maximal
// ill-formed subpart, so every invalid sequence maps to one U+FFFD.
Decoded decode(std::string_view s, std::size_t pos) noexcept;

void append(std::string& out, char32_t cp);

bool is_valid(std::string_view s) noexcept;

// Number of Unicode scalar values; invalid bytes count as replacements.
std::size_t length(std::string_view s) noexcept;

bool is_upper(char32_t cp) noexcept;
bool is_alpha(char32_t cp) noexcept;
bool is_digit(char32_t cp) noexcept;

inline bool is_space(char c) noexcept {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

}  // namespace parrot::utf8
