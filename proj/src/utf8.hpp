#pragma once

#include <cstddef>
#include <string_view>

namespace plainscore::detail {

struct CodePoint {
  char32_t value;
  std::size_t length;  // bytes consumed, >= 1
};

/// Decodes one code point at `pos`; malformed input yields U+FFFD with length 1.
CodePoint decode_utf8(std::string_view s, std::size_t pos);

bool is_space(char32_t cp);
/// Letters and digits, approximated for non-ASCII by excluding the common
/// punctuation and symbol blocks.
bool is_word_char(char32_t cp);
bool is_ascii_digit(char32_t cp);

}  // namespace plainscore::detail
