#include "utf8.hpp"

namespace plainscore::detail {

CodePoint decode_utf8(std::string_view s, std::size_t pos) {
  const auto b0 = static_cast<unsigned char>(s[pos]);
  if (b0 < 0x80) {
    return {b0, 1};
  }
  std::size_t len = 0;
  char32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    return {0xFFFD, 1};
  }
  if (pos + len > s.size()) {
    return {0xFFFD, 1};
  }
  for (std::size_t k = 1; k < len; ++k) {
    const auto b = static_cast<unsigned char>(s[pos + k]);
    if ((b & 0xC0) != 0x80) {
      return {0xFFFD, 1};
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  return {cp, len};
}

bool is_space(char32_t cp) {
  switch (cp) {
    case ' ': case '\t': case '\n': case '\r': case '\f': case '\v':
    case 0xA0: case 0x202F: case 0x205F: case 0x3000: case 0xFEFF:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200B;
  }
}

bool is_ascii_digit(char32_t cp) { return cp >= '0' && cp <= '9'; }

bool is_word_char(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= '0' && cp <= '9') || (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z');
  }
  if (is_space(cp)) {
    return false;
  }
  if (cp >= 0xA1 && cp <= 0xBF && cp != 0xB5 && cp != 0xB2 && cp != 0xB3 && cp != 0xB9) {
    return false;  // Latin-1 punctuation and symbols; keep micro sign and superscripts
  }
  if (cp == 0xD7 || cp == 0xF7) {
    return false;
  }
  if (cp >= 0x2010 && cp <= 0x2BFF) {
    return false;  // general punctuation, currency, letterlike, arrows, math operators, ...
  }
  if (cp >= 0x3000 && cp <= 0x303F) {
    return false;
  }
  if (cp >= 0xFE30 && cp <= 0xFE4F) {
    return false;
  }
  return true;
}

}  // namespace plainscore::detail
