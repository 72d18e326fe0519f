#include "plainscore/text.hpp"

#include <algorithm>
#include <iterator>
#include <map>

#include "plainscore/error.hpp"
#include "plainscore/numeric.hpp"
#include "utf8.hpp"

namespace plainscore {

using detail::decode_utf8;
using detail::is_ascii_digit;
using detail::is_space;
using detail::is_word_char;

namespace {

constexpr std::string_view kAbbreviations[] = {
    "e.g", "i.e", "vs", "dr", "mr", "mrs", "ms", "prof", "fig", "figs", "al", "approx",
    "cf", "ca", "ref", "refs", "eq", "vol", "pp", "st", "jr", "sr", "inc", "ltd", "resp", "viz",
};

bool is_terminator(char c) { return c == '.' || c == '?' || c == '!'; }

bool is_closer(char32_t cp) {
  return cp == ')' || cp == ']' || cp == '"' || cp == '\'' || cp == 0x2019 || cp == 0x201D;
}

bool starts_sentence(char32_t cp) {
  return (cp >= 'A' && cp <= 'Z') || is_ascii_digit(cp) || cp == '(' || cp == '[' || cp == '"' ||
         cp == '\'' || cp == 0x201C || cp == 0x2018 || (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7);
}

// Lowercased token ending right before the period at `dot`.
std::string word_before(std::string_view s, std::size_t dot) {
  std::size_t b = dot;
  while (b > 0 && !is_space(static_cast<unsigned char>(s[b - 1])) && s[b - 1] != '(' && s[b - 1] != '[') {
    --b;
  }
  return ascii_lower(s.substr(b, dot - b));
}

bool is_abbreviation(std::string_view s, std::size_t dot) {
  const std::string w = word_before(s, dot);
  return std::find(std::begin(kAbbreviations), std::end(kAbbreviations), w) != std::end(kAbbreviations);
}

std::pair<std::size_t, std::size_t> trimmed(std::string_view s, std::size_t b, std::size_t e) {
  while (b < e && is_space(static_cast<unsigned char>(s[b]))) {
    ++b;
  }
  while (e > b && is_space(static_cast<unsigned char>(s[e - 1]))) {
    --e;
  }
  return {b, e};
}

bool blank_line_at(std::string_view s, std::size_t i, std::size_t& after) {
  if (s[i] != '\n') {
    return false;
  }
  std::size_t k = i + 1;
  while (k < s.size() && (s[k] == ' ' || s[k] == '\t' || s[k] == '\r')) {
    ++k;
  }
  if (k < s.size() && s[k] == '\n') {
    after = k + 1;
    return true;
  }
  return false;
}

enum class WordMode { kWords, kFeatures };

std::vector<std::string> scan(std::string_view text, WordMode mode) {
  std::vector<std::string> out;
  std::string cur;
  std::size_t i = 0;
  char32_t prev = 0;
  auto flush = [&] {
    if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  };
  while (i < text.size()) {
    const auto cp = decode_utf8(text, i);
    if (is_word_char(cp.value)) {
      cur.append(text.substr(i, cp.length));
      prev = cp.value;
      i += cp.length;
      continue;
    }
    // Joiners only count between two word characters.
    if (!cur.empty() && i + cp.length < text.size()) {
      const auto next = decode_utf8(text, i + cp.length);
      const bool hyphen = cp.value == '-' && is_word_char(next.value);
      const bool numeric = (cp.value == '.' || cp.value == ',') && is_ascii_digit(prev) && is_ascii_digit(next.value);
      const bool apostrophe = (cp.value == '\'' || cp.value == 0x2019) && !is_ascii_digit(prev) &&
                              is_word_char(next.value) && !is_ascii_digit(next.value);
      if (hyphen || numeric || apostrophe) {
        cur.append(text.substr(i, cp.length));
        prev = cp.value;
        i += cp.length;
        continue;
      }
    }
    flush();
    if (mode == WordMode::kFeatures && !is_space(cp.value)) {
      out.emplace_back(text.substr(i, cp.length));
    }
    prev = cp.value;
    i += cp.length;
  }
  flush();
  return out;
}

bool is_vowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y';
}

bool is_ascii_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

std::size_t syllables_in_part(std::string_view part) {
  std::string w;
  for (char c : part) {
    if (is_ascii_alpha(c)) {
      w.push_back(static_cast<char>(c | 0x20));
    }
  }
  std::size_t groups = 0;
  bool in_group = false;
  for (char c : w) {
    const bool v = is_vowel(c);
    if (v && !in_group) {
      ++groups;
    }
    in_group = v;
  }
  const std::size_t n = w.size();
  if (n >= 2 && w[n - 1] == 'e' && !is_vowel(w[n - 2]) && groups > 0) {
    const bool consonant_le = n >= 3 && w[n - 2] == 'l' && !is_vowel(w[n - 3]);
    if (!consonant_le) {
      --groups;
    }
  }
  return std::max<std::size_t>(groups, 1);
}

}  // namespace

std::string ascii_lower(std::string_view text) {
  std::string out(text);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') {
      c = static_cast<char>(c | 0x20);
    }
  }
  return out;
}

std::string collapse_whitespace(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  std::size_t i = 0;
  while (i < text.size()) {
    const auto cp = decode_utf8(text, i);
    if (is_space(cp.value)) {
      pending_space = !out.empty();
    } else {
      if (pending_space) {
        out.push_back(' ');
        pending_space = false;
      }
      out.append(text.substr(i, cp.length));
    }
    i += cp.length;
  }
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> split_sentence_spans(std::string_view s) {
  std::vector<std::pair<std::size_t, std::size_t>> spans;
  std::size_t start = 0;
  auto emit = [&](std::size_t end) {
    auto [b, e] = trimmed(s, start, end);
    if (b < e) {
      spans.emplace_back(b, e - b);
    }
    start = end;
  };
  std::size_t i = 0;
  while (i < s.size()) {
    std::size_t after_blank = 0;
    if (blank_line_at(s, i, after_blank)) {
      emit(i);
      i = after_blank;
      start = i;
      continue;
    }
    if (!is_terminator(s[i])) {
      ++i;
      continue;
    }
    const std::size_t term = i;
    std::size_t j = i + 1;
    while (j < s.size()) {
      if (is_terminator(s[j])) {
        ++j;
        continue;
      }
      const auto cp = decode_utf8(s, j);
      if (!is_closer(cp.value)) {
        break;
      }
      j += cp.length;
    }
    if (j >= s.size()) {
      break;
    }
    if (!is_space(decode_utf8(s, j).value)) {
      i = j;
      continue;
    }
    std::size_t k = j;
    while (k < s.size()) {
      const auto cp = decode_utf8(s, k);
      if (!is_space(cp.value)) {
        break;
      }
      k += cp.length;
    }
    if (k >= s.size()) {
      break;
    }
    const bool abbreviation = s[term] == '.' && j == term + 1 && is_abbreviation(s, term);
    if (starts_sentence(decode_utf8(s, k).value) && !abbreviation) {
      emit(j);
    }
    i = j;
  }
  emit(s.size());
  return spans;
}

std::vector<std::string> split_sentences(std::string_view document) {
  std::vector<std::string> out;
  for (auto [off, len] : split_sentence_spans(document)) {
    out.emplace_back(document.substr(off, len));
  }
  return out;
}

std::vector<std::string> tokenize_words(std::string_view text) { return scan(text, WordMode::kWords); }

std::vector<std::string> tokenize_lower(std::string_view text) {
  auto toks = scan(text, WordMode::kWords);
  for (auto& t : toks) {
    t = ascii_lower(t);
  }
  return toks;
}

std::vector<std::string> tokenize_features(std::string_view text) { return scan(text, WordMode::kFeatures); }

std::size_t count_syllables(std::string_view word) {
  std::size_t total = 0;
  std::size_t b = 0;
  while (b <= word.size()) {
    auto e = word.find('-', b);
    if (e == std::string_view::npos) {
      e = word.size();
    }
    if (e > b) {
      total += syllables_in_part(word.substr(b, e - b));
    }
    b = e + 1;
  }
  return std::max<std::size_t>(total, 1);
}

std::size_t count_alnum_chars(std::string_view word) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < word.size();) {
    const auto cp = decode_utf8(word, i);
    n += is_word_char(cp.value) ? 1 : 0;
    i += cp.length;
  }
  return n;
}

TextStats compute_stats(std::string_view text) {
  TextStats st;
  st.n_sentences = split_sentence_spans(text).size();
  for (const auto& w : tokenize_words(text)) {
    ++st.n_words;
    st.n_syllables += count_syllables(w);
    st.n_chars += count_alnum_chars(w);
  }
  return st;
}

namespace {
void require_readable(const TextStats& s) {
  if (s.n_sentences == 0 || s.n_words == 0) {
    throw Error(ErrorKind::kDegenerateText, "readability needs at least one sentence and one word (sentences=" +
                                                std::to_string(s.n_sentences) + ", words=" + std::to_string(s.n_words) + ")");
  }
}
}  // namespace

double flesch_kincaid(const TextStats& s) {
  require_readable(s);
  const double words = static_cast<double>(s.n_words);
  return 0.39 * (words / static_cast<double>(s.n_sentences)) + 11.8 * (static_cast<double>(s.n_syllables) / words) - 15.59;
}

double ari(const TextStats& s) {
  require_readable(s);
  const double words = static_cast<double>(s.n_words);
  return 4.71 * (static_cast<double>(s.n_chars) / words) + 0.5 * (words / static_cast<double>(s.n_sentences)) - 21.43;
}

double SparseVector::sum() const {
  CompensatedSum acc;
  for (const auto& [id, v] : entries) {
    acc.add(v);
  }
  return acc.value();
}

double SparseVector::dot(std::span<const double> dense) const {
  double s = 0.0;
  for (const auto& [id, v] : entries) {
    s += dense[static_cast<std::size_t>(id)] * v;
  }
  return s;
}

BagOfWords bow_vector(std::span<const std::string> tokens, const TokenVocab& vocab) {
  if (vocab.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "bag-of-words needs a non-empty vocabulary");
  }
  BagOfWords bow;
  std::map<TokenId, std::size_t> counts;
  std::size_t in_vocab = 0;
  for (const auto& t : tokens) {
    ++bow.n_tokens;
    if (auto id = vocab.find(t)) {
      ++counts[*id];
      ++in_vocab;
    } else {
      ++bow.n_oov;
    }
  }
  if (in_vocab == 0) {
    throw Error(ErrorKind::kAllOOV, "no token of the text is in the vocabulary (" + std::to_string(bow.n_tokens) + " tokens)");
  }
  bow.vector.entries.reserve(counts.size());
  for (auto [id, c] : counts) {
    bow.vector.entries.emplace_back(id, static_cast<double>(c) / static_cast<double>(in_vocab));
  }
  return bow;
}

BagOfWords bow_vector(std::string_view text, const TokenVocab& vocab) {
  const auto tokens = tokenize_features(text);
  return bow_vector(tokens, vocab);
}

}  // namespace plainscore
