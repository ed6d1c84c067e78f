#pragma once

// Byte-level text utilities shared by every module: word tokenization with
// byte spans, case folding, line handling and quote-prefix normalization.
// Everything operates on UTF-8 bytes; only ASCII letters are case-folded and
// bytes >= 0x80 are treated as word characters.

#include <algorithm>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace atdlab {

/// Half-open byte range [begin, end).
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  bool operator==(const Span&) const = default;
};

enum class TokenKind { word, punct };

struct Token {
  TokenKind kind;
  Span span;
  std::string_view text;
};

namespace text {

inline bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

inline bool is_word_byte(char c) {
  const auto u = static_cast<unsigned char>(c);
  return (u >= '0' && u <= '9') || (u >= 'a' && u <= 'z') || (u >= 'A' && u <= 'Z') || u >= 0x80;
}

inline char to_lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }
inline char to_upper(char c) { return (c >= 'a' && c <= 'z') ? static_cast<char>(c - 'a' + 'A') : c; }

inline std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), to_lower);
  return out;
}

inline bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (to_lower(a[i]) != to_lower(b[i])) return false;
  return true;
}

/// Splits text into word and single-byte punctuation tokens. A word is a run
/// of word bytes, optionally joined by inner apostrophes ("let's", "don't").
inline std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    if (is_space(s[i])) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (is_word_byte(s[i])) {
      while (i < s.size()) {
        if (is_word_byte(s[i])) {
          ++i;
        } else if (s[i] == '\'' && i + 1 < s.size() && is_word_byte(s[i + 1])) {
          i += 2;
        } else {
          break;
        }
      }
      out.push_back({TokenKind::word, {start, i}, s.substr(start, i - start)});
    } else {
      ++i;
      out.push_back({TokenKind::punct, {start, i}, s.substr(start, 1)});
    }
  }
  return out;
}

/// Lowercased word tokens with punctuation dropped.
inline std::vector<std::string> words(std::string_view s) {
  std::vector<std::string> out;
  for (const auto& t : tokenize(s))
    if (t.kind == TokenKind::word) out.push_back(lower(t.text));
  return out;
}

inline std::vector<std::string> split_words(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    const std::size_t start = i;
    while (i < s.size() && !is_space(s[i])) ++i;
    if (i > start) out.emplace_back(s.substr(start, i - start));
  }
  return out;
}

inline std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

inline bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), is_space);
}

/// Splits on '\n'. A trailing newline yields a trailing empty line, so
/// join_lines(split_lines(s)) == s for every s.
inline std::vector<std::string> split_lines(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == '\n') {
      out.emplace_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

inline std::string join_lines(const std::vector<std::string>& lines) { return join(lines, "\n"); }

inline std::string prefix_lines(std::string_view s, std::string_view prefix) {
  auto lines = split_lines(s);
  for (auto& l : lines) l.insert(0, prefix);
  return join_lines(lines);
}

/// Removes one level of quoting ("> " or a bare ">") from every line.
/// Returns false if some line carries no quote marker.
inline bool strip_quote_level(std::string_view s, std::string& out) {
  auto lines = split_lines(s);
  for (auto& l : lines) {
    if (l.rfind("> ", 0) == 0) {
      l.erase(0, 2);
    } else if (!l.empty() && l[0] == '>') {
      l.erase(0, 1);
    } else {
      return false;
    }
  }
  out = join_lines(lines);
  return true;
}

/// Canonical form used for cross-view comparison: LF line endings, quote
/// prefixes rewritten as "> " per level, trailing whitespace and trailing
/// blank lines removed.
inline std::string normalize(std::string_view s) {
  std::string lf;
  lf.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\r' && i + 1 < s.size() && s[i + 1] == '\n') continue;
    lf += s[i];
  }
  auto lines = split_lines(lf);
  for (auto& l : lines) {
    std::size_t depth = 0, i = 0;
    while (i < l.size() && (l[i] == '>' || l[i] == ' ' || l[i] == '\t')) {
      if (l[i] == '>') ++depth;
      ++i;
    }
    std::string body = depth ? l.substr(i) : l;
    while (!body.empty() && is_space(body.back())) body.pop_back();
    std::string canon;
    for (std::size_t d = 0; d < depth; ++d) canon += "> ";
    if (body.empty() && !canon.empty()) canon.pop_back();
    l = canon + body;
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return join_lines(lines);
}

/// Levenshtein distance over token sequences.
inline std::size_t edit_distance(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

/// Edit distance scaled by the longer sequence; 0 when both are empty.
inline double normalized_edit_distance(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  const std::size_t longest = std::max(a.size(), b.size());
  if (longest == 0) return 0.0;
  return static_cast<double>(edit_distance(a, b)) / static_cast<double>(longest);
}

}  // namespace text
}  // namespace atdlab
