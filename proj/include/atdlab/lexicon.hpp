#pragma once

// Rule pack data model: strategy labels, politeness markers, strategy
// templates. Markers are literal word phrases (case-insensitive) with at most
// one single-word wildcard; matching is leftmost-longest without overlap.

#include <algorithm>
#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "atdlab/error.hpp"
#include "atdlab/text.hpp"

namespace atdlab {

/// The four politeness strategies, ordered least to most polite.
enum class Strategy : int {
  bald_on_record = 0,
  positive = 1,
  negative = 2,
  off_record = 3,
};

inline constexpr std::array<Strategy, 4> kAllStrategies = {
    Strategy::bald_on_record, Strategy::positive, Strategy::negative, Strategy::off_record};

inline constexpr int rank(Strategy s) { return static_cast<int>(s); }

inline Strategy strategy_from_rank(int r) {
  if (r < 0 || r > 3) throw InputError("strategy rank out of range: " + std::to_string(r));
  return static_cast<Strategy>(r);
}

inline std::string_view strategy_name(Strategy s) {
  switch (s) {
    case Strategy::bald_on_record: return "bald_on_record";
    case Strategy::positive: return "positive";
    case Strategy::negative: return "negative";
    case Strategy::off_record: return "off_record";
  }
  return "?";
}

inline std::optional<Strategy> try_parse_strategy(std::string_view name) {
  for (Strategy s : kAllStrategies)
    if (strategy_name(s) == name) return s;
  return std::nullopt;
}

inline Strategy parse_strategy(std::string_view name) {
  if (auto s = try_parse_strategy(name)) return *s;
  throw InputError("unknown strategy '" + std::string(name) + "'");
}

enum class MarkerCategory { address, hedge, deference, solidarity, urgency, hint, request_core };

inline constexpr std::array<std::pair<MarkerCategory, std::string_view>, 7> kCategoryNames = {{
    {MarkerCategory::address, "address"},
    {MarkerCategory::hedge, "hedge"},
    {MarkerCategory::deference, "deference"},
    {MarkerCategory::solidarity, "solidarity"},
    {MarkerCategory::urgency, "urgency"},
    {MarkerCategory::hint, "hint"},
    {MarkerCategory::request_core, "request-core"},
}};

inline std::string_view category_name(MarkerCategory c) {
  for (const auto& [cat, name] : kCategoryNames)
    if (cat == c) return name;
  return "?";
}

inline std::optional<MarkerCategory> try_parse_category(std::string_view name) {
  for (const auto& [cat, n] : kCategoryNames)
    if (n == name) return cat;
  return std::nullopt;
}

inline constexpr std::size_t kMaxPatternWords = 12;
inline constexpr std::string_view kWildcard = "*";

struct Marker {
  std::string id;
  MarkerCategory category = MarkerCategory::hedge;
  Strategy strategy = Strategy::bald_on_record;
  std::string pattern;
  double weight = 1.0;
  /// Lowercased pattern words; "*" is the wildcard.
  std::vector<std::string> words;

  bool operator==(const Marker&) const = default;
};

/// Validates a pattern and returns its lowercased word list.
inline std::vector<std::string> compile_pattern(const std::string& id, std::string_view pattern) {
  auto parts = text::split_words(pattern);
  if (parts.empty()) throw PackError("marker '" + id + "': empty pattern");
  if (parts.size() > kMaxPatternWords)
    throw PackError("marker '" + id + "': pattern longer than 12 words");
  std::size_t wildcards = 0;
  for (auto& p : parts) {
    if (p == kWildcard) {
      ++wildcards;
      continue;
    }
    auto toks = text::tokenize(p);
    if (toks.size() != 1 || toks[0].kind != TokenKind::word)
      throw PackError("marker '" + id + "': pattern token '" + p + "' is not a single word");
    p = text::lower(p);
  }
  if (wildcards > 1) throw PackError("marker '" + id + "': more than one wildcard");
  if (wildcards == parts.size()) throw PackError("marker '" + id + "': pattern is only a wildcard");
  return parts;
}

enum class Slot { head, name, deadline };

inline std::string_view slot_name(Slot s) {
  switch (s) {
    case Slot::head: return "head";
    case Slot::name: return "name";
    case Slot::deadline: return "deadline";
  }
  return "?";
}

inline std::optional<Slot> try_parse_slot(std::string_view n) {
  for (Slot s : {Slot::head, Slot::name, Slot::deadline})
    if (slot_name(s) == n) return s;
  return std::nullopt;
}

/// Values available to a template render. The head is always present.
struct SlotValues {
  std::optional<std::string> name;
  std::optional<std::string> deadline;

  bool has(Slot s) const {
    switch (s) {
      case Slot::head: return true;
      case Slot::name: return name.has_value();
      case Slot::deadline: return deadline.has_value();
    }
    return false;
  }
};

/// Strategy template. Body syntax: literal text with {head}, {name} and
/// {deadline} slots; text inside [ ] is an optional group that is dropped
/// as a whole unless every slot it mentions is resolved.
struct Template {
  struct Piece {
    bool is_slot = false;
    std::string literal;
    Slot slot = Slot::head;

    bool operator==(const Piece&) const = default;
  };
  struct Group {
    bool optional = false;
    std::vector<Piece> pieces;

    bool operator==(const Group&) const = default;
  };

  Strategy strategy = Strategy::bald_on_record;
  std::string body;
  std::vector<Slot> required_slots;
  std::vector<Slot> optional_slots;
  std::vector<Group> groups;

  bool operator==(const Template&) const = default;

  bool requires_slot(Slot s) const {
    return std::find(required_slots.begin(), required_slots.end(), s) != required_slots.end();
  }
  bool satisfiable_with(const SlotValues& v) const {
    return std::all_of(required_slots.begin(), required_slots.end(), [&](Slot s) { return v.has(s); });
  }
};

namespace detail {

inline std::vector<Template::Group> parse_template_body(std::string_view body, const std::string& where) {
  std::vector<Template::Group> groups(1);
  bool in_group = false;
  std::size_t i = 0;
  auto append_literal = [&](char c) {
    auto& pieces = groups.back().pieces;
    if (pieces.empty() || pieces.back().is_slot) pieces.push_back({});
    pieces.back().literal += c;
  };
  while (i < body.size()) {
    const char c = body[i];
    if (c == '[') {
      if (in_group) throw PackError(where + ": nested optional group");
      in_group = true;
      groups.push_back({true, {}});
      ++i;
    } else if (c == ']') {
      if (!in_group) throw PackError(where + ": unbalanced ']'");
      in_group = false;
      groups.push_back({false, {}});
      ++i;
    } else if (c == '{') {
      const auto close = body.find('}', i);
      if (close == std::string_view::npos) throw PackError(where + ": unterminated slot");
      const auto name = body.substr(i + 1, close - i - 1);
      auto slot = try_parse_slot(name);
      if (!slot) throw PackError(where + ": unknown slot {" + std::string(name) + "}");
      groups.back().pieces.push_back({true, {}, *slot});
      i = close + 1;
    } else if (c == '}') {
      throw PackError(where + ": stray '}'");
    } else {
      append_literal(c);
      ++i;
    }
  }
  if (in_group) throw PackError(where + ": unterminated optional group");
  std::erase_if(groups, [](const Template::Group& g) { return g.pieces.empty(); });
  return groups;
}

inline bool contains(const std::vector<Slot>& v, Slot s) { return std::find(v.begin(), v.end(), s) != v.end(); }

}  // namespace detail

/// Builds a template and checks its slot declarations against the body.
inline Template make_template(Strategy strategy, std::string body, std::vector<Slot> required,
                              std::vector<Slot> optional) {
  const std::string where = "template for " + std::string(strategy_name(strategy));
  Template t;
  t.strategy = strategy;
  t.groups = detail::parse_template_body(body, where);
  t.body = std::move(body);
  t.required_slots = std::move(required);
  t.optional_slots = std::move(optional);

  if (!detail::contains(t.required_slots, Slot::head)) throw PackError(where + ": {head} must be required");
  for (Slot s : t.optional_slots)
    if (detail::contains(t.required_slots, s))
      throw PackError(where + ": slot {" + std::string(slot_name(s)) + "} both required and optional");

  bool head_seen = false;
  for (const auto& g : t.groups) {
    for (const auto& p : g.pieces) {
      if (!p.is_slot) continue;
      const std::string sn(slot_name(p.slot));
      const bool req = detail::contains(t.required_slots, p.slot);
      const bool opt = detail::contains(t.optional_slots, p.slot);
      if (!req && !opt) throw PackError(where + ": slot {" + sn + "} used but not declared");
      if (g.optional && req) throw PackError(where + ": required slot {" + sn + "} inside optional group");
      if (!g.optional && opt) throw PackError(where + ": optional slot {" + sn + "} outside optional group");
      if (p.slot == Slot::head) head_seen = true;
    }
  }
  if (!head_seen) throw PackError(where + ": body never uses {head}");
  return t;
}

/// Head tokens as they appear in running text: space-joined, with the
/// first-person pronoun restored to upper case.
inline std::string render_head(const std::vector<std::string>& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ' ';
    std::string tok = tokens[i];
    if (tok == "i" || tok.rfind("i'", 0) == 0) tok[0] = 'I';
    out += tok;
  }
  return out;
}

/// Upper-cases the first letter of the text and of every sentence.
inline std::string capitalize_sentences(std::string s) {
  bool at_start = true;
  for (char& c : s) {
    if (at_start) {
      if (text::is_word_byte(c)) {
        c = text::to_upper(c);
        at_start = false;
      } else if (!text::is_space(c)) {
        at_start = false;
      }
    }
    if (c == '.' || c == '!' || c == '?') at_start = true;
  }
  return s;
}

/// Renders a template. Throws SlotError when a required slot is missing.
inline std::string render(const Template& t, std::string_view head, const SlotValues& slots) {
  auto value = [&](Slot s) -> std::string {
    switch (s) {
      case Slot::head: return std::string(head);
      case Slot::name: return slots.name.value_or("");
      case Slot::deadline: return slots.deadline.value_or("");
    }
    return {};
  };
  std::string out;
  for (const auto& g : t.groups) {
    const bool resolved = std::all_of(g.pieces.begin(), g.pieces.end(),
                                      [&](const Template::Piece& p) { return !p.is_slot || slots.has(p.slot); });
    if (!resolved) {
      if (g.optional) continue;
      for (const auto& p : g.pieces)
        if (p.is_slot && !slots.has(p.slot))
          throw SlotError("required slot {" + std::string(slot_name(p.slot)) + "} missing for " +
                          std::string(strategy_name(t.strategy)) + " template");
    }
    for (const auto& p : g.pieces) out += p.is_slot ? value(p.slot) : p.literal;
  }
  return capitalize_sentences(std::move(out));
}

inline constexpr std::string_view kDefaultApologyPrefix = "I'm sorry, but ";

struct RulePack {
  std::string version;
  std::string language = "en";
  std::vector<Marker> markers;
  std::vector<Template> templates;
  std::vector<std::string> request_core_verbs;
  std::string apology_prefix = std::string(kDefaultApologyPrefix);

  bool operator==(const RulePack&) const = default;

  bool is_request_verb(std::string_view lowered_word) const {
    return std::find(request_core_verbs.begin(), request_core_verbs.end(), lowered_word) !=
           request_core_verbs.end();
  }

  std::vector<const Template*> templates_for(Strategy s) const {
    std::vector<const Template*> out;
    for (const auto& t : templates)
      if (t.strategy == s) out.push_back(&t);
    return out;
  }
};

struct MarkerHit {
  Marker marker;
  Span span;

  bool operator==(const MarkerHit&) const = default;
};

namespace detail {

/// Number of tokens matched by `m` starting at token `i`, or 0.
inline std::size_t match_at(const Marker& m, const std::vector<Token>& toks, std::size_t i) {
  if (i + m.words.size() > toks.size()) return 0;
  for (std::size_t k = 0; k < m.words.size(); ++k) {
    const Token& t = toks[i + k];
    if (t.kind != TokenKind::word) return 0;
    if (m.words[k] != kWildcard && !text::iequals(t.text, m.words[k])) return 0;
  }
  return m.words.size();
}

}  // namespace detail

/// All non-overlapping marker matches in `s`, leftmost-longest. Matches never
/// span punctuation. Equal-length candidates at one position resolve to the
/// lexicographically smallest marker id.
inline std::vector<MarkerHit> match_markers(std::string_view s, const RulePack& pack) {
  std::vector<MarkerHit> hits;
  const auto toks = text::tokenize(s);
  std::size_t i = 0;
  while (i < toks.size()) {
    if (toks[i].kind != TokenKind::word) {
      ++i;
      continue;
    }
    const Marker* best = nullptr;
    std::size_t best_len = 0;
    for (const auto& m : pack.markers) {
      const std::size_t len = detail::match_at(m, toks, i);
      if (len == 0) continue;
      if (len > best_len || (len == best_len && m.id < best->id)) {
        best = &m;
        best_len = len;
      }
    }
    if (!best) {
      ++i;
      continue;
    }
    hits.push_back({*best, {toks[i].span.begin, toks[i + best_len - 1].span.end}});
    i += best_len;
  }
  return hits;
}

}  // namespace atdlab
