#pragma once

// Strategy classification, head-act extraction and the weightiness model.

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "atdlab/error.hpp"
#include "atdlab/lexicon.hpp"
#include "atdlab/text.hpp"

namespace atdlab {

struct ClassificationResult {
  Strategy label = Strategy::bald_on_record;
  std::map<Strategy, double> scores;
  std::vector<MarkerHit> marker_hits;
};

inline bool has_content(const std::vector<std::string>& body) {
  return std::any_of(body.begin(), body.end(), [](const std::string& s) { return !text::is_blank(s); });
}

/// Scores every strategy by summed marker weight. Bald-on-record is the
/// unmarked default and never accumulates score; ties resolve downward.
inline ClassificationResult classify(const std::vector<std::string>& body, const RulePack& pack) {
  if (!has_content(body)) throw InputError("classify: empty body");
  ClassificationResult r;
  for (Strategy s : kAllStrategies) r.scores[s] = 0.0;
  for (const auto& seg : body) {
    for (auto& hit : match_markers(seg, pack)) {
      if (hit.marker.category != MarkerCategory::request_core && hit.marker.strategy != Strategy::bald_on_record)
        r.scores[hit.marker.strategy] += hit.marker.weight;
      r.marker_hits.push_back(std::move(hit));
    }
  }
  double best = 0.0;
  for (Strategy s : kAllStrategies) {
    if (r.scores[s] > best) {
      best = r.scores[s];
      r.label = s;
    }
  }
  return r;
}

inline ClassificationResult classify(std::string_view body, const RulePack& pack) {
  return classify(std::vector<std::string>{std::string(body)}, pack);
}

/// Label of a body, or bald-on-record when there is no text to classify.
inline Strategy label_or_default(const std::vector<std::string>& body, const RulePack& pack) {
  return has_content(body) ? classify(body, pack).label : Strategy::bald_on_record;
}

/// Most frequent label; ties go to the lower rank. Requires a non-empty range.
template <typename It>
Strategy modal_label(It first, It last) {
  if (first == last) throw InputError("modal_label: empty label sequence");
  std::array<std::size_t, 4> counts{};
  for (; first != last; ++first) ++counts[static_cast<std::size_t>(rank(*first))];
  std::size_t best = 0;
  for (std::size_t r = 1; r < counts.size(); ++r)
    if (counts[r] > counts[best]) best = r;
  return strategy_from_rank(static_cast<int>(best));
}

inline Strategy modal_label(const std::vector<Strategy>& labels) { return modal_label(labels.begin(), labels.end()); }

struct HeadAct {
  std::vector<std::string> tokens;
  std::size_t segment = 0;
  Span source_span;

  std::string text() const { return text::join(tokens, " "); }
};

namespace detail {

inline bool is_capitalized(std::string_view w) { return !w.empty() && w[0] >= 'A' && w[0] <= 'Z'; }

inline bool is_first_person(std::string_view w) { return w == "I" || w.rfind("I'", 0) == 0; }

inline bool is_greeting(std::string_view w) {
  for (std::string_view g : {"hi", "hello", "hey", "dear"})
    if (text::iequals(w, g)) return true;
  return false;
}

/// Number of leading tokens that form a "Name," or "Hi Name," address.
inline std::size_t address_prefix_length(const std::vector<Token>& toks) {
  auto is_name = [&](std::size_t k) {
    return k < toks.size() && toks[k].kind == TokenKind::word && is_capitalized(toks[k].text) &&
           !is_first_person(toks[k].text);
  };
  auto is_comma = [&](std::size_t k) { return k < toks.size() && toks[k].text == ","; };
  if (!toks.empty() && toks[0].kind == TokenKind::word && is_greeting(toks[0].text) && is_name(1) && is_comma(2))
    return 3;
  if (is_name(0) && is_comma(1)) return 2;
  return 0;
}

inline bool is_clause_boundary(std::string_view s, const std::vector<Token>& toks, std::size_t k) {
  const Token& t = toks[k];
  if (t.kind == TokenKind::word) return text::iequals(t.text, "but");
  const char c = t.text[0];
  if (c == '.' || c == '!' || c == '?' || c == ',' || c == ';' || c == ':') return true;
  if (c == '-') {
    const bool space_before = t.span.begin > 0 && text::is_space(s[t.span.begin - 1]);
    const bool space_after = t.span.end < s.size() && text::is_space(s[t.span.end]);
    return space_before && space_after;
  }
  return false;
}

inline bool line_break_between(std::string_view s, const Token& a, const Token& b) {
  return s.substr(a.span.end, b.span.begin - a.span.end).find('\n') != std::string_view::npos;
}

}  // namespace detail

/// Address name ("Jake" in "Jake, ..." or "Hi Jake, ..."), if the body opens
/// with one.
inline std::optional<std::string> address_name(std::string_view segment) {
  const auto toks = text::tokenize(segment);
  const std::size_t n = detail::address_prefix_length(toks);
  if (n == 0) return std::nullopt;
  return std::string(toks[n - 2].text);
}

/// Extracts the request head act:
///   1. drop a leading address ("Jake," / "Hi Jake,");
///   2. delete every matched marker span except request-core ones;
///   3. split into clauses on sentence punctuation, commas, " - ", "but" and
///      line breaks, and pick the first clause holding a request-core verb;
///   4. return its remaining words, lowercased.
inline HeadAct extract_head_act(const std::vector<std::string>& body, const RulePack& pack) {
  if (!has_content(body)) throw InputError("extract_head_act: empty body");
  bool first_content = true;
  for (std::size_t si = 0; si < body.size(); ++si) {
    const std::string_view seg = body[si];
    if (text::is_blank(seg)) continue;
    const auto toks = text::tokenize(seg);
    std::vector<bool> deleted(toks.size(), false);

    if (first_content) {
      const std::size_t n = detail::address_prefix_length(toks);
      std::fill_n(deleted.begin(), n, true);
      first_content = false;
    }
    for (const auto& hit : match_markers(seg, pack)) {
      if (hit.marker.category == MarkerCategory::request_core) continue;
      for (std::size_t k = 0; k < toks.size(); ++k)
        if (toks[k].span.begin >= hit.span.begin && toks[k].span.end <= hit.span.end) deleted[k] = true;
    }

    std::vector<std::size_t> clause;
    auto flush = [&]() -> std::optional<HeadAct> {
      std::vector<std::size_t> kept;
      for (std::size_t k : clause)
        if (!deleted[k] && toks[k].kind == TokenKind::word) kept.push_back(k);
      clause.clear();
      const bool has_verb = std::any_of(kept.begin(), kept.end(),
                                        [&](std::size_t k) { return pack.is_request_verb(text::lower(toks[k].text)); });
      if (!has_verb) return std::nullopt;
      HeadAct h;
      h.segment = si;
      h.source_span = {toks[kept.front()].span.begin, toks[kept.back()].span.end};
      for (std::size_t k : kept) h.tokens.push_back(text::lower(toks[k].text));
      return h;
    };

    for (std::size_t k = 0; k < toks.size(); ++k) {
      if (k > 0 && detail::line_break_between(seg, toks[k - 1], toks[k]))
        if (auto h = flush()) return *h;
      if (detail::is_clause_boundary(seg, toks, k)) {
        if (auto h = flush()) return *h;
        continue;
      }
      clause.push_back(k);
    }
    if (auto h = flush()) return *h;
  }
  throw NoHeadActError("no clause contains a request-core verb");
}

inline HeadAct extract_head_act(std::string_view body, const RulePack& pack) {
  return extract_head_act(std::vector<std::string>{std::string(body)}, pack);
}

/// Social distance, receiver power and imposition, each scaled to [0, 1].
struct WeightinessFactors {
  double distance = 0.0;
  double power = 0.0;
  double imposition = 0.0;
};

inline double weightiness(const WeightinessFactors& f) {
  for (double v : {f.distance, f.power, f.imposition})
    if (!(v >= 0.0 && v <= 1.0)) throw InputError("weightiness factor outside [0,1]");
  return f.distance + f.power + f.imposition;
}

inline constexpr double kStrategyBand = 0.75;

/// Evenly spaced half-open bands over [0, 3].
inline Strategy recommend_strategy(double w) {
  if (!(w >= 0.0 && w <= 3.0)) throw InputError("weightiness outside [0,3]");
  if (w < 1 * kStrategyBand) return Strategy::bald_on_record;
  if (w < 2 * kStrategyBand) return Strategy::positive;
  if (w < 3 * kStrategyBand) return Strategy::negative;
  return Strategy::off_record;
}

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double mid() const { return (lo + hi) / 2.0; }
  bool operator==(const Interval&) const = default;
};

/// Weightiness band a receiver infers from seeing `label`; the preimage of
/// recommend_strategy.
inline Interval perceived_weightiness(Strategy label) {
  const double r = rank(label);
  return {kStrategyBand * r, kStrategyBand * (r + 1)};
}

}  // namespace atdlab
