#pragma once

// Strategy rewriting and the apologetic "I"-statement rule. Every change is
// captured as a TransformRecord that replays forward and reverses exactly.

#include <algorithm>
#include <iterator>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "atdlab/analysis.hpp"
#include "atdlab/error.hpp"
#include "atdlab/lexicon.hpp"
#include "json.hpp"

namespace atdlab {

struct Edit {
  Span span;  // in the pre-edit text
  std::string original;
  std::string replacement;
  std::string rule_id;

  bool operator==(const Edit&) const = default;
};

struct TransformRecord {
  std::string message_id;
  std::vector<Edit> rule_trace;  // non-overlapping, ordered by span start
  Strategy source_label = Strategy::bald_on_record;
  Strategy target_label = Strategy::bald_on_record;
  std::size_t source_length = 0;  // bytes of the pre-transform text

  bool operator==(const TransformRecord&) const = default;
  bool empty() const { return rule_trace.empty(); }
};

namespace detail {

inline void check_trace_shape(const std::vector<Edit>& edits) {
  std::size_t last_end = 0;
  for (std::size_t i = 0; i < edits.size(); ++i) {
    const Edit& e = edits[i];
    if (e.span.end < e.span.begin || e.span.size() != e.original.size())
      throw RecordMismatchError("edit #" + std::to_string(i) + ": span does not cover its original text");
    if (i > 0 && e.span.begin < last_end)
      throw RecordMismatchError("edit #" + std::to_string(i) + ": overlaps or is out of order");
    last_end = e.span.end;
  }
}

}  // namespace detail

/// Replays the record over the original text.
inline std::string apply_record(const TransformRecord& rec, std::string_view original) {
  detail::check_trace_shape(rec.rule_trace);
  if (original.size() != rec.source_length) throw RecordMismatchError("text length differs from the recorded source");
  std::string out;
  std::size_t pos = 0;
  for (std::size_t i = 0; i < rec.rule_trace.size(); ++i) {
    const Edit& e = rec.rule_trace[i];
    if (e.span.end > original.size() || original.substr(e.span.begin, e.span.size()) != e.original)
      throw RecordMismatchError("edit #" + std::to_string(i) + " (" + e.rule_id + "): text at span differs from record");
    out.append(original.substr(pos, e.span.begin - pos));
    out += e.replacement;
    pos = e.span.end;
  }
  out.append(original.substr(pos));
  return out;
}

/// Restores the pre-transform text from transformed text.
inline std::string reverse(const TransformRecord& rec, std::string_view transformed) {
  detail::check_trace_shape(rec.rule_trace);
  std::string out;
  std::size_t pos = 0;   // in transformed
  std::ptrdiff_t shift = 0;
  for (std::size_t i = 0; i < rec.rule_trace.size(); ++i) {
    const Edit& e = rec.rule_trace[i];
    const std::size_t at = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(e.span.begin) + shift);
    if (at < pos || at + e.replacement.size() > transformed.size() ||
        transformed.substr(at, e.replacement.size()) != e.replacement)
      throw RecordMismatchError("edit #" + std::to_string(i) + " (" + e.rule_id +
                                "): transformed text does not carry the recorded replacement");
    out.append(transformed.substr(pos, at - pos));
    out += e.original;
    pos = at + e.replacement.size();
    shift += static_cast<std::ptrdiff_t>(e.replacement.size()) - static_cast<std::ptrdiff_t>(e.original.size());
  }
  out.append(transformed.substr(pos));
  // Catches insertions and deletions outside the edited spans.
  if (out.size() != rec.source_length) throw RecordMismatchError("transformed text length disagrees with the record");
  return out;
}

struct TransformResult {
  std::string text;
  TransformRecord record;
};

/// Re-renders `body` around its head act with the first template of `target`
/// whose required slots are available and whose output both classifies as
/// `target` and preserves the head act. The record holds one whole-body edit
/// (or none if the text came out unchanged).
inline TransformResult rewrite(std::string_view body, Strategy target, const RulePack& pack, const SlotValues& slots = {},
                               std::string message_id = {}) {
  const HeadAct head = extract_head_act(body, pack);
  const Strategy source = classify(body, pack).label;
  const std::string head_text = render_head(head.tokens);

  bool any_satisfiable = false;
  const auto candidates = pack.templates_for(target);
  for (std::size_t ci = 0; ci < candidates.size(); ++ci) {
    const Template& t = *candidates[ci];
    if (!t.satisfiable_with(slots)) continue;
    any_satisfiable = true;
    std::string out = render(t, head_text, slots);
    if (classify(out, pack).label != target) continue;
    try {
      if (extract_head_act(out, pack).tokens != head.tokens) continue;
    } catch (const NoHeadActError&) {
      continue;
    }
    TransformResult r;
    r.record.message_id = std::move(message_id);
    r.record.source_label = source;
    r.record.target_label = target;
    r.record.source_length = body.size();
    if (out != body) {
      r.record.rule_trace.push_back(
          {{0, body.size()}, std::string(body), out, "rewrite:" + std::string(strategy_name(target)) + ":" + std::to_string(ci)});
    }
    r.text = std::move(out);
    return r;
  }
  if (!any_satisfiable)
    throw SlotError("no " + std::string(strategy_name(target)) + " template can be filled with the given slots");
  throw Error("no " + std::string(strategy_name(target)) + " template preserves head act '" + head.text() + "'");
}

namespace detail {

/// Byte offsets where a sentence starts: text start, after . ! ? followed by
/// whitespace, or after a line break.
inline std::vector<std::size_t> sentence_starts(std::string_view s) {
  std::vector<std::size_t> out;
  bool at_start = true;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (text::is_space(c)) {
      if (c == '\n') at_start = true;
      continue;
    }
    if (at_start) out.push_back(i);
    at_start = false;
    if ((c == '.' || c == '!' || c == '?') && (i + 1 == s.size() || text::is_space(s[i + 1]))) at_start = true;
  }
  return out;
}

}  // namespace detail

/// Prefixes every sentence that opens with the pronoun "I" followed by a word
/// with the pack's apology phrase, downcasing the pronoun.
inline TransformResult apply_sorry(std::string_view body, const RulePack& pack, std::string message_id = {}) {
  TransformResult r;
  r.record.message_id = std::move(message_id);
  r.record.source_label = label_or_default({std::string(body)}, pack);
  r.record.source_length = body.size();
  const auto toks = text::tokenize(body);
  for (std::size_t start : detail::sentence_starts(body)) {
    auto it = std::find_if(toks.begin(), toks.end(), [&](const Token& t) { return t.span.begin == start; });
    if (it == toks.end() || it->text != "I") continue;
    auto next = std::next(it);
    if (next == toks.end() || next->kind != TokenKind::word) continue;
    if (!std::all_of(body.begin() + it->span.end, body.begin() + next->span.begin,
                     [](char c) { return c == ' '; }))
      continue;
    r.record.rule_trace.push_back({{start, start + 1}, "I", pack.apology_prefix + "i", "sorry"});
  }
  r.text = apply_record(r.record, body);
  r.record.target_label = label_or_default({r.text}, pack);
  return r;
}

using json = nlohmann::json;

inline json to_json(const TransformRecord& rec) {
  json edits = json::array();
  for (const Edit& e : rec.rule_trace) {
    edits.push_back({{"start", e.span.begin},
                     {"end", e.span.end},
                     {"original", e.original},
                     {"replacement", e.replacement},
                     {"rule_id", e.rule_id}});
  }
  return {{"message_id", rec.message_id},
          {"source", std::string(strategy_name(rec.source_label))},
          {"target", std::string(strategy_name(rec.target_label))},
          {"source_length", rec.source_length},
          {"edits", edits}};
}

inline TransformRecord record_from_json(const json& j) {
  try {
    TransformRecord rec;
    rec.message_id = j.at("message_id").get<std::string>();
    rec.source_label = parse_strategy(j.at("source").get<std::string>());
    rec.target_label = parse_strategy(j.at("target").get<std::string>());
    rec.source_length = j.at("source_length").get<std::size_t>();
    for (const auto& e : j.at("edits")) {
      rec.rule_trace.push_back({{e.at("start").get<std::size_t>(), e.at("end").get<std::size_t>()},
                                e.at("original").get<std::string>(),
                                e.at("replacement").get<std::string>(),
                                e.at("rule_id").get<std::string>()});
    }
    detail::check_trace_shape(rec.rule_trace);
    return rec;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed transform record: ") + e.what());
  }
}

}  // namespace atdlab
