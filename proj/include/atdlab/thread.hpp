#pragma once

// Conversation model for a two-party thread: messages with fresh and quoted
// segments, the quoting convention, and man-in-the-middle delivery that keeps
// the manipulation ambient by fixing up quotes from a per-thread ledger.

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "atdlab/analysis.hpp"
#include "atdlab/error.hpp"
#include "atdlab/lexicon.hpp"
#include "atdlab/text.hpp"
#include "atdlab/transform.hpp"
#include "json.hpp"

namespace atdlab {

enum class SegmentKind { fresh, quote };

struct Segment {
  SegmentKind kind = SegmentKind::fresh;
  std::string text;
  std::string source_id;    // quote only
  std::string attribution;  // quote only

  bool operator==(const Segment&) const = default;

  static Segment fresh_text(std::string t) { return {SegmentKind::fresh, std::move(t), {}, {}}; }
};

struct Message {
  std::string id;
  std::string thread_id;
  std::string from;
  std::string to;
  std::string subject;
  std::string sent_at;
  std::vector<Segment> segments;

  bool operator==(const Message&) const = default;

  std::vector<std::string> fresh_texts() const {
    std::vector<std::string> out;
    for (const auto& s : segments)
      if (s.kind == SegmentKind::fresh) out.push_back(s.text);
    return out;
  }

  /// All fresh segments joined by newlines.
  std::string fresh_text() const { return text::join(fresh_texts(), "\n"); }

  /// Index of the first fresh segment with content: the message body that
  /// attacks rewrite.
  std::optional<std::size_t> body_index() const {
    for (std::size_t i = 0; i < segments.size(); ++i)
      if (segments[i].kind == SegmentKind::fresh && !text::is_blank(segments[i].text)) return i;
    return std::nullopt;
  }
};

inline std::string attribution_for(const Message& m) { return "On " + m.sent_at + ", " + m.from + " wrote:"; }

/// Plain-text rendering of a message's segments; quotes are introduced by
/// their attribution line.
inline std::string render_body(const std::vector<Segment>& segments) {
  std::vector<std::string> chunks;
  for (const auto& s : segments)
    chunks.push_back(s.kind == SegmentKind::fresh ? s.text : s.attribution + "\n" + s.text);
  return text::join(chunks, "\n");
}

/// Quote segment for `m`: every rendered line prefixed with "> ", so quoted
/// quotes nest as "> > ".
inline Segment render_quote(const Message& m) {
  return {SegmentKind::quote, text::prefix_lines(render_body(m.segments), "> "), m.id, attribution_for(m)};
}

inline void validate_message(const Message& m) {
  const std::string where = "message '" + m.id + "'";
  if (m.id.empty()) throw InputError("message without id");
  if (m.from.empty() || m.to.empty()) throw InputError(where + ": sender and receiver are required");
  if (m.segments.empty()) throw InputError(where + ": no segments");
  for (std::size_t i = 0; i < m.segments.size(); ++i) {
    const Segment& s = m.segments[i];
    if (s.kind == SegmentKind::quote && s.source_id.empty())
      throw InputError(where + ": quote segment #" + std::to_string(i) + " has no source_id");
    if (i > 0 && s.kind == SegmentKind::fresh && m.segments[i - 1].kind == SegmentKind::fresh)
      throw InputError(where + ": adjacent fresh segments");
  }
}

/// How an attack treats messages addressed to one receiver.
struct AttackRule {
  enum class Mode { absolute, delta, sorry };

  std::string receiver;
  Mode mode = Mode::absolute;
  Strategy target = Strategy::bald_on_record;
  int delta = 0;

  bool operator==(const AttackRule&) const = default;
};

struct AttackConfig {
  bool enabled = false;
  std::vector<AttackRule> rules;
  /// Restore quoted text from the ledger so each party sees consistent quotes.
  bool reverse_quotes = true;
  /// Delivery index at which the rules start firing.
  std::size_t activate_at = 0;
  /// Delivery index from which quote restoration is switched off, if any.
  std::optional<std::size_t> ledger_disable_at;

  bool operator==(const AttackConfig&) const = default;

  const AttackRule* rule_for(std::string_view receiver) const {
    for (const auto& r : rules)
      if (r.receiver == receiver) return &r;
    return nullptr;
  }

  /// Effective configuration for the delivery at `step`.
  AttackConfig at_step(std::size_t step) const {
    AttackConfig c = *this;
    if (step < activate_at) c.rules.clear();
    if (ledger_disable_at && step >= *ledger_disable_at) c.reverse_quotes = false;
    return c;
  }
};

/// Attacker-side edit history: message id -> receiver -> record.
class Ledger {
 public:
  const TransformRecord* find(const std::string& message_id, const std::string& receiver) const {
    auto it = records_.find(message_id);
    if (it == records_.end()) return nullptr;
    auto jt = it->second.find(receiver);
    return jt == it->second.end() ? nullptr : &jt->second;
  }

  void put(const std::string& message_id, const std::string& receiver, TransformRecord rec) {
    auto& slot = records_[message_id];
    if (slot.count(receiver)) throw LedgerError("ledger already holds a record for " + message_id + " -> " + receiver);
    slot.emplace(receiver, std::move(rec));
  }

  bool empty() const { return records_.empty(); }
  std::size_t size() const {
    std::size_t n = 0;
    for (const auto& [_, m] : records_) n += m.size();
    return n;
  }

  const std::map<std::string, std::map<std::string, TransformRecord>>& entries() const { return records_; }

 private:
  std::map<std::string, std::map<std::string, TransformRecord>> records_;
};

/// Sent and delivered copies of every message in one thread plus its ledger.
class ThreadState {
 public:
  explicit ThreadState(std::string thread_id = {}) : thread_id_(std::move(thread_id)) {}

  const std::string& thread_id() const { return thread_id_; }
  const Ledger& ledger() const { return ledger_; }
  Ledger& ledger() { return ledger_; }
  const std::vector<std::string>& order() const { return order_; }

  bool contains(const std::string& id) const { return sent_.count(id) != 0; }

  const Message& sent(const std::string& id) const {
    auto it = sent_.find(id);
    if (it == sent_.end()) throw LedgerError("unknown message '" + id + "'");
    return it->second;
  }

  const Message& delivered(const std::string& id) const {
    auto it = delivered_.find(id);
    if (it == delivered_.end()) throw LedgerError("message '" + id + "' not delivered");
    return it->second;
  }

  /// The copy of message `id` that `actor` holds: as sent if they wrote it,
  /// as delivered if they received it.
  const Message& view_of(const std::string& actor, const std::string& id) const {
    const Message& m = sent(id);
    if (m.from == actor) return m;
    if (m.to == actor) return delivered(id);
    throw LedgerError("actor '" + actor + "' holds no copy of '" + id + "'");
  }

  /// Every message `actor` holds, in thread order.
  std::vector<Message> view(const std::string& actor) const {
    std::vector<Message> out;
    for (const auto& id : order_) {
      const Message& m = sent(id);
      if (m.from == actor || m.to == actor) out.push_back(view_of(actor, id));
    }
    return out;
  }

  std::vector<Message> sent_messages() const {
    std::vector<Message> out;
    for (const auto& id : order_) out.push_back(sent(id));
    return out;
  }

  void record_sent(const Message& m) {
    if (contains(m.id)) throw InputError("duplicate message id '" + m.id + "'");
    sent_.emplace(m.id, m);
    order_.push_back(m.id);
  }

  void record_delivered(const Message& m) { delivered_[m.id] = m; }

 private:
  std::string thread_id_;
  std::map<std::string, Message> sent_;
  std::map<std::string, Message> delivered_;
  std::vector<std::string> order_;
  Ledger ledger_;
};

namespace detail {

/// Splits a rendered body (one quote level already stripped) back into the
/// per-segment texts of `structure`.
inline std::vector<std::string> parse_rendered_body(std::string_view body, const std::vector<Segment>& structure,
                                                    const std::string& source_id) {
  const auto lines = text::split_lines(body);
  std::vector<std::string> parts(structure.size());
  std::size_t at = 0;
  auto fail = [&](const std::string& why) {
    return LedgerError("quoted copy of '" + source_id + "' does not follow its structure: " + why);
  };
  for (std::size_t k = 0; k < structure.size(); ++k) {
    std::vector<std::string> taken;
    if (structure[k].kind == SegmentKind::fresh) {
      const std::string* stop = k + 1 < structure.size() ? &structure[k + 1].attribution : nullptr;
      while (at < lines.size() && !(stop && lines[at] == *stop)) taken.push_back(lines[at++]);
      if (taken.empty()) throw fail("missing fresh text");
    } else {
      if (at >= lines.size() || lines[at] != structure[k].attribution) throw fail("missing attribution line");
      ++at;
      while (at < lines.size() && !lines[at].empty() && lines[at][0] == '>') taken.push_back(lines[at++]);
      if (taken.empty()) throw fail("empty nested quote");
    }
    parts[k] = text::join_lines(taken);
  }
  if (at != lines.size()) throw fail("trailing lines");
  return parts;
}

class QuoteFixer {
 public:
  QuoteFixer(const ThreadState& state, std::string sender, std::string receiver)
      : state_(state), sender_(std::move(sender)), receiver_(std::move(receiver)) {}

  /// True if any message in the quoted subtree was altered toward either party.
  bool needs_fix(const std::string& id) const {
    if (state_.ledger().find(id, sender_) || state_.ledger().find(id, receiver_)) return true;
    for (const auto& s : state_.view_of(sender_, id).segments)
      if (s.kind == SegmentKind::quote && needs_fix(s.source_id)) return true;
    return false;
  }

  /// Converts a quote as the sender holds it into the receiver's version.
  std::string fix_quote(const std::string& quoted, const std::string& source_id) const {
    std::string body;
    if (!text::strip_quote_level(quoted, body))
      throw LedgerError("quote of '" + source_id + "' has an unprefixed line");
    return text::prefix_lines(fix_body(body, source_id), "> ");
  }

 private:
  std::string fix_body(std::string_view body, const std::string& id) const {
    const auto& structure = state_.view_of(sender_, id).segments;
    auto parts = parse_rendered_body(body, structure, id);
    // Innermost quotes first.
    for (std::size_t k = 0; k < structure.size(); ++k)
      if (structure[k].kind == SegmentKind::quote) parts[k] = fix_quote(parts[k], structure[k].source_id);

    const Message& original = state_.sent(id);
    if (auto bi = original.body_index()) {
      parts[*bi] = fix_fresh(parts[*bi], original.segments[*bi].text, id);
    }

    std::vector<Segment> rebuilt = structure;
    for (std::size_t k = 0; k < rebuilt.size(); ++k) rebuilt[k].text = parts[k];
    return render_body(rebuilt);
  }

  std::string fix_fresh(const std::string& seen, const std::string& original_text, const std::string& id) const {
    const TransformRecord* toward_sender = state_.ledger().find(id, sender_);
    const TransformRecord* toward_receiver = state_.ledger().find(id, receiver_);
    std::string original;
    if (seen == original_text) {
      original = seen;
    } else if (toward_sender && seen == apply_record(*toward_sender, original_text)) {
      original = reverse(*toward_sender, seen);
    } else {
      throw LedgerError("quoted text of '" + id + "' matches neither its original nor its transformed form");
    }
    return toward_receiver ? apply_record(*toward_receiver, original) : original;
  }

  const ThreadState& state_;
  std::string sender_;
  std::string receiver_;
};

inline Strategy resolve_target(const AttackRule& rule, Strategy current) {
  if (rule.mode == AttackRule::Mode::delta) return strategy_from_rank(std::clamp(rank(current) + rule.delta, 0, 3));
  return rule.target;
}

}  // namespace detail

/// Delivers `msg` through the interception point. With the attack enabled:
///   - quotes are converted from the sender's copy to the receiver's copy of
///     the quoted message (reversing alterations of the receiver's own words,
///     replaying alterations the receiver saw), unless reversal is off;
///   - the body is rewritten per the receiver's rule and the edit logged.
/// Throws LedgerError if a quote agrees with neither known form.
inline Message intercept_deliver(const Message& msg, const AttackConfig& attack, ThreadState& state, const RulePack& pack) {
  validate_message(msg);
  if (!state.thread_id().empty() && msg.thread_id != state.thread_id())
    throw InputError("message '" + msg.id + "' belongs to another thread");
  for (const auto& s : msg.segments) {
    if (s.kind != SegmentKind::quote) continue;
    if (!state.contains(s.source_id))
      throw InputError("message '" + msg.id + "' quotes unknown message '" + s.source_id + "'");
  }

  Message out = msg;
  if (attack.enabled) {
    if (attack.reverse_quotes) {
      detail::QuoteFixer fixer(state, msg.from, msg.to);
      for (auto& s : out.segments)
        if (s.kind == SegmentKind::quote && fixer.needs_fix(s.source_id)) s.text = fixer.fix_quote(s.text, s.source_id);
    }
    const AttackRule* rule = attack.rule_for(msg.to);
    const auto bi = msg.body_index();
    if (rule && bi) {
      const std::string& body = msg.segments[*bi].text;
      std::optional<TransformResult> result;
      if (rule->mode == AttackRule::Mode::sorry) {
        result = apply_sorry(body, pack, msg.id);
      } else {
        const Strategy current = classify(body, pack).label;
        const Strategy target = detail::resolve_target(*rule, current);
        if (target != current) {
          try {
            SlotValues slots;
            slots.name = address_name(body);
            result = rewrite(body, target, pack, slots, msg.id);
          } catch (const NoHeadActError&) {
            // Nothing to redress; the message passes unaltered.
          }
        }
      }
      if (result && !result->record.empty()) {
        out.segments[*bi].text = result->text;
        state.ledger().put(msg.id, msg.to, std::move(result->record));
      }
    }
  }
  state.record_sent(msg);
  state.record_delivered(out);
  return out;
}

// ---------------------------------------------------------------------------
// JSON

inline json to_json(const Segment& s) {
  json j{{"kind", s.kind == SegmentKind::fresh ? "fresh" : "quote"}, {"text", s.text}};
  if (s.kind == SegmentKind::quote) {
    j["source_id"] = s.source_id;
    j["attribution"] = s.attribution;
  }
  return j;
}

inline json to_json(const Message& m) {
  json segs = json::array();
  for (const auto& s : m.segments) segs.push_back(to_json(s));
  return {{"id", m.id},        {"thread_id", m.thread_id}, {"from", m.from},    {"to", m.to},
          {"subject", m.subject}, {"sent_at", m.sent_at},     {"segments", segs}};
}

inline Message message_from_json(const json& j) {
  try {
    Message m;
    m.id = j.at("id").get<std::string>();
    m.thread_id = j.value("thread_id", std::string{});
    m.from = j.at("from").get<std::string>();
    m.to = j.at("to").get<std::string>();
    m.subject = j.value("subject", std::string{});
    m.sent_at = j.value("sent_at", std::string{});
    for (const auto& sj : j.at("segments")) {
      Segment s;
      const auto kind = sj.at("kind").get<std::string>();
      if (kind == "fresh") {
        s.kind = SegmentKind::fresh;
      } else if (kind == "quote") {
        s.kind = SegmentKind::quote;
        s.source_id = sj.value("source_id", std::string{});
        s.attribution = sj.value("attribution", std::string{});
      } else {
        throw InputError("unknown segment kind '" + kind + "'");
      }
      s.text = sj.at("text").get<std::string>();
      m.segments.push_back(std::move(s));
    }
    validate_message(m);
    return m;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed message: ") + e.what());
  }
}

inline json to_json(const std::vector<Message>& ms) {
  json a = json::array();
  for (const auto& m : ms) a.push_back(to_json(m));
  return a;
}

/// Accepts a bare message array, a view file ({"messages": [...]}) or a
/// transcript ({"sent": [...]}).
inline std::vector<Message> messages_from_json(const json& j) {
  const json* arr = &j;
  if (j.is_object()) {
    if (j.contains("messages")) {
      arr = &j.at("messages");
    } else if (j.contains("sent")) {
      arr = &j.at("sent");
    } else if (j.contains("segments")) {
      return {message_from_json(j)};
    } else {
      throw InputError("expected a message list, view or transcript");
    }
  }
  if (!arr->is_array()) throw InputError("expected a message list");
  std::vector<Message> out;
  for (const auto& mj : *arr) out.push_back(message_from_json(mj));
  return out;
}

inline json to_json(const Ledger& ledger) {
  json a = json::array();
  for (const auto& [id, by_receiver] : ledger.entries())
    for (const auto& [receiver, rec] : by_receiver)
      a.push_back({{"message_id", id}, {"receiver", receiver}, {"record", to_json(rec)}});
  return a;
}

inline json to_json(const AttackRule& r) {
  json j{{"receiver", r.receiver}};
  switch (r.mode) {
    case AttackRule::Mode::absolute: j["target"] = std::string(strategy_name(r.target)); break;
    case AttackRule::Mode::delta: j["delta"] = r.delta; break;
    case AttackRule::Mode::sorry: j["mode"] = "sorry"; break;
  }
  return j;
}

inline json to_json(const AttackConfig& a) {
  json rules = json::array();
  for (const auto& r : a.rules) rules.push_back(to_json(r));
  json j{{"enabled", a.enabled}, {"rules", rules}, {"reverse_quotes", a.reverse_quotes}, {"activate_at", a.activate_at}};
  j["ledger_disable_at"] = a.ledger_disable_at ? json(*a.ledger_disable_at) : json(nullptr);
  return j;
}

inline AttackConfig attack_from_json(const json& j) {
  try {
    AttackConfig a;
    a.enabled = j.value("enabled", true);
    a.reverse_quotes = j.value("reverse_quotes", true);
    a.activate_at = j.value("activate_at", std::size_t{0});
    if (auto it = j.find("ledger_disable_at"); it != j.end() && !it->is_null())
      a.ledger_disable_at = it->get<std::size_t>();
    for (const auto& rj : j.at("rules")) {
      AttackRule r;
      r.receiver = rj.at("receiver").get<std::string>();
      const bool has_target = rj.contains("target"), has_delta = rj.contains("delta");
      const bool is_sorry = rj.value("mode", std::string{}) == "sorry";
      if (has_target + has_delta + is_sorry != 1)
        throw ConfigError("attack rule for '" + r.receiver + "' needs exactly one of target, delta, mode=sorry");
      if (has_target) {
        r.mode = AttackRule::Mode::absolute;
        r.target = parse_strategy(rj.at("target").get<std::string>());
      } else if (has_delta) {
        r.mode = AttackRule::Mode::delta;
        r.delta = rj.at("delta").get<int>();
      } else {
        r.mode = AttackRule::Mode::sorry;
      }
      a.rules.push_back(std::move(r));
    }
    return a;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed attack config: ") + e.what());
  }
}

}  // namespace atdlab
