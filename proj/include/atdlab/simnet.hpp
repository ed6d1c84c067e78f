#pragma once

// Deterministic two-party email exchange with an interception point.
//
// A scenario is either an explicit script of send events or generator
// parameters; every random choice comes from one mt19937_64 stream seeded by
// the scenario. Each delivery passes through intercept_deliver, gets a
// suspicion score, and a score at or above the judgment threshold logs a
// detection event and switches the receiver into scrutiny mode.

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "atdlab/analysis.hpp"
#include "atdlab/error.hpp"
#include "atdlab/lexicon.hpp"
#include "atdlab/text.hpp"
#include "atdlab/thread.hpp"
#include "json.hpp"

namespace atdlab {

inline constexpr const char* kRngName = "mt19937_64";
inline constexpr const char* kTranscriptFormat = "atdlab-transcript/1";

/// Seeded stream. Only the engine's raw output is used so results do not
/// depend on the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, n) by rejection sampling.
  std::size_t index(std::size_t n) {
    if (n == 0) throw InputError("Rng::index: empty range");
    const std::uint64_t bound = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t v;
    do {
      v = next();
    } while (v >= limit);
    return static_cast<std::size_t>(v % bound);
  }

  /// Uniform in [0, 1) with 53 bits of precision.
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool chance(double p) { return unit() < p; }

 private:
  std::mt19937_64 engine_;
};

enum class ReplyPolicy { acknowledge_and_quote, counter_request };

inline std::string_view policy_name(ReplyPolicy p) {
  return p == ReplyPolicy::acknowledge_and_quote ? "acknowledge_and_quote" : "counter_request";
}

struct ActorConfig {
  std::string id;
  std::string display_name;
  ReplyPolicy reply_policy = ReplyPolicy::acknowledge_and_quote;
  Strategy base_strategy = Strategy::bald_on_record;
};

/// One scripted send. Without a body the sender's reply policy writes it.
struct ScriptEvent {
  std::string from;
  std::string to;
  std::optional<std::string> body;
  bool quote_last = false;
};

struct GeneratorConfig {
  std::size_t messages = 10;
  double quote_probability = 0.5;
};

struct JudgmentConfig {
  double threshold = 0.7;
  double w_edit = 0.4;
  double w_rank = 0.4;
  double w_drift = 0.2;
};

struct ScenarioConfig {
  std::string name;
  std::string thread_id = "thread-1";
  std::string subject = "Proposal";
  std::string start_time = "2024-01-08T09:00:00Z";
  int interval_minutes = 5;
  std::vector<ActorConfig> actors;
  std::vector<ScriptEvent> script;
  std::optional<GeneratorConfig> generator;
  std::optional<AttackConfig> attack;
  JudgmentConfig judgment;
  std::uint64_t seed = 0;

  const ActorConfig* actor(const std::string& id) const {
    for (const auto& a : actors)
      if (a.id == id) return &a;
    return nullptr;
  }
};

inline void validate(const ScenarioConfig& c) {
  const std::string where = "scenario '" + c.name + "'";
  if (c.actors.size() != 2) throw ConfigError(where + ": exactly two actors are supported");
  if (c.actors[0].id.empty() || c.actors[0].id == c.actors[1].id) throw ConfigError(where + ": actor ids must be distinct");
  const auto& j = c.judgment;
  if (!(j.threshold >= 0.0 && j.threshold <= 1.0)) throw ConfigError(where + ": threshold outside [0,1]");
  if (j.w_edit < 0 || j.w_rank < 0 || j.w_drift < 0) throw ConfigError(where + ": negative judgment weight");
  if (std::abs(j.w_edit + j.w_rank + j.w_drift - 1.0) > 1e-9) throw ConfigError(where + ": judgment weights must sum to 1");
  if (c.generator && !c.script.empty()) throw ConfigError(where + ": give either a script or a generator");
  if (!c.generator && c.script.empty()) throw ConfigError(where + ": empty script");
  if (c.generator && !(c.generator->quote_probability >= 0.0 && c.generator->quote_probability <= 1.0))
    throw ConfigError(where + ": quote_probability outside [0,1]");
  for (std::size_t i = 0; i < c.script.size(); ++i) {
    const auto& e = c.script[i];
    if (!c.actor(e.from) || !c.actor(e.to) || e.from == e.to)
      throw ConfigError(where + ": event #" + std::to_string(i) + " references an undeclared actor");
  }
  if (c.attack)
    for (const auto& r : c.attack->rules)
      if (!c.actor(r.receiver)) throw ConfigError(where + ": attack targets undeclared actor '" + r.receiver + "'");
  if (c.interval_minutes < 0) throw ConfigError(where + ": negative interval");
}

namespace detail {

inline constexpr std::array<const char*, 12> kHeadBank = {
    "we need a budget for the proposal",
    "i need the slides for the board meeting",
    "we need the signed contract",
    "please send the quarterly report",
    "we need your comments on the draft",
    "i need the travel receipts",
    "we require the updated timeline",
    "please review the staffing plan",
    "we need a decision on the vendor",
    "i want the final numbers for march",
    "please share the meeting notes",
    "we need the figures for the grant",
};

inline constexpr std::array<const char*, 4> kDeadlineBank = {"today", "Friday", "the end of the week", "noon"};

inline constexpr const char* kAcknowledgement = "Thanks for the note. ";
inline constexpr const char* kScrutinyPreamble = "Before I act on this, I am re-reading your last message below. ";

// Howard Hinnant's civil calendar conversions.
inline long long days_from_civil(long long y, unsigned m, unsigned d) {
  y -= m <= 2;
  const long long era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<long long>(doe) - 719468;
}

inline void civil_from_days(long long z, long long& y, unsigned& m, unsigned& d) {
  z += 719468;
  const long long era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  y = static_cast<long long>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp < 10 ? mp + 3 : mp - 9;
  y += m <= 2;
}

/// "YYYY-MM-DDTHH:MM:SSZ" shifted by `minutes`.
inline std::string add_minutes(const std::string& iso, long long minutes) {
  int y, mo, d, h, mi, s;
  if (std::sscanf(iso.c_str(), "%d-%d-%dT%d:%d:%dZ", &y, &mo, &d, &h, &mi, &s) != 6)
    throw ConfigError("start_time must look like 2024-01-08T09:00:00Z");
  long long total = days_from_civil(y, static_cast<unsigned>(mo), static_cast<unsigned>(d)) * 86400LL + h * 3600LL +
                    mi * 60LL + s + minutes * 60LL;
  const long long days = (total >= 0 ? total : total - 86399) / 86400;
  long long secs = total - days * 86400;
  long long yy;
  unsigned mm, dd;
  civil_from_days(days, yy, mm, dd);
  char buf[96];
  std::snprintf(buf, sizeof buf, "%04lld-%02u-%02uT%02lld:%02lld:%02lldZ", yy, mm, dd, secs / 3600, (secs / 60) % 60,
                secs % 60);
  return buf;
}

}  // namespace detail

/// Suspicion of a delivered message against what was actually sent:
///   w_edit  * normalized token edit distance of the fresh text
/// + w_rank  * |rank(delivered) - rank(sent)| / 3
/// + w_drift * [delivered label differs from the sender's modal label so far]
inline double suspicion(const Message& delivered, const Message& original, const std::vector<Strategy>& sender_history,
                        const JudgmentConfig& judgment, const RulePack& pack) {
  const auto d_fresh = delivered.fresh_texts();
  const auto o_fresh = original.fresh_texts();
  const double edit = text::normalized_edit_distance(text::words(text::join(d_fresh, "\n")),
                                                     text::words(text::join(o_fresh, "\n")));
  const Strategy d_label = label_or_default(d_fresh, pack);
  const Strategy o_label = label_or_default(o_fresh, pack);
  const double rank_part = std::abs(rank(d_label) - rank(o_label)) / 3.0;
  const double drift = sender_history.empty() ? 0.0 : (d_label != modal_label(sender_history) ? 1.0 : 0.0);
  const double score = judgment.w_edit * edit + judgment.w_rank * rank_part + judgment.w_drift * drift;
  return std::clamp(score, 0.0, 1.0);
}

struct Delivery {
  std::string message_id;
  std::string from;
  std::string to;
  bool altered = false;
  Strategy sent_label = Strategy::bald_on_record;
  Strategy delivered_label = Strategy::bald_on_record;
  double suspicion = 0.0;

  int rank_delta() const { return rank(delivered_label) - rank(sent_label); }
};

struct DetectionEvent {
  std::string message_id;
  std::string actor;
  double score = 0.0;
  std::string event = "truth-default abandoned";
};

struct Metrics {
  std::size_t messages = 0;
  std::size_t altered = 0;
  std::size_t detections = 0;
  double mean_rank_delta = 0.0;  // mean |rank delta| over deliveries
  double mean_suspicion = 0.0;
};

struct Transcript {
  std::string scenario;
  std::uint64_t seed = 0;
  std::string pack_version;
  std::vector<std::string> actors;
  std::vector<Message> sent;
  std::map<std::string, std::vector<Message>> views;
  std::vector<Delivery> deliveries;
  Ledger ledger;
  std::vector<DetectionEvent> detections;
  Metrics metrics;
  std::optional<AttackConfig> attack;

  bool attacked() const { return !ledger.empty(); }
};

namespace detail {

class Runner {
 public:
  Runner(const ScenarioConfig& cfg, const RulePack& pack) : cfg_(cfg), pack_(pack), rng_(cfg.seed), state_(cfg.thread_id) {}

  Transcript run() {
    if (cfg_.generator) {
      const std::size_t first = rng_.index(2);
      for (std::size_t i = 0; i < cfg_.generator->messages; ++i) {
        const auto& from = cfg_.actors[(first + i) % 2];
        const auto& to = cfg_.actors[(first + i + 1) % 2];
        step(from.id, to.id, std::nullopt, rng_.chance(cfg_.generator->quote_probability));
      }
    } else {
      for (const auto& e : cfg_.script) step(e.from, e.to, e.body, e.quote_last);
    }
    return finish();
  }

 private:
  std::string request_body(const ActorConfig& sender, const ActorConfig& receiver) {
    const std::string head = render_head(text::split_words(detail::kHeadBank[rng_.index(kHeadBank.size())]));
    const auto templates = pack_.templates_for(sender.base_strategy);
    const Template& t = *templates[rng_.index(templates.size())];
    SlotValues slots;
    if (rng_.chance(0.5)) slots.name = receiver.display_name;
    if (rng_.chance(0.5)) slots.deadline = kDeadlineBank[rng_.index(kDeadlineBank.size())];
    if (t.requires_slot(Slot::name) && !slots.name) slots.name = receiver.display_name;
    if (t.requires_slot(Slot::deadline) && !slots.deadline) slots.deadline = kDeadlineBank[0];
    return render(t, head, slots);
  }

  std::string policy_body(const ActorConfig& sender, const ActorConfig& receiver, bool replying) {
    std::string body = request_body(sender, receiver);
    if (scrutiny_[sender.id]) return kScrutinyPreamble + body;
    if (replying && sender.reply_policy == ReplyPolicy::acknowledge_and_quote) return kAcknowledgement + body;
    return body;
  }

  std::optional<std::string> last_message_in_view(const std::string& actor) const {
    for (auto it = state_.order().rbegin(); it != state_.order().rend(); ++it) {
      const Message& m = state_.sent(*it);
      if (m.from == actor || m.to == actor) return *it;
    }
    return std::nullopt;
  }

  void step(const std::string& from, const std::string& to, const std::optional<std::string>& body, bool quote) {
    const ActorConfig& sender = *cfg_.actor(from);
    const ActorConfig& receiver = *cfg_.actor(to);
    const std::size_t index = state_.order().size();
    const auto last = last_message_in_view(from);

    Message msg;
    char idbuf[16];
    std::snprintf(idbuf, sizeof idbuf, "-m%03zu", index + 1);
    msg.id = cfg_.thread_id + idbuf;
    msg.thread_id = cfg_.thread_id;
    msg.from = from;
    msg.to = to;
    msg.subject = index == 0 ? cfg_.subject : "Re: " + cfg_.subject;
    msg.sent_at = add_minutes(cfg_.start_time, static_cast<long long>(index) * cfg_.interval_minutes);
    const bool replying = last && state_.sent(*last).from != from;
    msg.segments.push_back(Segment::fresh_text(body ? *body : policy_body(sender, receiver, replying)));
    const bool scrutinizing = scrutiny_[from];
    if (last && (quote || scrutinizing)) msg.segments.push_back(render_quote(state_.view_of(from, *last)));

    const AttackConfig attack = cfg_.attack ? cfg_.attack->at_step(index) : AttackConfig{};
    const Message delivered = intercept_deliver(msg, attack, state_, pack_);

    Delivery d;
    d.message_id = msg.id;
    d.from = from;
    d.to = to;
    d.altered = state_.ledger().find(msg.id, to) != nullptr;
    d.sent_label = label_or_default(msg.fresh_texts(), pack_);
    d.delivered_label = label_or_default(delivered.fresh_texts(), pack_);
    auto& history = history_[{to, from}];
    d.suspicion = suspicion(delivered, msg, history, cfg_.judgment, pack_);
    if (has_content(delivered.fresh_texts())) history.push_back(d.delivered_label);
    if (d.suspicion >= cfg_.judgment.threshold) {
      detections_.push_back({msg.id, to, d.suspicion, "truth-default abandoned"});
      scrutiny_[to] = true;
    }
    deliveries_.push_back(d);
  }

  Transcript finish() {
    Transcript t;
    t.scenario = cfg_.name;
    t.seed = cfg_.seed;
    t.pack_version = pack_.version;
    for (const auto& a : cfg_.actors) {
      t.actors.push_back(a.id);
      t.views[a.id] = state_.view(a.id);
    }
    t.sent = state_.sent_messages();
    t.deliveries = deliveries_;
    t.ledger = state_.ledger();
    t.detections = detections_;
    t.attack = cfg_.attack;
    auto& m = t.metrics;
    m.messages = deliveries_.size();
    m.detections = detections_.size();
    double rank_sum = 0, susp_sum = 0;
    for (const auto& d : deliveries_) {
      m.altered += d.altered;
      rank_sum += std::abs(d.rank_delta());
      susp_sum += d.suspicion;
    }
    if (m.messages) {
      m.mean_rank_delta = rank_sum / static_cast<double>(m.messages);
      m.mean_suspicion = susp_sum / static_cast<double>(m.messages);
    }
    return t;
  }

  const ScenarioConfig& cfg_;
  const RulePack& pack_;
  Rng rng_;
  ThreadState state_;
  std::map<std::string, bool> scrutiny_;
  std::map<std::pair<std::string, std::string>, std::vector<Strategy>> history_;
  std::vector<Delivery> deliveries_;
  std::vector<DetectionEvent> detections_;
};

}  // namespace detail

inline Transcript run(const ScenarioConfig& config, const RulePack& pack) {
  validate(config);
  return detail::Runner(config, pack).run();
}

// ---------------------------------------------------------------------------
// Scenario and transcript files

namespace detail {

inline ReplyPolicy parse_policy(const std::string& s) {
  if (s == "acknowledge_and_quote") return ReplyPolicy::acknowledge_and_quote;
  if (s == "counter_request") return ReplyPolicy::counter_request;
  throw ConfigError("unknown reply policy '" + s + "'");
}

inline void reject_unknown(const json& j, std::initializer_list<std::string_view> allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, _] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ConfigError(where + ": unknown field '" + key + "'");
  }
}

}  // namespace detail

inline ScenarioConfig scenario_from_json(const json& j) {
  try {
    detail::reject_unknown(j,
                           {"name", "seed", "thread_id", "subject", "start_time", "interval_minutes", "actors", "script",
                            "generator", "attack", "judgment"},
                           "scenario");
    ScenarioConfig c;
    c.name = j.at("name").get<std::string>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.thread_id = j.value("thread_id", c.thread_id);
    c.subject = j.value("subject", c.subject);
    c.start_time = j.value("start_time", c.start_time);
    c.interval_minutes = j.value("interval_minutes", c.interval_minutes);
    for (const auto& aj : j.at("actors")) {
      detail::reject_unknown(aj, {"id", "name", "reply_policy", "base_strategy"}, "actor");
      ActorConfig a;
      a.id = aj.at("id").get<std::string>();
      a.display_name = aj.value("name", a.id);
      a.reply_policy = detail::parse_policy(aj.value("reply_policy", std::string("acknowledge_and_quote")));
      a.base_strategy = parse_strategy(aj.value("base_strategy", std::string("bald_on_record")));
      c.actors.push_back(std::move(a));
    }
    if (auto it = j.find("script"); it != j.end()) {
      for (const auto& ej : *it) {
        detail::reject_unknown(ej, {"from", "to", "body", "quote_last"}, "script event");
        ScriptEvent e;
        e.from = ej.at("from").get<std::string>();
        e.to = ej.at("to").get<std::string>();
        if (ej.contains("body")) e.body = ej.at("body").get<std::string>();
        e.quote_last = ej.value("quote_last", false);
        c.script.push_back(std::move(e));
      }
    }
    if (auto it = j.find("generator"); it != j.end()) {
      detail::reject_unknown(*it, {"messages", "quote_probability"}, "generator");
      GeneratorConfig g;
      g.messages = it->at("messages").get<std::size_t>();
      g.quote_probability = it->value("quote_probability", g.quote_probability);
      c.generator = g;
    }
    if (auto it = j.find("attack"); it != j.end() && !it->is_null()) c.attack = attack_from_json(*it);
    if (auto it = j.find("judgment"); it != j.end()) {
      detail::reject_unknown(*it, {"threshold", "weights"}, "judgment");
      c.judgment.threshold = it->value("threshold", c.judgment.threshold);
      if (auto w = it->find("weights"); w != it->end()) {
        detail::reject_unknown(*w, {"edit", "rank", "drift"}, "weights");
        c.judgment.w_edit = w->at("edit").get<double>();
        c.judgment.w_rank = w->at("rank").get<double>();
        c.judgment.w_drift = w->at("drift").get<double>();
      }
    }
    validate(c);
    return c;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed scenario: ") + e.what());
  }
}

inline ScenarioConfig load_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open scenario '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("scenario '" + path + "': " + e.what());
  }
  return scenario_from_json(j);
}

inline json to_json(const Metrics& m) {
  return {{"messages", m.messages},
          {"altered", m.altered},
          {"detections", m.detections},
          {"mean_rank_delta", m.mean_rank_delta},
          {"mean_suspicion", m.mean_suspicion}};
}

inline json to_json(const Transcript& t) {
  json deliveries = json::array();
  for (const auto& d : t.deliveries) {
    deliveries.push_back({{"message_id", d.message_id},
                          {"from", d.from},
                          {"to", d.to},
                          {"altered", d.altered},
                          {"sent_label", std::string(strategy_name(d.sent_label))},
                          {"delivered_label", std::string(strategy_name(d.delivered_label))},
                          {"rank_delta", d.rank_delta()},
                          {"suspicion", d.suspicion}});
  }
  json detections = json::array();
  for (const auto& e : t.detections)
    detections.push_back({{"message_id", e.message_id}, {"actor", e.actor}, {"score", e.score}, {"event", e.event}});
  json views = json::object();
  for (const auto& [actor, msgs] : t.views) views[actor] = to_json(msgs);
  return {{"header",
           {{"format", kTranscriptFormat},
            {"scenario", t.scenario},
            {"seed", t.seed},
            {"rng", kRngName},
            {"pack_version", t.pack_version},
            {"actors", t.actors},
            {"attack", t.attack ? to_json(*t.attack) : json(nullptr)}}},
          {"sent", to_json(t.sent)},
          {"views", views},
          {"deliveries", deliveries},
          {"ledger", to_json(t.ledger)},
          {"detections", detections},
          {"metrics", to_json(t.metrics)}};
}

inline json view_json(const Transcript& t, const std::string& actor) {
  return {{"actor", actor}, {"scenario", t.scenario}, {"messages", to_json(t.views.at(actor))}};
}

inline void write_json_file(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
}

/// Writes transcript.json, view_<actor>.json per actor and metrics.json.
inline void write_transcript_tree(const Transcript& t, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_json_file(dir / "transcript.json", to_json(t));
  for (const auto& actor : t.actors) write_json_file(dir / ("view_" + actor + ".json"), view_json(t, actor));
  write_json_file(dir / "metrics.json", to_json(t.metrics));
}

}  // namespace atdlab
