#pragma once

// Rule pack file format (UTF-8 JSON), load-time validation and the bundled
// default pack.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <iterator>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>

#include "atdlab/analysis.hpp"
#include "atdlab/default_pack.hpp"
#include "atdlab/error.hpp"
#include "atdlab/lexicon.hpp"
#include "json.hpp"

namespace atdlab {

using json = nlohmann::json;

namespace detail {

inline void reject_unknown_fields(const json& obj, std::initializer_list<std::string_view> allowed,
                                  const std::string& where) {
  if (!obj.is_object()) throw PackError(where + ": expected an object");
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) throw PackError(where + ": unknown field '" + key + "'");
  }
}

inline const json& require_field(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw PackError(where + ": missing field '" + key + "'");
  return *it;
}

inline std::string require_string(const json& obj, const char* key, const std::string& where) {
  const json& v = require_field(obj, key, where);
  if (!v.is_string()) throw PackError(where + ": field '" + key + "' must be a string");
  return v.get<std::string>();
}

inline std::vector<Slot> parse_slots(const json& obj, const char* key, const std::string& where) {
  const json& v = require_field(obj, key, where);
  if (!v.is_array()) throw PackError(where + ": field '" + key + "' must be an array");
  std::vector<Slot> out;
  for (const auto& s : v) {
    if (!s.is_string()) throw PackError(where + ": slot names must be strings");
    auto slot = try_parse_slot(s.get<std::string>());
    if (!slot) throw PackError(where + ": unknown slot '" + s.get<std::string>() + "'");
    if (detail::contains(out, *slot)) throw PackError(where + ": slot '" + s.get<std::string>() + "' listed twice");
    out.push_back(*slot);
  }
  return out;
}

inline Marker parse_marker(const json& j, std::size_t index) {
  std::string where = "marker #" + std::to_string(index);
  reject_unknown_fields(j, {"id", "category", "strategy", "pattern", "weight"}, where);
  Marker m;
  m.id = require_string(j, "id", where);
  where = "marker '" + m.id + "'";
  const auto cat = require_string(j, "category", where);
  auto category = try_parse_category(cat);
  if (!category) throw PackError(where + ": unknown category '" + cat + "'");
  m.category = *category;
  const auto strat = require_string(j, "strategy", where);
  auto strategy = try_parse_strategy(strat);
  if (!strategy) throw PackError(where + ": unknown strategy '" + strat + "'");
  m.strategy = *strategy;
  m.pattern = require_string(j, "pattern", where);
  const json& w = require_field(j, "weight", where);
  if (!w.is_number()) throw PackError(where + ": weight must be a number");
  m.weight = w.get<double>();
  if (!(m.weight > 0.0) || !std::isfinite(m.weight)) throw PackError(where + ": weight must be positive");
  m.words = compile_pattern(m.id, m.pattern);
  return m;
}

inline Template parse_template(const json& j, std::size_t index) {
  std::string where = "template #" + std::to_string(index);
  reject_unknown_fields(j, {"strategy", "body", "required_slots", "optional_slots"}, where);
  const auto strat = require_string(j, "strategy", where);
  auto strategy = try_parse_strategy(strat);
  if (!strategy) throw PackError(where + ": unknown strategy '" + strat + "'");
  return make_template(*strategy, require_string(j, "body", where), parse_slots(j, "required_slots", where),
                       parse_slots(j, "optional_slots", where));
}

inline json slots_json(const std::vector<Slot>& slots) {
  json a = json::array();
  for (Slot s : slots) a.push_back(std::string(slot_name(s)));
  return a;
}

}  // namespace detail

/// Parses pack JSON and checks structure only (no template self-consistency).
inline RulePack parse_pack(std::string_view source) {
  json j;
  try {
    j = json::parse(source.begin(), source.end());
  } catch (const json::parse_error& e) {
    throw PackError(std::string("malformed pack: ") + e.what());
  }
  detail::reject_unknown_fields(
      j, {"version", "language", "markers", "templates", "request_core_verbs", "apology_prefix"}, "pack");
  RulePack p;
  p.version = detail::require_string(j, "version", "pack");
  p.language = detail::require_string(j, "language", "pack");
  if (p.language != "en") throw PackError("pack: language must be \"en\"");
  if (auto it = j.find("apology_prefix"); it != j.end()) {
    if (!it->is_string()) throw PackError("pack: apology_prefix must be a string");
    p.apology_prefix = it->get<std::string>();
  }

  const json& markers = detail::require_field(j, "markers", "pack");
  if (!markers.is_array()) throw PackError("pack: markers must be an array");
  std::set<std::string> ids;
  for (std::size_t i = 0; i < markers.size(); ++i) {
    Marker m = detail::parse_marker(markers[i], i);
    if (!ids.insert(m.id).second) throw PackError("marker '" + m.id + "': duplicate id");
    p.markers.push_back(std::move(m));
  }

  const json& templates = detail::require_field(j, "templates", "pack");
  if (!templates.is_array()) throw PackError("pack: templates must be an array");
  for (std::size_t i = 0; i < templates.size(); ++i) p.templates.push_back(detail::parse_template(templates[i], i));

  const json& verbs = detail::require_field(j, "request_core_verbs", "pack");
  if (!verbs.is_array()) throw PackError("pack: request_core_verbs must be an array");
  for (const auto& v : verbs) {
    if (!v.is_string()) throw PackError("pack: request_core_verbs entries must be strings");
    const auto w = text::lower(v.get<std::string>());
    auto toks = text::tokenize(w);
    if (toks.size() != 1 || toks[0].kind != TokenKind::word)
      throw PackError("request_core_verbs: '" + w + "' is not a single word");
    p.request_core_verbs.push_back(w);
  }
  if (p.request_core_verbs.empty()) throw PackError("pack: request_core_verbs is empty");
  return p;
}

/// Probe head used for template self-consistency: "we need a budget", or
/// the pack's first verb in place of "need".
inline std::vector<std::string> probe_head(const RulePack& pack) {
  const std::string verb = pack.is_request_verb("need") ? "need" : pack.request_core_verbs.front();
  return {"we", verb, "a", "budget"};
}

/// Coverage and self-consistency checks. Every strategy needs a template and
/// every strategy except bald-on-record a marker. Each template, rendered
/// around the probe head with and without its optional slots, must classify
/// as its own strategy, contain one of its own markers (bald excepted) and
/// give back the probe head on extraction.
inline void validate_pack(const RulePack& pack) {
  for (Strategy s : kAllStrategies) {
    if (pack.templates_for(s).empty())
      throw PackError("strategy " + std::string(strategy_name(s)) + " has no template");
    if (s == Strategy::bald_on_record) continue;
    const bool has_marker = std::any_of(pack.markers.begin(), pack.markers.end(), [&](const Marker& m) {
      return m.strategy == s && m.category != MarkerCategory::request_core;
    });
    if (!has_marker) throw PackError("strategy " + std::string(strategy_name(s)) + " has no marker");
  }

  const auto head = probe_head(pack);
  const std::string head_text = render_head(head);
  for (std::size_t i = 0; i < pack.templates.size(); ++i) {
    const Template& t = pack.templates[i];
    const std::string where = "template #" + std::to_string(i) + " (" + std::string(strategy_name(t.strategy)) + ")";
    SlotValues full{"Jake", "today"};
    SlotValues minimal;
    if (t.requires_slot(Slot::name)) minimal.name = "Jake";
    if (t.requires_slot(Slot::deadline)) minimal.deadline = "today";
    for (const SlotValues& slots : {full, minimal}) {
      const std::string rendered = render(t, head_text, slots);
      const auto c = classify(rendered, pack);
      if (c.label != t.strategy)
        throw PackError(where + ": rendering \"" + rendered + "\" classifies as " + std::string(strategy_name(c.label)));
      if (t.strategy != Strategy::bald_on_record) {
        const bool own = std::any_of(c.marker_hits.begin(), c.marker_hits.end(), [&](const MarkerHit& h) {
          return h.marker.strategy == t.strategy && h.marker.category != MarkerCategory::request_core;
        });
        if (!own) throw PackError(where + ": rendering introduces no " + std::string(strategy_name(t.strategy)) + " marker");
      }
      try {
        if (extract_head_act(rendered, pack).tokens != head)
          throw PackError(where + ": rendering \"" + rendered + "\" does not preserve the head act");
      } catch (const NoHeadActError&) {
        throw PackError(where + ": rendering \"" + rendered + "\" has no extractable head act");
      }
    }
  }
}

/// Parses and fully validates a pack.
inline RulePack load_pack(std::string_view source) {
  RulePack p = parse_pack(source);
  validate_pack(p);
  return p;
}

inline RulePack load_pack(std::istream& in) {
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return load_pack(bytes);
}

inline RulePack load_pack_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PackError("cannot open pack file '" + path + "'");
  return load_pack(in);
}

inline json to_json(const RulePack& p) {
  json j;
  j["version"] = p.version;
  j["language"] = p.language;
  j["apology_prefix"] = p.apology_prefix;
  j["markers"] = json::array();
  for (const auto& m : p.markers) {
    j["markers"].push_back({{"id", m.id},
                            {"category", std::string(category_name(m.category))},
                            {"strategy", std::string(strategy_name(m.strategy))},
                            {"pattern", m.pattern},
                            {"weight", m.weight}});
  }
  j["templates"] = json::array();
  for (const auto& t : p.templates) {
    j["templates"].push_back({{"strategy", std::string(strategy_name(t.strategy))},
                              {"body", t.body},
                              {"required_slots", detail::slots_json(t.required_slots)},
                              {"optional_slots", detail::slots_json(t.optional_slots)}});
  }
  j["request_core_verbs"] = p.request_core_verbs;
  return j;
}

/// Canonical pack text: sorted keys, two-space indent, trailing newline.
inline std::string serialize_pack(const RulePack& p) { return to_json(p).dump(2) + "\n"; }

inline const RulePack& default_pack() {
  static const RulePack pack = load_pack(kDefaultPackJson);
  return pack;
}

inline constexpr const char* kPackEnvVar = "ATDLAB_PACK";

/// Explicit path, else $ATDLAB_PACK, else the bundled pack.
inline RulePack resolve_pack(const std::optional<std::string>& path) {
  if (path && !path->empty()) return load_pack_file(*path);
  if (const char* env = std::getenv(kPackEnvVar); env && *env) return load_pack_file(env);
  return default_pack();
}

}  // namespace atdlab
