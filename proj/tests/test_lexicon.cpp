#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "atdlab/atdlab.hpp"
#include "support.hpp"

using namespace atdlab;

namespace {

json pack_json() { return json::parse(kDefaultPackJson); }

std::string dump(const json& j) { return j.dump(); }

void expect_pack_error(const json& j, const std::string& needle) {
  try {
    load_pack(dump(j));
    FAIL() << "expected PackError containing '" << needle << "'";
  } catch (const PackError& e) {
    EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
  }
}

std::vector<std::string> hit_ids(const std::vector<MarkerHit>& hits) {
  std::vector<std::string> out;
  for (const auto& h : hits) out.push_back(h.marker.id);
  return out;
}

}  // namespace

TEST(Strategy, NamesAndRanks) {
  for (Strategy s : kAllStrategies) {
    EXPECT_EQ(parse_strategy(strategy_name(s)), s);
    EXPECT_EQ(strategy_from_rank(rank(s)), s);
  }
  EXPECT_EQ(rank(Strategy::bald_on_record), 0);
  EXPECT_EQ(rank(Strategy::off_record), 3);
  EXPECT_THROW(parse_strategy("polite"), InputError);
}

TEST(Pattern, Validation) {
  EXPECT_EQ(compile_pattern("x", "Would You"), (std::vector<std::string>{"would", "you"}));
  EXPECT_THROW(compile_pattern("x", ""), PackError);
  EXPECT_THROW(compile_pattern("x", "* *"), PackError);
  EXPECT_THROW(compile_pattern("x", "a b c d e f g h i j k l m"), PackError);
  EXPECT_NO_THROW(compile_pattern("x", "a b c d e f g h i j k l"));
}

TEST(DefaultPack, CoversAllStrategies) {
  const RulePack& p = default_pack();
  EXPECT_EQ(p.version, "1.0.0");
  for (Strategy s : kAllStrategies) EXPECT_GE(p.templates_for(s).size(), 1u) << strategy_name(s);
  EXPECT_EQ(p.apology_prefix, "I'm sorry, but ");
}

TEST(Pack, RoundTripThroughCanonicalJson) {
  const RulePack& p = default_pack();
  const std::string once = serialize_pack(p);
  const RulePack again = load_pack(once);
  EXPECT_EQ(again, p);
  EXPECT_EQ(serialize_pack(again), once);
}

TEST(Pack, MissingNegativeTemplateIsNamed) {
  json j = pack_json();
  auto& t = j["templates"];
  t.erase(std::remove_if(t.begin(), t.end(), [](const json& x) { return x["strategy"] == "negative"; }), t.end());
  expect_pack_error(j, "negative");
}

TEST(Pack, OffRecordTemplateWithoutMarkerFailsSelfCheck) {
  json j = pack_json();
  for (auto& t : j["templates"])
    if (t["strategy"] == "off_record") {
      t["body"] = "{head}.";
      t["optional_slots"] = json::array();
    }
  expect_pack_error(j, "off_record");
}

TEST(Pack, TemplateThatLosesTheHeadFailsSelfCheck) {
  json j = pack_json();
  j["templates"][0]["body"] = "[{name}, ]{head} for me, now![ The deadline is {deadline}.]";
  EXPECT_NO_THROW(parse_pack(dump(j)));
  expect_pack_error(j, "head act");
}

TEST(Pack, StructuralErrors) {
  json dup = pack_json();
  dup["markers"].push_back(dup["markers"][0]);
  expect_pack_error(dup, "duplicate");

  json unknown = pack_json();
  unknown["colour"] = "blue";
  expect_pack_error(unknown, "unknown field");

  json weight = pack_json();
  weight["markers"][3]["weight"] = 0;
  expect_pack_error(weight, "weight");

  json strat = pack_json();
  strat["markers"][0]["strategy"] = "rude";
  expect_pack_error(strat, "rude");

  json slots = pack_json();
  slots["templates"][0]["required_slots"] = json::array({"head", "name"});
  expect_pack_error(slots, "name");

  json lang = pack_json();
  lang["language"] = "de";
  expect_pack_error(lang, "language");

  EXPECT_THROW(load_pack("{not json"), PackError);
  EXPECT_THROW(load_pack_file("/nonexistent/pack.json"), PackError);
}

TEST(Pack, ResolveOrder) {
  const auto path = std::filesystem::temp_directory_path() / "atdlab_pack_resolve.json";
  json j = pack_json();
  j["version"] = "9.9.9";
  {
    std::ofstream(path) << j.dump();
  }
  unsetenv(kPackEnvVar);
  EXPECT_EQ(resolve_pack(std::nullopt).version, "1.0.0");
  setenv(kPackEnvVar, path.c_str(), 1);
  EXPECT_EQ(resolve_pack(std::nullopt).version, "9.9.9");
  EXPECT_THROW(resolve_pack(std::string("/nonexistent.json")), PackError);
  unsetenv(kPackEnvVar);
  EXPECT_EQ(resolve_pack(path.string()).version, "9.9.9");
  std::filesystem::remove(path);
}

TEST(Template, OptionalGroupsAndCapitalization) {
  const Template t = make_template(Strategy::positive, "[{name}, ]{head}. let's go[ by {deadline}]?", {Slot::head},
                                   {Slot::name, Slot::deadline});
  EXPECT_EQ(render(t, "we need a budget", {}), "We need a budget. Let's go?");
  EXPECT_EQ(render(t, "we need a budget", {"Jake", "Friday"}), "Jake, we need a budget. Let's go by Friday?");
  EXPECT_THROW(make_template(Strategy::positive, "{head} [{name}", {Slot::head}, {Slot::name}), PackError);
  EXPECT_THROW(make_template(Strategy::positive, "{head} {name}", {Slot::head}, {Slot::name}), PackError);
  EXPECT_THROW(make_template(Strategy::positive, "{head} {who}", {Slot::head}, {}), PackError);
  EXPECT_THROW(make_template(Strategy::positive, "hello", {Slot::head}, {}), PackError);
}

TEST(Template, RequiredSlotMissing) {
  const Template t = make_template(Strategy::negative, "Dear {name}, would you mind? {head}.", {Slot::head, Slot::name}, {});
  EXPECT_FALSE(t.satisfiable_with({}));
  EXPECT_THROW(render(t, "send it", {}), SlotError);
  EXPECT_EQ(render(t, "send it", {"Ana", std::nullopt}), "Dear Ana, would you mind? Send it.");
}

TEST(RenderHead, RestoresFirstPerson) {
  EXPECT_EQ(render_head({"i", "need", "it"}), "I need it");
  EXPECT_EQ(render_head({"i'd", "like", "it"}), "I'd like it");
  EXPECT_EQ(render_head({"it", "is"}), "it is");
}

TEST(Match, WouldYouBeWilling) {
  const auto hits = match_markers("would you be willing to meet", default_pack());
  ASSERT_EQ(hits.size(), 1u);
  EXPECT_EQ(hits[0].marker.id, "neg.would-you-be-willing");
  EXPECT_EQ(hits[0].marker.category, MarkerCategory::hedge);
  EXPECT_EQ(hits[0].span, (Span{0, 20}));
}

TEST(Match, EmptyInput) { EXPECT_TRUE(match_markers("", default_pack()).empty()); }

// Brute force: every (start token, marker) pair that matches literally, then
// leftmost-longest selection done by hand.
TEST(Match, UrgentBudgetAgainstBruteForce) {
  const std::string s = "We need a budget, now!";
  const auto& pack = default_pack();
  const auto toks = text::tokenize(s);
  std::set<std::pair<std::size_t, std::string>> raw;
  for (std::size_t i = 0; i < toks.size(); ++i)
    for (const auto& m : pack.markers) {
      bool ok = i + m.words.size() <= toks.size();
      for (std::size_t k = 0; ok && k < m.words.size(); ++k)
        ok = toks[i + k].kind == TokenKind::word && (m.words[k] == "*" || text::lower(toks[i + k].text) == m.words[k]);
      if (ok) raw.insert({i, m.id});
    }
  EXPECT_EQ(raw, (std::set<std::pair<std::size_t, std::string>>{{1, "core.need"}, {5, "bald.now"}}));
  const auto hits = match_markers(s, pack);
  EXPECT_EQ(hit_ids(hits), (std::vector<std::string>{"core.need", "bald.now"}));
  EXPECT_EQ(hits[1].marker.category, MarkerCategory::urgency);
  EXPECT_EQ(s.substr(hits[1].span.begin, hits[1].span.size()), "now");
}

TEST(Match, LongestWinsAndNoOverlap) {
  const auto hits = match_markers("Things tend to go better when we're in this together.", default_pack());
  EXPECT_EQ(hit_ids(hits), (std::vector<std::string>{"off.things-tend-to-go-better", "pos.in-this-together"}));
}

TEST(Match, NeverSpansPunctuation) {
  EXPECT_TRUE(hit_ids(match_markers("right, now", default_pack())) == (std::vector<std::string>{"bald.now"}));
  EXPECT_TRUE(match_markers("would you, be willing", default_pack()).empty());
}

TEST(Match, CaseInsensitiveAndWildcard) {
  const auto hits = match_markers("DEAR Professor Lee, WOULD YOU MIND", default_pack());
  EXPECT_EQ(hit_ids(hits), (std::vector<std::string>{"neg.dear", "neg.would-you-mind"}));
  EXPECT_EQ(hits[0].span, (Span{0, 14}));
}

TEST(Match, TieGoesToSmallestId) {
  json j = json::parse(kDefaultPackJson);
  j["markers"].push_back({{"id", "aaa.dup-now"}, {"category", "urgency"}, {"strategy", "bald_on_record"},
                          {"pattern", "now"}, {"weight", 1}});
  const RulePack p = load_pack(j.dump());
  EXPECT_EQ(hit_ids(match_markers("now", p)), (std::vector<std::string>{"aaa.dup-now"}));
}

TEST(Match, DeterministicAndOrdered) {
  fixtures::BodyGenerator gen(7);
  for (int i = 0; i < 200; ++i) {
    const std::string body = gen.next();
    const auto a = match_markers(body, default_pack());
    EXPECT_EQ(a, match_markers(body, default_pack()));
    for (std::size_t k = 1; k < a.size(); ++k) EXPECT_LE(a[k - 1].span.end, a[k].span.begin) << body;
  }
}
