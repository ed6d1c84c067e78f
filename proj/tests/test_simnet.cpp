#include <gtest/gtest.h>

#include <future>

#include "atdlab/atdlab.hpp"
#include "support.hpp"

using namespace atdlab;

namespace {

const RulePack& pack() { return default_pack(); }

ScenarioConfig scenario(const std::string& name) {
  return load_scenario_file((fixtures::data_dir() / "scenarios" / (name + ".json")).string());
}

Message single(const std::string& id, const std::string& body) {
  Message m;
  m.id = id;
  m.from = "sidney";
  m.to = "participant";
  m.segments.push_back(Segment::fresh_text(body));
  return m;
}

ScenarioConfig two_actor_generator(std::uint64_t seed) {
  ScenarioConfig c;
  c.name = "gen";
  c.seed = seed;
  c.actors = {{"alice", "Alice", ReplyPolicy::acknowledge_and_quote, Strategy::negative},
              {"bob", "Bob", ReplyPolicy::counter_request, Strategy::positive}};
  c.generator = GeneratorConfig{10, 0.5};
  return c;
}

}  // namespace

TEST(Rng, SameSeedSameStream) {
  Rng a(42), b(42), c(43);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next(), b.next());
  EXPECT_NE(Rng(42).next(), c.next());
}

TEST(Rng, KnownFirstOutput) {
  // First output of mt19937_64 with the reference default seed.
  EXPECT_EQ(Rng(5489).next(), 14514284786278117030ULL);
}

TEST(Rng, IndexAndUnitRanges) {
  Rng r(1);
  std::vector<int> seen(7, 0);
  for (int i = 0; i < 7000; ++i) ++seen[r.index(7)];
  for (int n : seen) EXPECT_GT(n, 800);
  for (int i = 0; i < 1000; ++i) {
    const double u = r.unit();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
  EXPECT_THROW(r.index(0), InputError);
}

TEST(Clock, AddMinutes) {
  EXPECT_EQ(detail::add_minutes("2024-01-08T09:00:00Z", 5), "2024-01-08T09:05:00Z");
  EXPECT_EQ(detail::add_minutes("2024-02-28T23:50:00Z", 20), "2024-02-29T00:10:00Z");
  EXPECT_EQ(detail::add_minutes("2023-12-31T23:59:00Z", 1), "2024-01-01T00:00:00Z");
  EXPECT_THROW(detail::add_minutes("yesterday", 1), ConfigError);
}

TEST(Suspicion, IdenticalIsZero) {
  const Message m = single("m", "We need a budget, now!");
  EXPECT_DOUBLE_EQ(suspicion(m, m, {}, {}, pack()), 0.0);
}

TEST(Suspicion, RankOnlyWeightsGiveFullScore) {
  const Message sent = single("m", "We need a budget, now!");
  const Message shown = single("m", rewrite(sent.fresh_text(), Strategy::off_record, pack()).text);
  JudgmentConfig j{0.7, 0.0, 1.0, 0.0};
  EXPECT_DOUBLE_EQ(suspicion(shown, sent, {}, j, pack()), 1.0);
}

// Frozen from tests/oracles/suspicion_oracle.py: 23 token edits over 31
// tokens, rank distance 2 of 3, no history: 0.4*23/31 + 0.4*2/3 = 262/465.
TEST(Suspicion, BudgetPairUnderDefaultWeights) {
  const Message sent = single("m", fixtures::fixture_text("budget-terse"));
  const Message shown = single("m", fixtures::fixture_text("budget-willing"));
  EXPECT_NEAR(suspicion(shown, sent, {}, {}, pack()), 262.0 / 465.0, 1e-12);
}

TEST(Suspicion, DriftTermUsesModalHistory) {
  const Message m = single("m", "We need a budget, now!");
  JudgmentConfig j{0.7, 0.0, 0.0, 1.0};
  EXPECT_DOUBLE_EQ(suspicion(m, m, {Strategy::negative, Strategy::negative}, j, pack()), 1.0);
  EXPECT_DOUBLE_EQ(suspicion(m, m, {Strategy::bald_on_record}, j, pack()), 0.0);
}

TEST(Scenario, BudgetPairStrategyTrace) {
  const Transcript t = run(scenario("budget_pair"), pack());
  ASSERT_EQ(t.deliveries.size(), 2u);
  EXPECT_EQ(t.deliveries[0].delivered_label, Strategy::bald_on_record);
  EXPECT_EQ(t.deliveries[1].delivered_label, Strategy::negative);
  EXPECT_EQ(t.sent[0].id, "budget-pair-m001");
  EXPECT_EQ(t.sent[1].sent_at, "2024-01-08T09:05:00Z");
  EXPECT_EQ(t.sent[1].subject, "Re: Budget");
}

TEST(Scenario, NoAttackMeansNoDetectionsAndFaithfulViews) {
  for (std::uint64_t seed : {1ULL, 2ULL, 77ULL, 123456789ULL}) {
    const Transcript t = run(two_actor_generator(seed), pack());
    EXPECT_TRUE(t.detections.empty());
    EXPECT_TRUE(t.ledger.empty());
    for (const auto& [actor, view] : t.views)
      for (const auto& m : view)
        for (const auto& s : t.sent)
          if (s.id == m.id) {
            EXPECT_EQ(m, s);
          }
    for (const auto& d : t.deliveries) EXPECT_DOUBLE_EQ(d.suspicion, 0.0);
  }
}

TEST(Scenario, GeneratorAlternatesAndUsesBaseStrategy) {
  const Transcript t = run(two_actor_generator(9), pack());
  ASSERT_EQ(t.sent.size(), 10u);
  for (std::size_t i = 1; i < t.sent.size(); ++i) EXPECT_NE(t.sent[i].from, t.sent[i - 1].from);
  for (const auto& d : t.deliveries)
    EXPECT_EQ(d.sent_label, d.from == "alice" ? Strategy::negative : Strategy::positive) << d.message_id;
}

TEST(Scenario, SameSeedIsByteIdentical) {
  for (const auto& f : fixtures::scenario_files()) {
    const ScenarioConfig c = load_scenario_file(f.string());
    EXPECT_EQ(to_json(run(c, pack())).dump(2), to_json(run(c, pack())).dump(2)) << f;
  }
}

TEST(Scenario, ParallelRunsMatchSerialRuns) {
  std::vector<ScenarioConfig> configs;
  for (const auto& f : fixtures::scenario_files()) configs.push_back(load_scenario_file(f.string()));
  std::vector<std::string> serial;
  for (const auto& c : configs) serial.push_back(to_json(run(c, pack())).dump());
  std::vector<std::future<std::string>> jobs;
  for (const auto& c : configs)
    jobs.push_back(std::async(std::launch::async, [&c] { return to_json(run(c, pack())).dump(); }));
  for (std::size_t i = 0; i < jobs.size(); ++i) EXPECT_EQ(jobs[i].get(), serial[i]) << configs[i].name;
}

TEST(Scenario, DifferentSeedsDiffer) {
  EXPECT_NE(to_json(run(two_actor_generator(1), pack())).dump(), to_json(run(two_actor_generator(2), pack())).dump());
}

TEST(Scenario, DetectionSwitchesReceiverToScrutiny) {
  const Transcript t = run(scenario("attack_bi_terse"), pack());
  ASSERT_FALSE(t.detections.empty());
  const auto& first = t.detections.front();
  EXPECT_EQ(first.event, "truth-default abandoned");
  EXPECT_GE(first.score, 0.7);
  bool later_scrutiny = false;
  bool seen = false;
  for (const auto& m : t.sent) {
    if (seen && m.from == first.actor) {
      later_scrutiny = m.segments[0].text.rfind(detail::kScrutinyPreamble, 0) == 0;
      EXPECT_EQ(m.segments.size(), 2u);
      break;
    }
    if (m.id == first.message_id) seen = true;
  }
  EXPECT_TRUE(later_scrutiny);
}

TEST(Scenario, MetricsAgreeWithDeliveries) {
  const Transcript t = run(scenario("attack_uni_terse"), pack());
  EXPECT_EQ(t.metrics.messages, t.deliveries.size());
  std::size_t altered = 0;
  for (const auto& d : t.deliveries) altered += d.altered;
  EXPECT_EQ(t.metrics.altered, altered);
  EXPECT_EQ(t.metrics.altered, t.ledger.size());
  EXPECT_EQ(t.metrics.detections, t.detections.size());
}

TEST(Scenario, ActivationDelaysTheAttack) {
  const Transcript t = run(scenario("attack_uni_terse"), pack());
  for (std::size_t i = 0; i < 6; ++i) EXPECT_FALSE(t.deliveries[i].altered);
}

TEST(Scenario, ConfigErrors) {
  const json base = fixtures::load_json(fixtures::data_dir() / "scenarios" / "attack_uni_terse.json");
  auto expect_error = [&](auto mutate) {
    json j = base;
    mutate(j);
    EXPECT_THROW(scenario_from_json(j), ConfigError) << j.dump();
  };
  expect_error([](json& j) { j["actors"].push_back({{"id", "carol"}}); });
  expect_error([](json& j) { j["judgment"] = {{"weights", {{"edit", 0.5}, {"rank", 0.5}, {"drift", 0.5}}}}; });
  expect_error([](json& j) { j["judgment"] = {{"threshold", 1.5}}; });
  expect_error([](json& j) { j["colour"] = "red"; });
  expect_error([](json& j) { j["attack"]["rules"][0]["receiver"] = "mallory"; });
  expect_error([](json& j) { j["script"] = json::array({{{"from", "alice"}, {"to", "zed"}}}); });
  expect_error([](json& j) { j["actors"][0]["reply_policy"] = "ignore"; });
  expect_error([](json& j) { j.erase("seed"); });
  EXPECT_THROW(load_scenario_file("/nonexistent.json"), ConfigError);
}

TEST(Transcript, TreeFiles) {
  const auto dir = std::filesystem::temp_directory_path() / "atdlab_tree_test";
  std::filesystem::remove_all(dir);
  const Transcript t = run(scenario("budget_pair"), pack());
  write_transcript_tree(t, dir);
  EXPECT_TRUE(std::filesystem::exists(dir / "transcript.json"));
  EXPECT_TRUE(std::filesystem::exists(dir / "view_sidney.json"));
  EXPECT_TRUE(std::filesystem::exists(dir / "view_participant.json"));
  const json j = fixtures::load_json(dir / "transcript.json");
  EXPECT_EQ(j["header"]["format"], "atdlab-transcript/1");
  EXPECT_EQ(j["header"]["rng"], "mt19937_64");
  EXPECT_EQ(j["header"]["seed"], 4);
  const json view = fixtures::load_json(dir / "view_participant.json");
  EXPECT_EQ(messages_from_json(view), t.views.at("participant"));
  std::filesystem::remove_all(dir);
}
