#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <string>
#include <vector>

#include "atdlab/atdlab.hpp"

namespace atdlab::fixtures {

inline std::filesystem::path data_dir() { return ATDLAB_DATA_DIR; }

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("missing test data " + p.string());
  return {std::istreambuf_iterator<char>(in), {}};
}

inline json load_json(const std::filesystem::path& p) { return json::parse(slurp(p)); }

struct CorpusEntry {
  std::string id;
  std::string body;
};

inline std::vector<CorpusEntry> corpus() {
  std::vector<CorpusEntry> out;
  for (const auto& e : load_json(data_dir() / "corpus" / "requests.json"))
    out.push_back({e.at("id").get<std::string>(), e.at("body").get<std::string>()});
  return out;
}

struct Fixture {
  std::string id;
  std::string text;
  Strategy expected;
};

inline std::vector<Fixture> strategy_fixtures() {
  std::vector<Fixture> out;
  for (const auto& e : load_json(data_dir() / "fixtures" / "strategy_fixtures.json"))
    out.push_back({e.at("id"), e.at("text"), parse_strategy(e.at("expected").get<std::string>())});
  return out;
}

inline std::string fixture_text(const std::string& id) {
  for (const auto& f : strategy_fixtures())
    if (f.id == id) return f.text;
  throw std::runtime_error("no fixture " + id);
}

inline std::vector<std::filesystem::path> scenario_files(const std::filesystem::path& dir = data_dir() / "scenarios") {
  std::vector<std::filesystem::path> out;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".json")
      out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

/// Random request-shaped bodies built from pack vocabulary: optional
/// address, marker phrases, a head with a request verb, "I" statements and
/// assorted punctuation and whitespace.
class BodyGenerator {
 public:
  explicit BodyGenerator(std::uint64_t seed, const RulePack& pack = default_pack()) : rng_(seed), pack_(pack) {
    for (const auto& m : pack.markers)
      if (m.category != MarkerCategory::request_core) phrases_.push_back(fill_wildcard(m.pattern));
  }

  std::string next() {
    std::string out;
    if (coin()) out += pick(kNames) + ", ";
    const int n = static_cast<int>(below(3));
    for (int i = 0; i < n; ++i) out += capital(pick(phrases_)) + pick(kJoins);
    if (coin()) out += "I " + pick(kFiller) + ". ";
    out += capital(pick(kSubjects) + " " + pick(pack_.request_core_verbs) + " " + pick(kObjects));
    out += pick(kEnds);
    if (coin()) out += pick(kTails);
    return out;
  }

  std::string pick(const std::vector<std::string>& v) { return v[below(v.size())]; }

 private:
  static std::string fill_wildcard(std::string p) {
    if (auto k = p.find('*'); k != std::string::npos) p.replace(k, 1, "Morgan");
    return p;
  }
  static std::string capital(std::string s) {
    if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 32);
    return s;
  }
  bool coin() { return below(2) == 0; }
  std::size_t below(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

  inline static const std::vector<std::string> kNames = {"Jake", "Hi Sam", "Dear Priya", "Hello Ana", "Tom"};
  inline static const std::vector<std::string> kJoins = {", ", ". ", "; ", "! ", " - "};
  inline static const std::vector<std::string> kFiller = {"reviewed the draft", "have two questions",
                                                          "spoke with finance", "am out on Friday"};
  inline static const std::vector<std::string> kSubjects = {"we", "i", "please", "you", "the team", "our client"};
  inline static const std::vector<std::string> kObjects = {"a budget", "the slides for Monday", "the signed form",
                                                           "your notes on the draft", "the report",
                                                           "it by Thursday"};
  inline static const std::vector<std::string> kEnds = {".", "!", "?", "", " .", "\n"};
  inline static const std::vector<std::string> kTails = {" Thanks.", " I owe you one.", "\nBest,\nKim",
                                                         " The deadline is today.", "  "};

  std::mt19937_64 rng_;
  const RulePack& pack_;
  std::vector<std::string> phrases_;
};

}  // namespace atdlab::fixtures
