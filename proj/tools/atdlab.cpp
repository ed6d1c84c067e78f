// atdlab command-line tool.
//
// Exit status: 0 success or clean, 1 usage or input error, 2 a detector
// reported mutation or drift.

#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "atdlab/atdlab.hpp"

namespace fs = std::filesystem;
using namespace atdlab;

namespace {

constexpr int kExitError = 1;
constexpr int kExitPositive = 2;

std::string read_file(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), {}};
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  return {std::istreambuf_iterator<char>(in), {}};
}

// A message, view or transcript file contributes its fresh segments; any
// other file is raw text with one trailing newline dropped.
std::vector<std::string> read_body(const std::string& path) {
  std::string raw = read_file(path);
  const auto first = raw.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (raw[first] == '{' || raw[first] == '[')) {
    json j = json::parse(raw, nullptr, false);
    if (!j.is_discarded()) {
      std::vector<std::string> out;
      for (const auto& m : messages_from_json(j))
        for (auto& f : m.fresh_texts()) out.push_back(std::move(f));
      return out;
    }
  }
  if (raw.ends_with("\r\n")) {
    raw.resize(raw.size() - 2);
  } else if (raw.ends_with('\n')) {
    raw.pop_back();
  }
  return {raw};
}

std::string single_body(const std::string& path) {
  auto parts = read_body(path);
  return text::join(parts, "\n");
}

std::vector<Message> read_messages(const std::string& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw InputError("'" + path + "' is not JSON: " + e.what());
  }
  return messages_from_json(j);
}

void emit_json(const json& j) { std::cout << j.dump(2) << '\n'; }

void write_text_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path + "'");
  out << body;
}

struct PackOption {
  std::string path;
  RulePack load() const { return resolve_pack(path.empty() ? std::nullopt : std::optional<std::string>(path)); }
};

void add_pack_option(CLI::App* cmd, PackOption& opt) {
  cmd->add_option("--pack", opt.path, "Rule pack JSON (default: $ATDLAB_PACK, then the bundled pack)");
}

// ---------------------------------------------------------------------------

int cmd_classify(const std::string& path, const PackOption& po, bool as_json) {
  const RulePack pack = po.load();
  const auto body = read_body(path);
  const auto res = classify(body, pack);

  json hits = json::array();
  std::ostringstream lines;
  for (std::size_t seg = 0; seg < body.size(); ++seg) {
    for (const auto& h : match_markers(body[seg], pack)) {
      const std::string matched = body[seg].substr(h.span.begin, h.span.size());
      hits.push_back({{"id", h.marker.id},
                      {"category", std::string(category_name(h.marker.category))},
                      {"strategy", std::string(strategy_name(h.marker.strategy))},
                      {"segment", seg},
                      {"start", h.span.begin},
                      {"end", h.span.end},
                      {"text", matched}});
      lines << "  " << h.marker.id << " \"" << matched << "\" [" << h.span.begin << ',' << h.span.end << ")\n";
    }
  }
  if (as_json) {
    json scores = json::object();
    for (const auto& [s, v] : res.scores) scores[std::string(strategy_name(s))] = v;
    emit_json({{"label", std::string(strategy_name(res.label))}, {"scores", scores}, {"marker_hits", hits}});
    return 0;
  }
  std::cout << strategy_name(res.label) << '\n';
  std::cout << "scores:";
  for (const auto& [s, v] : res.scores) std::cout << ' ' << strategy_name(s) << '=' << v;
  std::cout << '\n' << "markers:\n" << lines.str();
  return 0;
}

struct RewriteArgs {
  std::string path;
  std::string to;
  std::string name;
  std::string deadline;
  std::string record;
  std::string id;
};

int cmd_rewrite(const RewriteArgs& a, const PackOption& po) {
  const RulePack pack = po.load();
  SlotValues slots;
  if (!a.name.empty()) slots.name = a.name;
  if (!a.deadline.empty()) slots.deadline = a.deadline;
  const std::string body = single_body(a.path);
  const auto res = rewrite(body, parse_strategy(a.to), pack, slots, a.id);
  std::cout << res.text << '\n';
  if (!a.record.empty()) write_text_file(a.record, to_json(res.record).dump(2) + "\n");
  return 0;
}

int cmd_sorry(const std::string& path, const std::string& record, const std::string& id, const PackOption& po) {
  const RulePack pack = po.load();
  const auto res = apply_sorry(single_body(path), pack, id);
  std::cout << res.text << '\n';
  if (!record.empty()) write_text_file(record, to_json(res.record).dump(2) + "\n");
  return 0;
}

int cmd_reverse(const std::string& path, const std::string& record) {
  const auto rec = record_from_json(json::parse(read_file(record)));
  std::cout << reverse(rec, single_body(path)) << '\n';
  return 0;
}

int cmd_simulate(const std::string& scenario, std::optional<std::uint64_t> seed, const std::string& out,
                 const PackOption& po) {
  const RulePack pack = po.load();
  ScenarioConfig cfg = load_scenario_file(scenario);
  if (seed) cfg.seed = *seed;
  const Transcript t = run(cfg, pack);
  write_transcript_tree(t, out);
  std::cout << "scenario " << t.scenario << " seed " << t.seed << ": " << t.metrics.messages << " messages, "
            << t.metrics.altered << " altered, " << t.metrics.detections << " detections -> " << out << '\n';
  return 0;
}

int finish_detection(const DetectionReport& rep, const std::string& report_path, bool as_json) {
  const json j = to_json(rep);
  if (!report_path.empty()) write_text_file(report_path, j.dump(2) + "\n");
  if (as_json) {
    emit_json(j);
  } else {
    std::cout << verdict_name(rep.verdict) << " score " << rep.score << '\n';
    for (const auto& e : rep.evidence)
      std::cout << "  " << e.kind << ' ' << (e.message_id.empty() ? "-" : e.message_id) << ": " << e.detail << '\n';
  }
  return rep.positive() ? kExitPositive : 0;
}

struct EvaluateArgs {
  std::vector<std::string> scenarios;
  std::string out;
  std::string detector = "all";
  std::size_t window = DriftConfig{}.window;
  double alarm = DriftConfig{}.alarm;
};

std::vector<DetectorKind> detectors_for(const std::string& name) {
  if (name == "all") return {DetectorKind::diff, DetectorKind::thread, DetectorKind::drift};
  if (name == "diff") return {DetectorKind::diff};
  if (name == "thread") return {DetectorKind::thread};
  if (name == "drift") return {DetectorKind::drift};
  throw InputError("unknown detector '" + name + "'");
}

int cmd_evaluate(const EvaluateArgs& a, const PackOption& po) {
  const RulePack pack = po.load();
  std::vector<std::string> files;
  for (const auto& p : a.scenarios) {
    if (fs::is_directory(p)) {
      std::vector<std::string> found;
      for (const auto& e : fs::directory_iterator(p))
        if (e.is_regular_file() && e.path().extension() == ".json") found.push_back(e.path().string());
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else {
      files.push_back(p);
    }
  }
  if (files.empty()) throw InputError("evaluate: no scenario files");
  std::vector<ScenarioConfig> configs;
  for (const auto& f : files) configs.push_back(load_scenario_file(f));

  // Scenarios share nothing mutable, so they run concurrently.
  std::vector<std::future<Transcript>> jobs;
  for (const auto& c : configs) jobs.push_back(std::async(std::launch::async, [&c, &pack] { return run(c, pack); }));
  std::vector<Transcript> suite;
  for (auto& j : jobs) suite.push_back(j.get());

  const DriftConfig drift{a.window, a.alarm};
  std::vector<EvaluationRow> rows;
  for (DetectorKind k : detectors_for(a.detector)) {
    auto r = evaluate(k, suite, pack, drift);
    rows.insert(rows.end(), r.begin(), r.end());
  }
  if (a.out.empty() || a.out == "-") {
    write_evaluation_csv(std::cout, rows);
  } else {
    std::ofstream out(a.out, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + a.out + "'");
    write_evaluation_csv(out, rows);
  }
  return 0;
}

int cmd_rulepack_export(const std::string& format, const std::string& out, const PackOption& po) {
  if (format != "extension" && format != "json")
    throw InputError("unknown export format '" + format + "' (expected extension or json)");
  const std::string body = serialize_pack(po.load());
  if (out.empty() || out == "-") {
    std::cout << body;
  } else {
    write_text_file(out, body);
  }
  return 0;
}

int cmd_rulepack_validate(const std::string& path) {
  const RulePack p = load_pack(read_file(path));
  std::cout << "ok: version " << p.version << ", " << p.markers.size() << " markers, " << p.templates.size()
            << " templates\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Politeness-strategy analysis, rewriting, thread simulation and mutation detection for email text"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(PROJECT_VERSION_STRING));

  PackOption pack;
  int status = 0;
  std::function<int()> action;

  // classify
  std::string classify_path;
  bool classify_json = false;
  auto* classify_cmd = app.add_subcommand("classify", "Label a message with its politeness strategy");
  classify_cmd->add_option("path", classify_path, "Message JSON or raw text file ('-' for stdin)")->required();
  classify_cmd->add_flag("--json", classify_json, "Machine-readable output");
  add_pack_option(classify_cmd, pack);
  classify_cmd->callback([&] { action = [&] { return cmd_classify(classify_path, pack, classify_json); }; });

  // rewrite
  RewriteArgs rw;
  auto* rewrite_cmd = app.add_subcommand("rewrite", "Re-render a request in another strategy");
  rewrite_cmd->add_option("path", rw.path, "Message JSON or raw text file ('-' for stdin)")->required();
  rewrite_cmd->add_option("--to", rw.to, "Target strategy")->required();
  rewrite_cmd->add_option("--name", rw.name, "Addressee name slot");
  rewrite_cmd->add_option("--deadline", rw.deadline, "Deadline slot");
  rewrite_cmd->add_option("--record", rw.record, "Write the transform record here");
  rewrite_cmd->add_option("--id", rw.id, "Message id stored in the record");
  add_pack_option(rewrite_cmd, pack);
  rewrite_cmd->callback([&] { action = [&] { return cmd_rewrite(rw, pack); }; });

  // sorry
  std::string sorry_path, sorry_record, sorry_id;
  auto* sorry_cmd = app.add_subcommand("sorry", "Make \"I\" statements apologetic");
  sorry_cmd->add_option("path", sorry_path, "Message JSON or raw text file ('-' for stdin)")->required();
  sorry_cmd->add_option("--record", sorry_record, "Write the transform record here");
  sorry_cmd->add_option("--id", sorry_id, "Message id stored in the record");
  add_pack_option(sorry_cmd, pack);
  sorry_cmd->callback([&] { action = [&] { return cmd_sorry(sorry_path, sorry_record, sorry_id, pack); }; });

  // reverse
  std::string rev_path, rev_record;
  auto* reverse_cmd = app.add_subcommand("reverse", "Undo a transform using its record");
  reverse_cmd->add_option("path", rev_path, "Transformed text file ('-' for stdin)")->required();
  reverse_cmd->add_option("--record", rev_record, "Transform record JSON")->required();
  reverse_cmd->callback([&] { action = [&] { return cmd_reverse(rev_path, rev_record); }; });

  // simulate
  std::string sim_scenario, sim_out;
  std::optional<std::uint64_t> sim_seed;
  auto* simulate_cmd = app.add_subcommand("simulate", "Run a scenario and write its transcript tree");
  simulate_cmd->add_option("scenario", sim_scenario, "Scenario JSON")->required();
  simulate_cmd->add_option("--seed", sim_seed, "Override the scenario seed");
  simulate_cmd->add_option("--out", sim_out, "Output directory")->required();
  add_pack_option(simulate_cmd, pack);
  simulate_cmd->callback([&] { action = [&] { return cmd_simulate(sim_scenario, sim_seed, sim_out, pack); }; });

  // detect
  auto* detect_cmd = app.add_subcommand("detect", "Run a mutation detector; exits 2 when it fires");
  detect_cmd->require_subcommand(1);
  std::string det_report;
  bool det_json = false;
  auto add_common = [&](CLI::App* c) {
    c->add_option("--report", det_report, "Write the JSON report here");
    c->add_flag("--json", det_json, "Print the JSON report");
  };

  std::string diff_view, diff_canonical;
  auto* diff_cmd = detect_cmd->add_subcommand("diff", "Compare a view with a canonical copy");
  diff_cmd->add_option("view", diff_view, "View, transcript or message list to check")->required();
  diff_cmd->add_option("canonical", diff_canonical, "Canonical messages (for example transcript.json)")->required();
  add_common(diff_cmd);
  diff_cmd->callback([&] {
    action = [&] {
      const auto shown = read_messages(diff_view);
      const auto all = read_messages(diff_canonical);
      // Restrict the canonical side to the ids the view holds.
      std::vector<Message> canonical;
      for (const auto& m : shown) {
        auto it = std::find_if(all.begin(), all.end(), [&](const Message& c) { return c.id == m.id; });
        if (it == all.end()) throw InputError("canonical copy has no message '" + m.id + "'");
        canonical.push_back(*it);
      }
      return finish_detection(diff_detect(shown, canonical), det_report, det_json);
    };
  });

  std::string thread_view;
  auto* thread_cmd = detect_cmd->add_subcommand("thread", "Check quotes against the stored copies in one view");
  thread_cmd->add_option("view", thread_view, "View file")->required();
  add_common(thread_cmd);
  thread_cmd->callback([&] {
    action = [&] { return finish_detection(quote_mismatch_detect(read_messages(thread_view)), det_report, det_json); };
  });

  std::string drift_view, drift_sender;
  DriftConfig drift_cfg;
  auto* drift_cmd = detect_cmd->add_subcommand("drift", "Look for a change in one sender's strategy");
  drift_cmd->add_option("view", drift_view, "View file")->required();
  drift_cmd->add_option("--sender", drift_sender, "Sender whose messages are scanned")->required();
  drift_cmd->add_option("--window", drift_cfg.window, "Recent window length")->check(CLI::PositiveNumber);
  drift_cmd->add_option("--alarm", drift_cfg.alarm, "Alarm level in [0,1]")->check(CLI::Range(0.0, 1.0));
  add_pack_option(drift_cmd, pack);
  add_common(drift_cmd);
  drift_cmd->callback([&] {
    action = [&] {
      const RulePack p = pack.load();
      return finish_detection(drift_detect_view(read_messages(drift_view), drift_sender, p, drift_cfg), det_report,
                              det_json);
    };
  });

  // evaluate
  EvaluateArgs ev;
  auto* eval_cmd = app.add_subcommand("evaluate", "Score detectors over a scenario suite (CSV)");
  eval_cmd->add_option("scenarios", ev.scenarios, "Scenario files or directories")->required();
  eval_cmd->add_option("--out", ev.out, "CSV output path (default stdout)");
  eval_cmd->add_option("--detector", ev.detector, "diff, thread, drift or all");
  eval_cmd->add_option("--window", ev.window, "Drift window")->check(CLI::PositiveNumber);
  eval_cmd->add_option("--alarm", ev.alarm, "Drift alarm")->check(CLI::Range(0.0, 1.0));
  add_pack_option(eval_cmd, pack);
  eval_cmd->callback([&] { action = [&] { return cmd_evaluate(ev, pack); }; });

  // rulepack
  auto* rp_cmd = app.add_subcommand("rulepack", "Export or validate rule packs");
  rp_cmd->require_subcommand(1);
  std::string export_format = "extension", export_out;
  auto* export_cmd = rp_cmd->add_subcommand("export", "Write the active pack as canonical JSON");
  export_cmd->add_option("--format", export_format, "extension (default) or json; both emit the pack schema");
  export_cmd->add_option("--out", export_out, "Output path (default stdout)");
  add_pack_option(export_cmd, pack);
  export_cmd->callback([&] { action = [&] { return cmd_rulepack_export(export_format, export_out, pack); }; });
  std::string validate_path;
  auto* validate_cmd = rp_cmd->add_subcommand("validate", "Load and self-check a pack file");
  validate_cmd->add_option("path", validate_path, "Pack JSON")->required();
  validate_cmd->callback([&] { action = [&] { return cmd_rulepack_validate(validate_path); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  try {
    status = action ? action() : kExitError;
  } catch (const std::exception& e) {
    std::cerr << "atdlab: " << e.what() << '\n';
    return kExitError;
  }
  return status;
}
