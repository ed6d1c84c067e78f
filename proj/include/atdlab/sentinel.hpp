#pragma once

// Defensive detectors over transcript and view files: cross-device diffing,
// quote consistency within one device, per-sender strategy drift, and an
// evaluation harness that scores them against simulator ground truth.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "atdlab/analysis.hpp"
#include "atdlab/error.hpp"
#include "atdlab/simnet.hpp"
#include "atdlab/text.hpp"
#include "atdlab/thread.hpp"
#include "json.hpp"

namespace atdlab {

enum class Verdict { clean, mutated, suspicious };

inline std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::clean: return "clean";
    case Verdict::mutated: return "mutated";
    case Verdict::suspicious: return "suspicious";
  }
  return "?";
}

struct Evidence {
  std::string kind;
  std::string message_id;
  std::string detail;

  bool operator==(const Evidence&) const = default;
};

struct DetectionReport {
  Verdict verdict = Verdict::clean;
  double score = 0.0;
  std::vector<Evidence> evidence;

  bool positive() const { return verdict != Verdict::clean; }

  std::set<std::string> flagged_ids() const {
    std::set<std::string> out;
    for (const auto& e : evidence) out.insert(e.message_id);
    return out;
  }
};

namespace detail {

inline std::size_t lcs_length(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j)
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

inline std::string token_diff_summary(const std::string& shown, const std::string& canonical) {
  const auto a = text::words(shown);
  const auto b = text::words(canonical);
  const std::size_t common = lcs_length(a, b);
  std::ostringstream os;
  os << "tokens -" << (b.size() - common) << " +" << (a.size() - common) << ", edit distance "
     << text::edit_distance(a, b);
  return os.str();
}

inline std::map<std::string, const Message*> index_by_id(std::span<const Message> msgs, const char* what) {
  std::map<std::string, const Message*> out;
  for (const auto& m : msgs)
    if (!out.emplace(m.id, &m).second) throw InputError(std::string(what) + ": duplicate message id '" + m.id + "'");
  return out;
}

}  // namespace detail

/// Compares the normalized fresh text of every message between a rendered
/// view and a canonical one (for example, the sender's originals).
inline DetectionReport diff_detect(std::span<const Message> rendered, std::span<const Message> canonical) {
  const auto shown = detail::index_by_id(rendered, "rendered view");
  const auto truth = detail::index_by_id(canonical, "canonical view");
  if (shown.size() != truth.size() ||
      !std::equal(shown.begin(), shown.end(), truth.begin(), [](const auto& a, const auto& b) { return a.first == b.first; }))
    throw InputError("diff_detect: views cover different message ids");

  DetectionReport r;
  for (const auto& m : rendered) {
    const std::string a = text::normalize(m.fresh_text());
    const std::string b = text::normalize(truth.at(m.id)->fresh_text());
    if (a != b) r.evidence.push_back({"fresh_text_differs", m.id, detail::token_diff_summary(a, b)});
  }
  if (!rendered.empty()) r.score = static_cast<double>(r.evidence.size()) / static_cast<double>(rendered.size());
  r.verdict = r.evidence.empty() ? Verdict::clean : Verdict::mutated;
  return r;
}

/// Checks every quote in one device's view against that device's stored
/// copy of the quoted message.
inline DetectionReport quote_mismatch_detect(std::span<const Message> view) {
  const auto by_id = detail::index_by_id(view, "view");
  DetectionReport r;
  std::size_t quotes = 0;
  for (const auto& m : view) {
    for (const auto& s : m.segments) {
      if (s.kind != SegmentKind::quote) continue;
      auto it = by_id.find(s.source_id);
      if (it == by_id.end())
        throw InputError("quote_mismatch_detect: message '" + m.id + "' quotes unknown '" + s.source_id + "'");
      ++quotes;
      const std::string expected = render_quote(*it->second).text;
      if (text::normalize(s.text) != text::normalize(expected))
        r.evidence.push_back({"quote_mismatch", m.id, "quote of " + s.source_id + " differs from the stored copy"});
    }
  }
  if (quotes) r.score = static_cast<double>(r.evidence.size()) / static_cast<double>(quotes);
  r.verdict = r.evidence.empty() ? Verdict::clean : Verdict::mutated;
  return r;
}

struct DriftConfig {
  std::size_t window = 3;
  double alarm = 0.5;
};

/// |rank(modal of the last `window` labels) - rank(modal of all labels)| / 3.
inline DetectionReport drift_detect(const std::vector<Strategy>& history, const DriftConfig& cfg = {}) {
  if (history.empty()) throw InputError("drift_detect: empty history");
  if (cfg.window == 0) throw InputError("drift_detect: window must be positive");
  const std::size_t w = std::min(cfg.window, history.size());
  const Strategy recent = modal_label(history.end() - static_cast<std::ptrdiff_t>(w), history.end());
  const Strategy overall = modal_label(history);
  DetectionReport r;
  r.score = std::abs(rank(recent) - rank(overall)) / 3.0;
  if (r.score >= cfg.alarm) {
    r.verdict = Verdict::suspicious;
    r.evidence.push_back({"strategy_drift", "",
                          "recent modal " + std::string(strategy_name(recent)) + " vs overall modal " +
                              std::string(strategy_name(overall))});
  }
  return r;
}

/// Runs drift_detect over every prefix of a sender's history, in order.
inline std::vector<DetectionReport> drift_scan(const std::vector<Strategy>& history, const DriftConfig& cfg = {}) {
  std::vector<DetectionReport> out;
  for (std::size_t n = 1; n <= history.size(); ++n)
    out.push_back(drift_detect(std::vector<Strategy>(history.begin(), history.begin() + static_cast<std::ptrdiff_t>(n)), cfg));
  return out;
}

/// Labels of the messages `sender` delivered into a view, in view order.
/// Messages without fresh text carry no strategy and are skipped.
inline std::vector<std::pair<std::string, Strategy>> sender_history(std::span<const Message> view, const std::string& sender,
                                                                    const RulePack& pack) {
  std::vector<std::pair<std::string, Strategy>> out;
  for (const auto& m : view) {
    if (m.from != sender) continue;
    const auto fresh = m.fresh_texts();
    if (!has_content(fresh)) continue;
    out.emplace_back(m.id, classify(fresh, pack).label);
  }
  return out;
}

/// Online drift over a view: every message from `sender` whose history
/// prefix trips the alarm becomes an evidence item; the score is the maximum.
inline DetectionReport drift_detect_view(std::span<const Message> view, const std::string& sender, const RulePack& pack,
                                         const DriftConfig& cfg = {}) {
  const auto hist = sender_history(view, sender, pack);
  DetectionReport r;
  if (hist.empty()) return r;
  std::vector<Strategy> labels;
  for (const auto& [_, l] : hist) labels.push_back(l);
  const auto scan = drift_scan(labels, cfg);
  for (std::size_t i = 0; i < scan.size(); ++i) {
    r.score = std::max(r.score, scan[i].score);
    if (scan[i].positive()) r.evidence.push_back({"strategy_drift", hist[i].first, scan[i].evidence.front().detail});
  }
  r.verdict = r.evidence.empty() ? Verdict::clean : Verdict::suspicious;
  return r;
}

enum class DetectorKind { diff, thread, drift };

inline std::string_view detector_name(DetectorKind k) {
  switch (k) {
    case DetectorKind::diff: return "diff";
    case DetectorKind::thread: return "thread";
    case DetectorKind::drift: return "drift";
  }
  return "?";
}

/// Message ids the detector flags in one transcript, by receiving actor.
inline std::set<std::string> flagged_messages(DetectorKind kind, const Transcript& t, const RulePack& pack,
                                              const DriftConfig& drift = {}) {
  std::set<std::string> flagged;
  for (const auto& actor : t.actors) {
    const auto& view = t.views.at(actor);
    DetectionReport rep;
    switch (kind) {
      case DetectorKind::diff: {
        std::vector<Message> canonical;
        for (const auto& m : view)
          for (const auto& s : t.sent)
            if (s.id == m.id) canonical.push_back(s);
        rep = diff_detect(view, canonical);
        break;
      }
      case DetectorKind::thread: rep = quote_mismatch_detect(view); break;
      case DetectorKind::drift:
        for (const auto& other : t.actors) {
          if (other == actor) continue;
          auto r = drift_detect_view(view, other, pack, drift);
          rep.evidence.insert(rep.evidence.end(), r.evidence.begin(), r.evidence.end());
        }
        break;
    }
    for (const auto& e : rep.evidence) {
      // Only count flags on messages this actor received.
      for (const auto& d : t.deliveries)
        if (d.message_id == e.message_id && d.to == actor) flagged.insert(e.message_id);
    }
  }
  return flagged;
}

struct EvaluationRow {
  std::string scenario;
  DetectorKind detector = DetectorKind::diff;
  std::optional<double> tpr;  // undefined without altered deliveries
  std::optional<double> fpr;  // undefined without clean deliveries
};

/// Per-scenario true/false positive rates over deliveries; a delivery is
/// positive when the attacker altered its fresh text.
inline std::vector<EvaluationRow> evaluate(DetectorKind kind, std::span<const Transcript> suite, const RulePack& pack,
                                           const DriftConfig& drift = {}) {
  if (suite.empty()) throw InputError("evaluate: empty scenario suite");
  std::vector<EvaluationRow> rows;
  for (const auto& t : suite) {
    const auto flagged = flagged_messages(kind, t, pack, drift);
    std::size_t tp = 0, fn = 0, fp = 0, tn = 0;
    for (const auto& d : t.deliveries) {
      const bool hit = flagged.count(d.message_id) != 0;
      if (d.altered) {
        (hit ? tp : fn)++;
      } else {
        (hit ? fp : tn)++;
      }
    }
    EvaluationRow row{t.scenario, kind, std::nullopt, std::nullopt};
    if (tp + fn) row.tpr = static_cast<double>(tp) / static_cast<double>(tp + fn);
    if (fp + tn) row.fpr = static_cast<double>(fp) / static_cast<double>(fp + tn);
    rows.push_back(row);
  }
  return rows;
}

inline std::string format_rate(const std::optional<double>& v) {
  if (!v) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", *v);
  return buf;
}

inline void write_evaluation_csv(std::ostream& out, std::span<const EvaluationRow> rows) {
  out << "scenario,detector,tpr,fpr\n";
  for (const auto& r : rows)
    out << r.scenario << ',' << detector_name(r.detector) << ',' << format_rate(r.tpr) << ',' << format_rate(r.fpr) << '\n';
}

inline json to_json(const DetectionReport& r) {
  json ev = json::array();
  for (const auto& e : r.evidence) ev.push_back({{"kind", e.kind}, {"message_id", e.message_id}, {"detail", e.detail}});
  return {{"verdict", std::string(verdict_name(r.verdict))}, {"score", r.score}, {"evidence", ev}};
}

}  // namespace atdlab
