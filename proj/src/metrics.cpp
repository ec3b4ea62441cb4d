#include "botgraph/metrics.hpp"

#include "botgraph/csv.hpp"
#include "botgraph/error.hpp"

#include <json.hpp>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <unordered_map>

namespace botgraph {

BotShares bot_shares(const std::vector<Session>& sessions) {
  if (sessions.empty()) throw Error(ErrorKind::undefined_metrics, "no sessions");
  std::uint64_t bot_sessions = 0, requests = 0, bot_requests = 0;
  for (const auto& s : sessions) {
    if (!s.label) throw Error(ErrorKind::input, "session '" + s.session_id + "' is unlabeled");
    requests += s.requests.size();
    if (*s.label == Label::bot) {
      ++bot_sessions;
      bot_requests += s.requests.size();
    }
  }
  if (requests == 0) throw Error(ErrorKind::undefined_metrics, "sessions hold no requests");
  return BotShares{static_cast<double>(bot_requests) / static_cast<double>(requests),
                   static_cast<double>(bot_sessions) / static_cast<double>(sessions.size())};
}

namespace {

std::optional<double> ratio(std::uint64_t num, std::uint64_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

EvalReport report_from_counts(const ConfusionCounts& c) {
  EvalReport r;
  r.counts = c;
  r.precision = ratio(c.tp, c.tp + c.fp);
  r.recall = ratio(c.tp, c.tp + c.fn);
  r.accuracy = ratio(c.tp + c.tn, c.total());
  const std::uint64_t positives = c.tp + c.fn;
  r.bos = ratio(positives, c.total());
  return r;
}

EvalReport evaluate(const std::map<std::string, Label>& truth,
                    const std::map<std::string, Label>& predictions) {
  std::vector<std::string> missing, unknown;
  for (const auto& [id, label] : truth) {
    if (!predictions.count(id)) missing.push_back(id);
  }
  for (const auto& [id, label] : predictions) {
    if (!truth.count(id)) unknown.push_back(id);
  }
  if (!missing.empty() || !unknown.empty()) {
    std::string msg;
    auto list = [&msg](const char* what, const std::vector<std::string>& ids) {
      if (ids.empty()) return;
      if (!msg.empty()) msg += "; ";
      msg += what;
      for (std::size_t i = 0; i < ids.size(); ++i) msg += (i ? ", " : " ") + ids[i];
    };
    list("missing predictions for", missing);
    list("predictions for unknown sessions", unknown);
    throw Error(ErrorKind::coverage, msg);
  }

  ConfusionCounts c;
  for (const auto& [id, actual] : truth) {
    const Label predicted = predictions.at(id);
    if (actual == Label::bot) {
      (predicted == Label::bot ? c.tp : c.fn)++;
    } else {
      (predicted == Label::bot ? c.fp : c.tn)++;
    }
  }
  return report_from_counts(c);
}

std::vector<Prediction> read_predictions(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open predictions " + path.string());
  std::vector<std::string> fields;
  std::size_t lines = 0, line_no = 0;
  bool ok = true;
  if (!read_csv_record(in, fields, lines, ok)) return {};
  line_no += lines;
  std::unordered_map<std::string, std::size_t> column;
  for (std::size_t i = 0; i < fields.size(); ++i) column.emplace(fields[i], i);
  for (const char* name : {"session_id", "label", "score"}) {
    if (!column.count(name)) {
      throw Error(ErrorKind::format,
                  path.string() + ": predictions lack column '" + std::string(name) + "'");
    }
  }
  const std::size_t width = fields.size();

  std::vector<Prediction> out;
  while (read_csv_record(in, fields, lines, ok)) {
    const std::size_t record_line = line_no + 1;
    line_no += lines;
    if (fields.size() == 1 && fields[0].empty()) continue;
    auto bad = [&](const std::string& what) {
      return Error(ErrorKind::format, path.string() + ":" + std::to_string(record_line) + ": " + what);
    };
    if (!ok || fields.size() != width) throw bad("malformed row");
    Prediction p;
    p.session_id = fields[column["session_id"]];
    auto label = parse_label(fields[column["label"]]);
    if (!label) throw bad("unknown label '" + fields[column["label"]] + "'");
    p.label = *label;
    const std::string& score = fields[column["score"]];
    auto [ptr, ec] = std::from_chars(score.data(), score.data() + score.size(), p.score);
    if (ec != std::errc() || ptr != score.data() + score.size()) throw bad("bad score '" + score + "'");
    out.push_back(std::move(p));
  }
  return out;
}

std::string report_to_json(const EvalReport& report) {
  nlohmann::ordered_json doc;
  auto put = [&doc](const char* key, const std::optional<double>& v) {
    doc[key] = v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
  };
  put("precision", report.precision);
  put("recall", report.recall);
  put("accuracy", report.accuracy);
  put("bor", report.bor);
  put("bos", report.bos);
  doc["counts"] = {{"tp", report.counts.tp},
                   {"fp", report.counts.fp},
                   {"tn", report.counts.tn},
                   {"fn", report.counts.fn}};
  return doc.dump(2) + "\n";
}

std::string report_summary(const EvalReport& report) {
  auto pct = [](const std::optional<double>& v) {
    if (!v) return std::string("undefined");
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f%%", *v * 100.0);
    return std::string(buf);
  };
  char counts[128];
  std::snprintf(counts, sizeof(counts), "tp=%llu fp=%llu tn=%llu fn=%llu",
                static_cast<unsigned long long>(report.counts.tp),
                static_cast<unsigned long long>(report.counts.fp),
                static_cast<unsigned long long>(report.counts.tn),
                static_cast<unsigned long long>(report.counts.fn));
  return "precision " + pct(report.precision) + "  recall " + pct(report.recall) + "  accuracy " +
         pct(report.accuracy) + "  BoR " + pct(report.bor) + "  BoS " + pct(report.bos) + "  (" +
         counts + ")";
}

}  // namespace botgraph
