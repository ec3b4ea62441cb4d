#pragma once

#include "botgraph/ingest.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace botgraph {

struct BotShares {
  double bor = 0.0;  // bot requests / all requests
  double bos = 0.0;  // bot sessions / all sessions
};

// Throws Error(undefined_metrics) for empty input (or zero requests) and
// Error(input) for an unlabeled session.
BotShares bot_shares(const std::vector<Session>& sessions);

struct ConfusionCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fn = 0;

  std::uint64_t total() const noexcept { return tp + fp + tn + fn; }
};

// "bot" is the positive class. A metric whose denominator is zero is left
// empty rather than reported as 0 or 1.
struct EvalReport {
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> accuracy;
  std::optional<double> bor;
  std::optional<double> bos;
  ConfusionCounts counts;
};

EvalReport report_from_counts(const ConfusionCounts& counts);

// Throws Error(coverage) listing truth ids without a prediction and
// prediction ids absent from the truth.
EvalReport evaluate(const std::map<std::string, Label>& truth,
                    const std::map<std::string, Label>& predictions);

struct Prediction {
  std::string session_id;
  Label label = Label::human;
  double score = 0.0;
};

// predictions.csv: session_id,label,score
std::vector<Prediction> read_predictions(const std::filesystem::path& path);

std::string report_to_json(const EvalReport& report);
std::string report_summary(const EvalReport& report);

}  // namespace botgraph
