#include "botgraph/error.hpp"

namespace botgraph {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::input: return "input error";
    case ErrorKind::format: return "format error";
    case ErrorKind::labeling_conflict: return "labeling conflict";
    case ErrorKind::invalid_uri: return "invalid uri";
    case ErrorKind::crawl: return "crawl error";
    case ErrorKind::numerical_instability: return "numerical instability";
    case ErrorKind::infeasible_constraints: return "infeasible constraints";
    case ErrorKind::layout_required: return "layout required";
    case ErrorKind::io: return "i/o error";
    case ErrorKind::duplicate_key: return "duplicate key";
    case ErrorKind::config: return "config error";
    case ErrorKind::coverage: return "coverage error";
    case ErrorKind::undefined_metrics: return "undefined metrics";
    case ErrorKind::empty_session: return "empty session";
  }
  return "error";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

}  // namespace botgraph
