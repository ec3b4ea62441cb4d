#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace botgraph {

enum class ErrorKind {
  input,
  format,
  labeling_conflict,
  invalid_uri,
  crawl,
  numerical_instability,
  infeasible_constraints,
  layout_required,
  io,
  duplicate_key,
  config,
  coverage,
  undefined_metrics,
  empty_session,
};

std::string_view to_string(ErrorKind kind);

// Every module reports failures through this one exception type; the CLI maps
// the kind onto an exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace botgraph
