#pragma once

#include <compare>
#include <functional>
#include <string>
#include <string_view>

namespace botgraph {

// Canonical URL pattern such as "/page?id=*". Only `normalize` produces one
// from arbitrary text, so every instance satisfies the canonical-form rules.
class UrlPattern {
 public:
  const std::string& value() const noexcept { return value_; }

  friend auto operator<=>(const UrlPattern&, const UrlPattern&) = default;
  friend bool operator==(const UrlPattern&, const UrlPattern&) = default;

 private:
  friend UrlPattern normalize(std::string_view uri);
  explicit UrlPattern(std::string value) : value_(std::move(value)) {}

  std::string value_;
};

// Collapses a concrete request URI to its pattern:
//   - the fragment is dropped and percent-escapes are lower-cased;
//   - trailing slashes are removed (root stays "/");
//   - path segments that are all digits, hex runs of 8+ chars or UUIDs become "*";
//   - query values become "*", keys are de-duplicated and sorted.
// Throws Error(invalid_uri) unless `uri` starts with '/'.
UrlPattern normalize(std::string_view uri);

// True when `segment` would be generalized to "*".
bool is_identifier_segment(std::string_view segment);

}  // namespace botgraph

template <>
struct std::hash<botgraph::UrlPattern> {
  std::size_t operator()(const botgraph::UrlPattern& p) const noexcept {
    return std::hash<std::string>{}(p.value());
  }
};
