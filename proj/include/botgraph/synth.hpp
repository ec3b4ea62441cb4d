#pragma once

#include "botgraph/ingest.hpp"
#include "botgraph/sitemap.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace botgraph {

enum class TrafficKind { human_walk, scraper, crawler, bruteforcer };

std::string_view to_string(TrafficKind kind);
std::optional<TrafficKind> parse_traffic_kind(std::string_view text);

struct TrafficProfile {
  TrafficKind kind = TrafficKind::human_walk;
  std::uint32_t min_length = 5;
  std::uint32_t max_length = 15;
  std::uint64_t seed = 0;
  double request_rate = 0.2;  // mean requests per second, drives timestamp gaps

  double edge_follow_probability = 0.85;  // human_walk
  std::optional<std::string> target_pattern;  // scraper; drawn from the sitemap when unset
  double repeat_fraction = 0.8;              // scraper
  double invalid_fraction = 0.6;             // bruteforcer

  // Throws Error(config).
  void validate() const;
};

struct ProfileRequest {
  TrafficProfile profile;
  std::size_t sessions = 0;
};

struct SynthOptions {
  std::string host = "shop.example";
  std::string epoch = "2019-01-12T00:00:00Z";
  double session_rate = 0.5;  // new sessions per second, across all profiles
  std::uint64_t seed = 0;     // interleaving of session start times
};

// Labeled sessions over `sitemap`. Deterministic given the seeds; output is
// ordered by session start time. Session ids read "<kind>-<profile>-<n>".
// Throws Error(config) for a sitemap with fewer than two real nodes or a
// scraper target missing from it.
std::vector<Session> generate(const Sitemap& sitemap, const std::vector<ProfileRequest>& profiles,
                              const SynthOptions& options = {});

// Replaces every "*" in a pattern with a fresh numeric value.
std::string instantiate_pattern(std::string_view pattern, std::mt19937_64& rng);

// JSON profile file:
// {"host": "...", "profiles": [{"kind": "scraper", "sessions": 100,
//   "min_length": 20, "max_length": 60, "target": "/p?id=*", ...}]}
// Profile seeds default to a mix of `seed` and the profile index.
std::pair<std::vector<ProfileRequest>, SynthOptions> load_profiles(const std::string& path,
                                                                   std::uint64_t seed);

}  // namespace botgraph
