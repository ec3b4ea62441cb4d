#pragma once

#include "botgraph/ingest.hpp"
#include "botgraph/sitemap.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace botgraph {

struct SessionSubgraph {
  std::string session_id;
  std::map<NodeId, std::uint64_t> frequencies;  // access count per mapped node
  std::set<Edge> edges;                          // distinct adjacent transitions, from != to
  std::optional<Label> label;

  std::size_t spot_count() const noexcept { return frequencies.size(); }

  friend bool operator==(const SessionSubgraph&, const SessionSubgraph&) = default;
};

// Status >= 400 and patterns absent from the sitemap map to INVALID.
NodeId map_request(const Sitemap& sitemap, const Request& request);

// Throws Error(empty_session) for a session without requests.
SessionSubgraph map_session(const Sitemap& sitemap, const Session& session);

inline constexpr std::size_t kDefaultMinSpotsExclusive = 3;

// Keeps subgraphs with strictly more than `min_spots_exclusive` distinct nodes.
std::vector<SessionSubgraph> filter_min_spots(std::vector<SessionSubgraph> subgraphs,
                                              std::size_t min_spots_exclusive =
                                                  kDefaultMinSpotsExclusive);

// Debug form: frequencies keyed by pattern, edges as pattern pairs.
std::string to_json(const Sitemap& sitemap, const SessionSubgraph& subgraph);

}  // namespace botgraph
