#include "botgraph/subgraph.hpp"

#include "botgraph/error.hpp"
#include "botgraph/url_pattern.hpp"

#include <json.hpp>

#include <algorithm>

namespace botgraph {

NodeId map_request(const Sitemap& sitemap, const Request& request) {
  if (request.status >= 400) return sitemap.invalid_node_id();
  if (request.request_uri.empty() || request.request_uri.front() != '/') {
    return sitemap.invalid_node_id();
  }
  auto id = sitemap.find(normalize(request.request_uri).value());
  return id ? *id : sitemap.invalid_node_id();
}

SessionSubgraph map_session(const Sitemap& sitemap, const Session& session) {
  if (session.requests.empty()) {
    throw Error(ErrorKind::empty_session, "session '" + session.session_id + "' has no requests");
  }
  SessionSubgraph out;
  out.session_id = session.session_id;
  out.label = session.label;
  std::optional<NodeId> previous;
  for (const auto& request : session.requests) {
    NodeId node = map_request(sitemap, request);
    ++out.frequencies[node];
    if (previous && *previous != node) out.edges.emplace(*previous, node);
    previous = node;
  }
  return out;
}

std::vector<SessionSubgraph> filter_min_spots(std::vector<SessionSubgraph> subgraphs,
                                              std::size_t min_spots_exclusive) {
  std::erase_if(subgraphs, [&](const SessionSubgraph& g) {
    return g.spot_count() <= min_spots_exclusive;
  });
  return subgraphs;
}

std::string to_json(const Sitemap& sitemap, const SessionSubgraph& subgraph) {
  nlohmann::ordered_json doc;
  doc["session_id"] = subgraph.session_id;
  auto freq = nlohmann::ordered_json::object();
  for (const auto& [node, count] : subgraph.frequencies) freq[sitemap.pattern(node)] = count;
  doc["frequencies"] = std::move(freq);
  auto edges = nlohmann::ordered_json::array();
  for (const auto& [from, to] : subgraph.edges) {
    edges.push_back({sitemap.pattern(from), sitemap.pattern(to)});
  }
  doc["edges"] = std::move(edges);
  if (subgraph.label) doc["label"] = std::string(to_string(*subgraph.label));
  return doc.dump();
}

}  // namespace botgraph
