#pragma once

#include "botgraph/ingest.hpp"

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace botgraph {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

inline constexpr std::string_view kInvalidPattern = "INVALID";

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

// Directed graph of URL patterns. Node ids follow insertion order and the
// reserved INVALID node is always present. Instances are immutable; use
// SitemapBuilder to create one.
class Sitemap {
 public:
  std::size_t size() const noexcept { return patterns_.size(); }
  const std::string& pattern(NodeId id) const { return patterns_.at(id); }
  const std::vector<std::string>& patterns() const noexcept { return patterns_; }
  std::optional<NodeId> find(std::string_view pattern) const;

  NodeId invalid_node_id() const noexcept { return invalid_id_; }
  const std::set<Edge>& edges() const noexcept { return edges_; }

  bool has_coordinates() const noexcept { return coordinates_.has_value(); }
  // Throws Error(layout_required) when absent.
  const std::vector<Point>& coordinates() const;
  Sitemap with_coordinates(std::vector<Point> coordinates) const;
  Sitemap without_coordinates() const;

  // Throws Error(format) naming the first violated invariant.
  void validate() const;

 private:
  friend class SitemapBuilder;
  Sitemap() = default;

  std::vector<std::string> patterns_;
  std::unordered_map<std::string, NodeId> index_;
  std::set<Edge> edges_;
  NodeId invalid_id_ = 0;
  std::optional<std::vector<Point>> coordinates_;
};

class SitemapBuilder {
 public:
  // Returns the id of `pattern`, inserting it when new.
  NodeId add_node(std::string_view pattern);
  std::optional<NodeId> find(std::string_view pattern) const;
  std::size_t size() const noexcept { return patterns_.size(); }
  void add_edge(NodeId from, NodeId to);
  // Appends INVALID when it was never added, then validates.
  Sitemap finish() &&;

 private:
  std::vector<std::string> patterns_;
  std::unordered_map<std::string, NodeId> index_;
  std::set<Edge> edges_;
};

// Passive sniffing: patterns of successfully served requests plus one edge per
// adjacent pair of served requests inside a session.
Sitemap build_from_sessions(const std::vector<Session>& sessions);

// {"nodes": [...], "edges": [[from, to], ...], "coordinates": {pattern: [x, y]}}
std::string to_json(const Sitemap& sitemap);
Sitemap sitemap_from_json(std::string_view text);
Sitemap load_from_file(const std::string& path);
void save_to_file(const Sitemap& sitemap, const std::string& path);

}  // namespace botgraph
