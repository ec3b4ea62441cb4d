#include "botgraph/sitemap.hpp"

#include "botgraph/error.hpp"
#include "botgraph/url_pattern.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace botgraph {

std::optional<NodeId> Sitemap::find(std::string_view pattern) const {
  auto it = index_.find(std::string(pattern));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const std::vector<Point>& Sitemap::coordinates() const {
  if (!coordinates_) throw Error(ErrorKind::layout_required, "sitemap has no coordinates");
  return *coordinates_;
}

Sitemap Sitemap::with_coordinates(std::vector<Point> coordinates) const {
  Sitemap copy = *this;
  copy.coordinates_ = std::move(coordinates);
  copy.validate();
  return copy;
}

Sitemap Sitemap::without_coordinates() const {
  Sitemap copy = *this;
  copy.coordinates_.reset();
  return copy;
}

void Sitemap::validate() const {
  if (patterns_.size() != index_.size()) throw Error(ErrorKind::format, "duplicate node pattern");
  for (NodeId id = 0; id < patterns_.size(); ++id) {
    auto it = index_.find(patterns_[id]);
    if (it == index_.end() || it->second != id) {
      throw Error(ErrorKind::format, "node index out of sync for '" + patterns_[id] + "'");
    }
  }
  if (invalid_id_ >= patterns_.size() || patterns_[invalid_id_] != kInvalidPattern) {
    throw Error(ErrorKind::format, "missing INVALID node");
  }
  for (const auto& [from, to] : edges_) {
    if (from >= patterns_.size() || to >= patterns_.size()) {
      throw Error(ErrorKind::format, "edge endpoint out of range");
    }
  }
  if (coordinates_) {
    if (coordinates_->size() != patterns_.size()) {
      throw Error(ErrorKind::format, "coordinate count does not match node count");
    }
    for (NodeId id = 0; id < coordinates_->size(); ++id) {
      const Point& p = (*coordinates_)[id];
      if (!(p.x >= 0.0 && p.x <= 1.0 && p.y >= 0.0 && p.y <= 1.0)) {
        throw Error(ErrorKind::format, "coordinate of '" + patterns_[id] + "' outside unit square");
      }
    }
  }
}

NodeId SitemapBuilder::add_node(std::string_view pattern) {
  auto [it, inserted] =
      index_.try_emplace(std::string(pattern), static_cast<NodeId>(patterns_.size()));
  if (inserted) patterns_.emplace_back(pattern);
  return it->second;
}

std::optional<NodeId> SitemapBuilder::find(std::string_view pattern) const {
  auto it = index_.find(std::string(pattern));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void SitemapBuilder::add_edge(NodeId from, NodeId to) {
  if (from >= patterns_.size() || to >= patterns_.size()) {
    throw Error(ErrorKind::format, "edge endpoint out of range");
  }
  edges_.emplace(from, to);
}

Sitemap SitemapBuilder::finish() && {
  NodeId invalid = add_node(kInvalidPattern);
  Sitemap sitemap;
  sitemap.patterns_ = std::move(patterns_);
  sitemap.index_ = std::move(index_);
  sitemap.edges_ = std::move(edges_);
  sitemap.invalid_id_ = invalid;
  sitemap.validate();
  return sitemap;
}

Sitemap build_from_sessions(const std::vector<Session>& sessions) {
  SitemapBuilder builder;
  for (const auto& session : sessions) {
    std::optional<NodeId> previous;
    for (const auto& request : session.requests) {
      if (request.status >= 400) {
        previous.reset();
        continue;
      }
      NodeId current = builder.add_node(normalize(request.request_uri).value());
      if (previous && *previous != current) builder.add_edge(*previous, current);
      previous = current;
    }
  }
  return std::move(builder).finish();
}

std::string to_json(const Sitemap& sitemap) {
  nlohmann::ordered_json doc;
  doc["nodes"] = sitemap.patterns();
  auto edges = nlohmann::ordered_json::array();
  for (const auto& [from, to] : sitemap.edges()) {
    edges.push_back({sitemap.pattern(from), sitemap.pattern(to)});
  }
  doc["edges"] = std::move(edges);
  if (sitemap.has_coordinates()) {
    auto coords = nlohmann::ordered_json::object();
    const auto& points = sitemap.coordinates();
    for (NodeId id = 0; id < sitemap.size(); ++id) {
      coords[sitemap.pattern(id)] = {points[id].x, points[id].y};
    }
    doc["coordinates"] = std::move(coords);
  }
  return doc.dump(2) + "\n";
}

Sitemap sitemap_from_json(std::string_view text) {
  using json = nlohmann::json;
  json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw Error(ErrorKind::format, "sitemap is not a JSON object");
  }
  auto nodes = doc.find("nodes");
  if (nodes == doc.end() || !nodes->is_array()) {
    throw Error(ErrorKind::format, "sitemap lacks a \"nodes\" array");
  }

  SitemapBuilder builder;
  for (const auto& node : *nodes) {
    if (!node.is_string()) throw Error(ErrorKind::format, "node pattern must be a string");
    const auto& pattern = node.get_ref<const std::string&>();
    if (builder.find(pattern)) {
      throw Error(ErrorKind::format, "duplicate node pattern '" + pattern + "'");
    }
    builder.add_node(pattern);
  }

  if (auto edges = doc.find("edges"); edges != doc.end()) {
    if (!edges->is_array()) throw Error(ErrorKind::format, "\"edges\" must be an array");
    for (const auto& edge : *edges) {
      if (!edge.is_array() || edge.size() != 2 || !edge[0].is_string() || !edge[1].is_string()) {
        throw Error(ErrorKind::format, "edge must be a [from, to] pair of patterns");
      }
      NodeId ends[2];
      for (int k = 0; k < 2; ++k) {
        const auto& pattern = edge[k].get_ref<const std::string&>();
        auto id = builder.find(pattern);
        if (!id) throw Error(ErrorKind::format, "edge names unknown pattern '" + pattern + "'");
        ends[k] = *id;
      }
      builder.add_edge(ends[0], ends[1]);
    }
  }

  Sitemap sitemap = std::move(builder).finish();

  if (auto coords = doc.find("coordinates"); coords != doc.end() && !coords->is_null()) {
    if (!coords->is_object()) throw Error(ErrorKind::format, "\"coordinates\" must be an object");
    std::vector<Point> points(sitemap.size());
    std::vector<bool> seen(sitemap.size(), false);
    for (const auto& [pattern, xy] : coords->items()) {
      auto id = sitemap.find(pattern);
      if (!id) throw Error(ErrorKind::format, "coordinates name unknown pattern '" + pattern + "'");
      if (!xy.is_array() || xy.size() != 2 || !xy[0].is_number() || !xy[1].is_number()) {
        throw Error(ErrorKind::format, "coordinate of '" + pattern + "' must be [x, y]");
      }
      points[*id] = Point{xy[0].get<double>(), xy[1].get<double>()};
      seen[*id] = true;
    }
    for (NodeId id = 0; id < sitemap.size(); ++id) {
      if (!seen[id]) {
        throw Error(ErrorKind::format, "coordinates missing for '" + sitemap.pattern(id) + "'");
      }
    }
    sitemap = sitemap.with_coordinates(std::move(points));
  }
  return sitemap;
}

Sitemap load_from_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open sitemap file " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return sitemap_from_json(buffer.str());
}

void save_to_file(const Sitemap& sitemap, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::io, "cannot write sitemap file " + path);
  out << to_json(sitemap);
  if (!out) throw Error(ErrorKind::io, "write failed for " + path);
}

}  // namespace botgraph
