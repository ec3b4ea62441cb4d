#include "botgraph/layout.hpp"

#include "botgraph/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace botgraph {

namespace {

constexpr double kMinDistance = 1e-6;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

double unit_double(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace

void fit_unit_square(std::vector<Point>& pos) {
  if (pos.empty()) return;
  double min_x = pos[0].x, max_x = pos[0].x, min_y = pos[0].y, max_y = pos[0].y;
  for (const auto& p : pos) {
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  }
  const double width = max_x - min_x;
  const double height = max_y - min_y;
  const double extent = std::max(width, height);
  if (!(extent > 0.0)) {
    for (auto& p : pos) p = Point{0.5, 0.5};
    return;
  }
  const double offset_x = (1.0 - width / extent) / 2.0;
  const double offset_y = (1.0 - height / extent) / 2.0;
  for (auto& p : pos) {
    p.x = std::clamp((p.x - min_x) / extent + offset_x, 0.0, 1.0);
    p.y = std::clamp((p.y - min_y) / extent + offset_y, 0.0, 1.0);
  }
}

void LayoutConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw Error(ErrorKind::config, std::string("layout: ") + what);
  };
  require(attraction_stiffness > 0.0, "attraction_stiffness must be positive");
  require(rest_length > 0.0, "rest_length must be positive");
  require(repulsion_strength > 0.0, "repulsion_strength must be positive");
  require(gravity >= 0.0, "gravity must be non-negative");
  require(max_step > 0.0, "max_step must be positive");
  require(damping > 0.0 && damping < 1.0, "damping must lie in (0, 1)");
  require(time_step > 0.0, "time_step must be positive");
  require(max_iterations > 0, "max_iterations must be positive");
  require(convergence_epsilon > 0.0, "convergence_epsilon must be positive");
  require(convergence_epsilon < rest_length, "convergence_epsilon must be below rest_length");
}

std::vector<Point> initial_positions(const Sitemap& sitemap, std::uint64_t seed) {
  std::vector<Point> out;
  out.reserve(sitemap.size());
  const std::uint64_t salt = splitmix64(seed);
  for (const auto& pattern : sitemap.patterns()) {
    std::uint64_t h = splitmix64(fnv1a64(pattern) ^ salt);
    out.push_back(Point{unit_double(h), unit_double(splitmix64(h))});
  }
  return out;
}

std::vector<Point> simulate_layout(const Sitemap& sitemap, std::vector<Point> start,
                                   const LayoutConfig& config, LayoutStats* stats) {
  config.validate();
  const std::size_t n = sitemap.size();
  if (start.size() != n) {
    throw Error(ErrorKind::config, "layout: expected " + std::to_string(n) +
                                       " start positions, got " + std::to_string(start.size()));
  }

  // Undirected, de-duplicated neighbour lists in ascending id order.
  std::vector<std::vector<NodeId>> neighbours(n);
  for (const auto& [from, to] : sitemap.edges()) {
    if (from == to) continue;
    neighbours[from].push_back(to);
    neighbours[to].push_back(from);
  }
  for (auto& list : neighbours) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }

  std::vector<Point> pos = std::move(start);
  std::vector<Point> prev = pos;
  std::vector<Point> next(n);
  const double dt2 = config.time_step * config.time_step;

  LayoutStats local;
  for (std::uint32_t iter = 1; iter <= config.max_iterations; ++iter) {
    double max_disp = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double fx = 0.0, fy = 0.0;
      auto nb = neighbours[i].begin();
      const auto nb_end = neighbours[i].end();
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        double dx = pos[j].x - pos[i].x;
        double dy = pos[j].y - pos[i].y;
        double d = std::sqrt(dx * dx + dy * dy);
        double ux, uy;
        if (d > 0.0) {
          ux = dx / d;
          uy = dy / d;
        } else {
          // Coincident points: separate along x by id order.
          ux = j > i ? 1.0 : -1.0;
          uy = 0.0;
        }
        d = std::max(d, kMinDistance);

        double f = -config.repulsion_strength / (d * d);
        while (nb != nb_end && *nb < j) ++nb;
        if (nb != nb_end && *nb == j) f += config.attraction_stiffness * (d - config.rest_length);
        fx += f * ux;
        fy += f * uy;
      }
      fx -= config.gravity * (pos[i].x - 0.5);
      fy -= config.gravity * (pos[i].y - 0.5);
      const double inv_mass = 1.0 / (1.0 + static_cast<double>(neighbours[i].size()));
      double stepx = config.damping * (pos[i].x - prev[i].x) + fx * inv_mass * dt2;
      double stepy = config.damping * (pos[i].y - prev[i].y) + fy * inv_mass * dt2;
      const double step = std::sqrt(stepx * stepx + stepy * stepy);
      if (step > config.max_step) {
        stepx *= config.max_step / step;
        stepy *= config.max_step / step;
      }
      next[i].x = pos[i].x + stepx;
      next[i].y = pos[i].y + stepy;
      if (!std::isfinite(next[i].x) || !std::isfinite(next[i].y)) {
        throw Error(ErrorKind::numerical_instability,
                    "non-finite position at iteration " + std::to_string(iter));
      }
      double mx = next[i].x - pos[i].x;
      double my = next[i].y - pos[i].y;
      max_disp = std::max(max_disp, std::sqrt(mx * mx + my * my));
    }
    prev.swap(pos);
    pos.swap(next);
    local.iterations = iter;
    local.final_max_displacement = max_disp;
    if (max_disp < config.convergence_epsilon) {
      local.converged = true;
      break;
    }
  }

  if (stats) *stats = local;
  return pos;
}

Sitemap run_layout(const Sitemap& sitemap, const LayoutConfig& config, LayoutStats* stats) {
  std::vector<Point> pos =
      simulate_layout(sitemap, initial_positions(sitemap, config.seed), config, stats);
  fit_unit_square(pos);
  return sitemap.with_coordinates(std::move(pos));
}

}  // namespace botgraph
