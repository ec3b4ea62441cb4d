#pragma once

#include "botgraph/ingest.hpp"
#include "botgraph/sitemap.hpp"
#include "botgraph/subgraph.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace botgraph {

// Spot radius as a function of access frequency:
//   f(x) = c / (1 + exp(b - a*x))
// pinned by f(1) = r_min, f(+inf) = r_max and f(x_gate) = r_gate.
struct RadiusParams {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double r_min = 0.0;
  double r_max = 0.0;
  double x_gate = 0.0;
  double r_gate = 0.0;
};

// Throws Error(infeasible_constraints) unless 0 < r_min < r_gate < r_max and x_gate > 1.
RadiusParams solve_radius_params(double r_min, double r_max, double x_gate, double r_gate);

RadiusParams default_radius_params();  // r_min 4, r_max 80, x_gate 50, r_gate 50

double radius(const RadiusParams& params, double frequency);

struct RenderConfig {
  int image_size = 256;
  double padding_fraction = 0.05;
  int line_width = 2;  // 0 disables lines
  RadiusParams radius = default_radius_params();

  void validate() const;
};

struct TraceImage {
  int size = 0;
  std::vector<std::uint8_t> pixels;  // row-major, 0 = black, 255 = white
  std::string session_id;
  std::optional<Label> label;

  std::uint8_t at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * size + x]; }
};

// Geometry is resolved to fixed point before any pixel decision: one pixel is
// kSubpixel units and pixel (i, j) is sampled at (i, j) * kSubpixel.
inline constexpr std::int64_t kSubpixel = 256;

struct Disc {
  std::int64_t cx = 0;
  std::int64_t cy = 0;
  std::int64_t r = 0;
};

struct Segment {
  std::int64_t ax = 0, ay = 0;
  std::int64_t bx = 0, by = 0;
  std::int64_t half_width = 0;
};

struct Scene {
  int size = 0;
  std::vector<Segment> segments;  // drawn first
  std::vector<Disc> discs;        // drawn over the segments
};

// Unit-square point -> fixed-point canvas position inside the padded region.
std::int64_t to_canvas(double unit, const RenderConfig& config);

// Throws Error(layout_required) when the sitemap has no coordinates.
Scene build_scene(const Sitemap& sitemap, const SessionSubgraph& subgraph,
                  const RenderConfig& config);

// Exact membership predicates used by the rasterizer.
bool disc_covers(const Disc& disc, int px, int py);
bool segment_covers(const Segment& segment, int px, int py);

std::vector<std::uint8_t> rasterize(const Scene& scene);

TraceImage render(const Sitemap& sitemap, const SessionSubgraph& subgraph,
                  const RenderConfig& config);

}  // namespace botgraph
