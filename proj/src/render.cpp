#include "botgraph/render.hpp"

#include "botgraph/error.hpp"

#include <algorithm>
#include <cmath>

namespace botgraph {

namespace {

using i128 = __int128;

std::int64_t sq(std::int64_t v) { return v * v; }

// Floor/ceil division for positive divisors.
std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  return (a % b != 0 && a < 0) ? q - 1 : q;
}
std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

void paint_disc(std::vector<std::uint8_t>& pixels, int size, const Disc& disc) {
  const std::int64_t y0 = std::max<std::int64_t>(0, ceil_div(disc.cy - disc.r, kSubpixel));
  const std::int64_t y1 = std::min<std::int64_t>(size - 1, floor_div(disc.cy + disc.r, kSubpixel));
  const std::int64_t x0 = std::max<std::int64_t>(0, ceil_div(disc.cx - disc.r, kSubpixel));
  const std::int64_t x1 = std::min<std::int64_t>(size - 1, floor_div(disc.cx + disc.r, kSubpixel));
  for (std::int64_t y = y0; y <= y1; ++y) {
    std::uint8_t* row = pixels.data() + y * size;
    for (std::int64_t x = x0; x <= x1; ++x) {
      if (disc_covers(disc, static_cast<int>(x), static_cast<int>(y))) row[x] = 0;
    }
  }
}

void paint_segment(std::vector<std::uint8_t>& pixels, int size, const Segment& s) {
  const std::int64_t h = s.half_width;
  const std::int64_t y0 =
      std::max<std::int64_t>(0, ceil_div(std::min(s.ay, s.by) - h, kSubpixel));
  const std::int64_t y1 =
      std::min<std::int64_t>(size - 1, floor_div(std::max(s.ay, s.by) + h, kSubpixel));
  const std::int64_t bx0 =
      std::max<std::int64_t>(0, ceil_div(std::min(s.ax, s.bx) - h, kSubpixel));
  const std::int64_t bx1 =
      std::min<std::int64_t>(size - 1, floor_div(std::max(s.ax, s.bx) + h, kSubpixel));

  const double dx = static_cast<double>(s.bx - s.ax);
  const double dy = static_cast<double>(s.by - s.ay);
  const double reach = static_cast<double>(h) * std::sqrt(dx * dx + dy * dy);

  for (std::int64_t y = y0; y <= y1; ++y) {
    std::int64_t x0 = bx0;
    std::int64_t x1 = bx1;
    if (s.by != s.ay) {
      // The thick infinite line through the segment meets this row in an
      // interval; it bounds the capsule, so it only narrows the candidates.
      // The one-pixel margin absorbs rounding; the exact test decides.
      const double rel = static_cast<double>(y * kSubpixel - s.ay) * dx;
      double lo = (rel - reach) / dy;
      double hi = (rel + reach) / dy;
      if (lo > hi) std::swap(lo, hi);
      lo = (lo + static_cast<double>(s.ax)) / static_cast<double>(kSubpixel);
      hi = (hi + static_cast<double>(s.ax)) / static_cast<double>(kSubpixel);
      x0 = std::max<std::int64_t>(x0, static_cast<std::int64_t>(std::floor(lo)) - 1);
      x1 = std::min<std::int64_t>(x1, static_cast<std::int64_t>(std::ceil(hi)) + 1);
    }
    std::uint8_t* row = pixels.data() + y * size;
    for (std::int64_t x = x0; x <= x1; ++x) {
      if (segment_covers(s, static_cast<int>(x), static_cast<int>(y))) row[x] = 0;
    }
  }
}

}  // namespace

void RenderConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw Error(ErrorKind::config, std::string("render: ") + what);
  };
  require(image_size > 0, "image_size must be positive");
  require(padding_fraction >= 0.0 && padding_fraction < 0.4, "padding_fraction must lie in [0, 0.4)");
  require(line_width >= 0, "line_width must not be negative");
  require(static_cast<double>(image_size) >= 2.0 * radius.r_max,
          "image_size must be at least 2 * r_max");
  require(radius.c > 0.0 && radius.a > 0.0, "radius parameters are not solved");
}

std::int64_t to_canvas(double unit, const RenderConfig& config) {
  const double p = config.padding_fraction;
  const double pixel = (p + unit * (1.0 - 2.0 * p)) * static_cast<double>(config.image_size);
  return std::llround(pixel * static_cast<double>(kSubpixel));
}

Scene build_scene(const Sitemap& sitemap, const SessionSubgraph& subgraph,
                  const RenderConfig& config) {
  config.validate();
  const auto& coords = sitemap.coordinates();
  Scene scene;
  scene.size = config.image_size;

  auto center = [&](NodeId id) {
    if (id >= coords.size()) {
      throw Error(ErrorKind::format, "subgraph node " + std::to_string(id) + " not in sitemap");
    }
    return std::pair{to_canvas(coords[id].x, config), to_canvas(coords[id].y, config)};
  };

  if (config.line_width > 0) {
    const std::int64_t half_width = config.line_width * kSubpixel / 2;
    for (const auto& [from, to] : subgraph.edges) {
      auto [ax, ay] = center(from);
      auto [bx, by] = center(to);
      scene.segments.push_back(Segment{ax, ay, bx, by, half_width});
    }
  }
  for (const auto& [node, count] : subgraph.frequencies) {
    auto [cx, cy] = center(node);
    double r = radius(config.radius, static_cast<double>(count));
    scene.discs.push_back(Disc{cx, cy, std::llround(r * static_cast<double>(kSubpixel))});
  }
  return scene;
}

bool disc_covers(const Disc& disc, int px, int py) {
  const std::int64_t dx = px * kSubpixel - disc.cx;
  const std::int64_t dy = py * kSubpixel - disc.cy;
  return sq(dx) + sq(dy) <= sq(disc.r);
}

bool segment_covers(const Segment& s, int px, int py) {
  const std::int64_t x = px * kSubpixel;
  const std::int64_t y = py * kSubpixel;
  const std::int64_t dx = s.bx - s.ax;
  const std::int64_t dy = s.by - s.ay;
  const std::int64_t vx = x - s.ax;
  const std::int64_t vy = y - s.ay;
  const std::int64_t h2 = sq(s.half_width);
  const i128 len2 = static_cast<i128>(dx) * dx + static_cast<i128>(dy) * dy;
  const i128 t = static_cast<i128>(vx) * dx + static_cast<i128>(vy) * dy;
  if (len2 == 0 || t <= 0) return sq(vx) + sq(vy) <= h2;
  if (t >= len2) return sq(x - s.bx) + sq(y - s.by) <= h2;
  const i128 cross = static_cast<i128>(vx) * dy - static_cast<i128>(vy) * dx;
  return cross * cross <= static_cast<i128>(h2) * len2;
}

std::vector<std::uint8_t> rasterize(const Scene& scene) {
  std::vector<std::uint8_t> pixels(static_cast<std::size_t>(scene.size) * scene.size, 255);
  for (const auto& segment : scene.segments) paint_segment(pixels, scene.size, segment);
  for (const auto& disc : scene.discs) paint_disc(pixels, scene.size, disc);
  return pixels;
}

TraceImage render(const Sitemap& sitemap, const SessionSubgraph& subgraph,
                  const RenderConfig& config) {
  TraceImage image;
  image.size = config.image_size;
  image.pixels = rasterize(build_scene(sitemap, subgraph, config));
  image.session_id = subgraph.session_id;
  image.label = subgraph.label;
  return image;
}

}  // namespace botgraph
