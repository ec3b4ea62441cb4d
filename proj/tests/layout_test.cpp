#include "botgraph/error.hpp"
#include "botgraph/layout.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <map>
#include <set>

namespace botgraph {
namespace {

double dist(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

Sitemap graph(const std::vector<std::string>& nodes,
              const std::vector<std::pair<std::string, std::string>>& edges) {
  SitemapBuilder b;
  for (const auto& n : nodes) b.add_node(n);
  for (const auto& [from, to] : edges) b.add_edge(*b.find(from), *b.find(to));
  return std::move(b).finish();
}

Point at(const Sitemap& s, const std::string& pattern) { return s.coordinates()[*s.find(pattern)]; }

Sitemap two_cliques() {
  std::vector<std::string> nodes;
  std::vector<std::pair<std::string, std::string>> edges;
  for (char side : {'l', 'r'}) {
    for (int i = 0; i < 5; ++i) nodes.push_back(std::string("/") + side + std::to_string(i));
    for (int i = 0; i < 5; ++i) {
      for (int j = i + 1; j < 5; ++j) {
        edges.emplace_back(std::string("/") + side + std::to_string(i),
                           std::string("/") + side + std::to_string(j));
      }
    }
  }
  edges.emplace_back("/l0", "/r0");
  return graph(nodes, edges);
}

TEST(InitialPositions, IndependentOfInsertionOrder) {
  Sitemap a = graph({"/a", "/b", "/c"}, {{"/a", "/b"}});
  Sitemap b = graph({"/c", "/b", "/a"}, {{"/a", "/b"}});
  auto pa = initial_positions(a, 9);
  auto pb = initial_positions(b, 9);
  for (const char* p : {"/a", "/b", "/c", "INVALID"}) {
    EXPECT_EQ(pa[*a.find(p)], pb[*b.find(p)]) << p;
  }
}

TEST(InitialPositions, SeedMatters) {
  Sitemap s = graph({"/a", "/b"}, {});
  auto p1 = initial_positions(s, 1);
  auto p2 = initial_positions(s, 2);
  EXPECT_NE(p1, p2);
  for (const auto& p : p1) {
    EXPECT_GE(p.x, 0.0);
    EXPECT_LT(p.x, 1.0);
    EXPECT_GE(p.y, 0.0);
    EXPECT_LT(p.y, 1.0);
  }
}

TEST(InitialPositions, InvalidOnly) { EXPECT_EQ(initial_positions(graph({}, {}), 0).size(), 1u); }

TEST(Layout, SingleNodeCentered) {
  Sitemap s = run_layout(graph({}, {}), LayoutConfig{});
  ASSERT_EQ(s.coordinates().size(), 1u);
  EXPECT_EQ(s.coordinates()[0], (Point{0.5, 0.5}));
}

TEST(Layout, SpringShortensLongEdge) {
  Sitemap s = graph({"/a", "/b"}, {{"/a", "/b"}});
  LayoutConfig config;
  config.rest_length = 0.1;
  std::vector<Point> start = {{0.05, 0.5}, {0.95, 0.5}, {0.5, 0.9}};
  auto end = simulate_layout(s, start, config);
  EXPECT_LT(dist(end[0], end[1]), 0.9);
}

// Plain transcription of the force law, used as an oracle.
std::vector<Point> reference_simulation(std::size_t n, const std::set<std::pair<int, int>>& springs,
                                        std::vector<Point> pos, const LayoutConfig& c) {
  std::vector<Point> prev = pos;
  std::vector<int> degree(n, 0);
  for (const auto& [i, j] : springs) {
    ++degree[i];
    ++degree[j];
  }
  for (std::uint32_t it = 0; it < c.max_iterations; ++it) {
    std::vector<Point> next(n);
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double fx = 0.0, fy = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        double dx = pos[j].x - pos[i].x, dy = pos[j].y - pos[i].y;
        double d = std::sqrt(dx * dx + dy * dy);
        double ux = dx / d, uy = dy / d;
        d = std::max(d, 1e-6);
        double f = -c.repulsion_strength / (d * d);
        const int lo = static_cast<int>(std::min(i, j)), hi = static_cast<int>(std::max(i, j));
        if (springs.count({lo, hi})) f += c.attraction_stiffness * (d - c.rest_length);
        fx += f * ux;
        fy += f * uy;
      }
      fx -= c.gravity * (pos[i].x - 0.5);
      fy -= c.gravity * (pos[i].y - 0.5);
      double m = 1.0 + degree[i];
      double sx = c.damping * (pos[i].x - prev[i].x) + fx / m * c.time_step * c.time_step;
      double sy = c.damping * (pos[i].y - prev[i].y) + fy / m * c.time_step * c.time_step;
      double len = std::hypot(sx, sy);
      if (len > c.max_step) {
        sx *= c.max_step / len;
        sy *= c.max_step / len;
      }
      next[i] = {pos[i].x + sx, pos[i].y + sy};
      worst = std::max(worst, std::hypot(sx, sy));
    }
    prev = pos;
    pos = next;
    if (worst < c.convergence_epsilon) break;
  }
  return pos;
}

TEST(Layout, MatchesReferenceSimulation) {
  Sitemap s = graph({"/a", "/b", "/c", "/d"}, {{"/a", "/b"}, {"/b", "/a"}, {"/b", "/c"}, {"/c", "/d"}});
  LayoutConfig config;
  config.max_iterations = 400;
  std::vector<Point> start = {{0.1, 0.2}, {0.9, 0.3}, {0.4, 0.8}, {0.6, 0.1}, {0.3, 0.35}};
  auto got = simulate_layout(s, start, config);
  auto want = reference_simulation(5, {{0, 1}, {1, 2}, {2, 3}}, start, config);
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t i = 0; i < got.size(); ++i) {
    EXPECT_NEAR(got[i].x, want[i].x, 1e-12) << i;
    EXPECT_NEAR(got[i].y, want[i].y, 1e-12) << i;
  }
}

TEST(Layout, PathKeepsNeighboursCloser) {
  for (std::uint64_t seed : {0u, 1u, 2u, 3u, 4u}) {
    LayoutConfig config;
    config.seed = seed;
    Sitemap s = run_layout(graph({"/A", "/B", "/C"}, {{"/A", "/B"}, {"/B", "/C"}}), config);
    Point a = at(s, "/A"), b = at(s, "/B"), c = at(s, "/C");
    EXPECT_LT(dist(a, b), dist(a, c)) << seed;
    EXPECT_LT(dist(b, c), dist(a, c)) << seed;
  }
}

TEST(Layout, CliquesStayTogether) {
  for (std::uint64_t seed : {0u, 7u, 42u}) {
    LayoutConfig config;
    config.seed = seed;
    Sitemap s = run_layout(two_cliques(), config);
    double intra = 0.0, inter = 0.0;
    int n_intra = 0, n_inter = 0;
    for (int i = 0; i < 10; ++i) {
      for (int j = i + 1; j < 10; ++j) {
        double d = dist(s.coordinates()[i], s.coordinates()[j]);
        if ((i < 5) == (j < 5)) {
          intra += d;
          ++n_intra;
        } else {
          inter += d;
          ++n_inter;
        }
      }
    }
    EXPECT_LT(intra / n_intra, inter / n_inter) << seed;
  }
}

TEST(Layout, BitwiseDeterministic) {
  LayoutConfig config;
  config.seed = 5;
  Sitemap a = run_layout(two_cliques(), config);
  Sitemap b = run_layout(two_cliques(), config);
  ASSERT_EQ(a.coordinates().size(), b.coordinates().size());
  EXPECT_EQ(std::memcmp(a.coordinates().data(), b.coordinates().data(),
                        a.coordinates().size() * sizeof(Point)),
            0);
}

TEST(Layout, OutputInsideUnitSquareAndFillsIt) {
  std::vector<std::string> nodes;
  std::vector<std::pair<std::string, std::string>> edges;
  for (int i = 0; i < 60; ++i) {
    nodes.push_back("/n" + std::to_string(i));
    if (i) edges.emplace_back("/n" + std::to_string((i * 7) % i), "/n" + std::to_string(i));
  }
  LayoutStats stats;
  Sitemap s = run_layout(graph(nodes, edges), LayoutConfig{}, &stats);
  EXPECT_GT(stats.iterations, 0u);
  double max_x = 0, max_y = 0, min_x = 1, min_y = 1;
  for (const auto& p : s.coordinates()) {
    ASSERT_TRUE(p.x >= 0.0 && p.x <= 1.0 && p.y >= 0.0 && p.y <= 1.0);
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  }
  EXPECT_TRUE((min_x == 0.0 && max_x == 1.0) || (min_y == 0.0 && max_y == 1.0));
}

TEST(FitUnitSquare, KeepsAspectAndCenters) {
  std::vector<Point> pts = {{-2.0, 1.0}, {2.0, 1.0}, {0.0, 2.0}};
  fit_unit_square(pts);
  EXPECT_EQ(pts[0], (Point{0.0, 0.375}));
  EXPECT_EQ(pts[1], (Point{1.0, 0.375}));
  EXPECT_EQ(pts[2], (Point{0.5, 0.625}));
}

TEST(LayoutConfig, RejectsBadValues) {
  auto bad = [](auto mutate) {
    LayoutConfig c;
    mutate(c);
    try {
      c.validate();
      return false;
    } catch (const Error& e) {
      return e.kind() == ErrorKind::config;
    }
  };
  EXPECT_TRUE(bad([](LayoutConfig& c) { c.damping = 1.0; }));
  EXPECT_TRUE(bad([](LayoutConfig& c) { c.damping = 0.0; }));
  EXPECT_TRUE(bad([](LayoutConfig& c) { c.rest_length = 0.0; }));
  EXPECT_TRUE(bad([](LayoutConfig& c) { c.convergence_epsilon = c.rest_length; }));
  EXPECT_TRUE(bad([](LayoutConfig& c) { c.max_iterations = 0; }));
  EXPECT_TRUE(bad([](LayoutConfig& c) { c.gravity = -0.1; }));
  EXPECT_TRUE(bad([](LayoutConfig& c) { c.max_step = 0.0; }));
  EXPECT_FALSE(bad([](LayoutConfig&) {}));
}

TEST(Layout, NonFiniteStartIsInstability) {
  Sitemap s = graph({"/a"}, {});
  std::vector<Point> start = {{0.2, 0.2}, {NAN, 0.5}};
  try {
    simulate_layout(s, start, LayoutConfig{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::numerical_instability);
    EXPECT_NE(std::string(e.what()).find("iteration 1"), std::string::npos);
  }
}

}  // namespace
}  // namespace botgraph
