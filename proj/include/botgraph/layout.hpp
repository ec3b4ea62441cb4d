#pragma once

#include "botgraph/sitemap.hpp"

#include <cstdint>
#include <vector>

namespace botgraph {

// Lengths are in unit-square units.
struct LayoutConfig {
  double attraction_stiffness = 0.08;  // spring constant per edge
  double rest_length = 0.05;           // spring rest length
  double repulsion_strength = 0.002;   // inverse-square pairwise repulsion
  double gravity = 0.02;               // linear pull toward the square's center
  double damping = 0.85;               // scales the implicit velocity each step
  double time_step = 1.0;
  std::uint32_t max_iterations = 1000;
  double max_step = 0.05;              // cap on one node's displacement per step
  double convergence_epsilon = 1e-4;   // stop once every node moves less than this
  std::uint64_t seed = 0;

  // Throws Error(config) on a violated constraint.
  void validate() const;
};

// Deterministic point in [0,1)^2 per node, derived from (seed, pattern text)
// only, so insertion order does not matter.
std::vector<Point> initial_positions(const Sitemap& sitemap, std::uint64_t seed);

struct LayoutStats {
  std::uint32_t iterations = 0;
  double final_max_displacement = 0.0;
  bool converged = false;
};

// Position-Verlet force simulation: springs along edges (both directions of
// an edge collapse to one spring), inverse-square repulsion between every
// pair and a weak linear pull toward the center that keeps disconnected nodes
// in range. Each node has mass 1 + degree and moves at most max_step per
// iteration. Forces are summed in ascending node-id order so results are
// bit-reproducible. Returns raw positions, one per node, starting from `start`.
// Throws Error(numerical_instability) if a position becomes non-finite.
std::vector<Point> simulate_layout(const Sitemap& sitemap, std::vector<Point> start,
                                   const LayoutConfig& config, LayoutStats* stats = nullptr);

// Affine map into [0,1]^2 keeping the aspect ratio and centering the shorter
// axis. A single point (or all-equal points) lands at (0.5, 0.5).
void fit_unit_square(std::vector<Point>& points);

// simulate_layout from initial_positions, then fit_unit_square.
Sitemap run_layout(const Sitemap& sitemap, const LayoutConfig& config,
                   LayoutStats* stats = nullptr);

}  // namespace botgraph
