#pragma once

#include "botgraph/ingest.hpp"
#include "botgraph/metrics.hpp"
#include "botgraph/render.hpp"
#include "botgraph/sitemap.hpp"

#include <cstddef>
#include <filesystem>
#include <optional>
#include <vector>

namespace botgraph {

struct RenderRunStats {
  std::size_t sessions_in = 0;
  std::size_t sessions_out = 0;
  std::optional<BotShares> shares;  // over the kept sessions, when all are labeled
  std::filesystem::path manifest;
};

// Maps every session onto the sitemap, drops those with too few spots,
// renders the rest and writes the dataset. Work is split over `jobs` threads;
// the output does not depend on the thread count.
RenderRunStats render_dataset(const Sitemap& sitemap, const std::vector<Session>& sessions,
                              const RenderConfig& config, std::size_t min_spots_exclusive,
                              unsigned jobs, const std::filesystem::path& out_dir);

}  // namespace botgraph
