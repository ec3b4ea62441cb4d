#include "botgraph/pipeline.hpp"

#include "botgraph/dataset.hpp"
#include "botgraph/png_io.hpp"
#include "botgraph/subgraph.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace botgraph {

namespace {

// Runs fn(i) for i in [0, n) on up to `jobs` threads; rethrows the first error.
template <typename Fn>
void parallel_for(std::size_t n, unsigned jobs, Fn&& fn) {
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> workers;
  for (unsigned w = 0; w < jobs; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = n;
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

RenderRunStats render_dataset(const Sitemap& sitemap, const std::vector<Session>& sessions,
                              const RenderConfig& config, std::size_t min_spots_exclusive,
                              unsigned jobs, const std::filesystem::path& out_dir) {
  config.validate();
  sitemap.coordinates();  // fail early without a layout

  std::vector<SessionSubgraph> subgraphs(sessions.size());
  parallel_for(sessions.size(), jobs,
               [&](std::size_t i) { subgraphs[i] = map_session(sitemap, sessions[i]); });

  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < subgraphs.size(); ++i) {
    if (subgraphs[i].spot_count() > min_spots_exclusive) kept.push_back(i);
  }

  DatasetWriter writer(out_dir);
  constexpr std::size_t kChunk = 512;
  std::vector<std::vector<std::uint8_t>> encoded;
  for (std::size_t begin = 0; begin < kept.size(); begin += kChunk) {
    const std::size_t end = std::min(kept.size(), begin + kChunk);
    encoded.assign(end - begin, {});
    parallel_for(end - begin, jobs, [&](std::size_t k) {
      TraceImage image = render(sitemap, subgraphs[kept[begin + k]], config);
      encoded[k] = encode_png(image.size, image.size, image.pixels);
    });
    for (std::size_t k = 0; k < encoded.size(); ++k) {
      const auto& g = subgraphs[kept[begin + k]];
      writer.add_encoded(g.session_id, g.label, encoded[k]);
    }
  }

  RenderRunStats stats;
  stats.sessions_in = sessions.size();
  stats.sessions_out = kept.size();
  stats.manifest = writer.finish();
  const bool labeled = !kept.empty() && std::all_of(kept.begin(), kept.end(), [&](std::size_t i) {
    return sessions[i].label.has_value();
  });
  if (labeled) {
    std::vector<Session> out;
    out.reserve(kept.size());
    for (std::size_t i : kept) out.push_back(sessions[i]);
    stats.shares = bot_shares(out);
  }
  return stats;
}

}  // namespace botgraph
