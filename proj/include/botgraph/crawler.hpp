#pragma once

#include "botgraph/sitemap.hpp"

#include <chrono>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace botgraph {

struct FetchResult {
  int status = 0;
  std::string body;
};

// Page source for the crawler. `fetch` receives an origin-relative target
// ("/path?query") and may throw to signal a transport failure.
class Fetcher {
 public:
  virtual ~Fetcher() = default;
  virtual FetchResult fetch(const std::string& target) = 0;
};

// In-memory pages keyed by target; unknown targets answer 404.
class FixtureFetcher : public Fetcher {
 public:
  explicit FixtureFetcher(std::map<std::string, std::string> pages) : pages_(std::move(pages)) {}

  FetchResult fetch(const std::string& target) override;
  const std::vector<std::string>& fetched() const noexcept { return fetched_; }

 private:
  std::map<std::string, std::string> pages_;
  std::vector<std::string> fetched_;
};

// Plain HTTP GET against one origin via cpp-httplib.
class HttpFetcher : public Fetcher {
 public:
  HttpFetcher(std::string origin, std::chrono::milliseconds timeout, std::string user_agent);
  ~HttpFetcher() override;

  FetchResult fetch(const std::string& target) override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct SplitUrl {
  std::string origin;  // "scheme://host[:port]", empty for origin-relative input
  std::string host;    // lower-cased host without port
  std::string target;  // "/path?query", fragment removed
};

// Accepts "http(s)://host[:port]/path" or "/path".
std::optional<SplitUrl> split_url(std::string_view url);

// href values of <a> tags, with &amp; decoded, in document order.
std::vector<std::string> extract_links(std::string_view html);

// Resolves `href` found on `page_target` into a same-host target. Returns
// nothing for other hosts, non-http schemes (mailto:, javascript:, ...) and
// fragment-only links.
std::optional<std::string> resolve_link(std::string_view href, std::string_view page_target,
                                        std::string_view host);

struct CrawlResult {
  Sitemap sitemap;
  std::size_t fetches = 0;
  std::vector<std::string> failed_targets;
};

// Breadth-first crawl from `start`. Each URL pattern is fetched at most once
// and discovery stops adding patterns once `max_patterns` are known.
// Throws Error(crawl) when the start page cannot be fetched.
CrawlResult crawl(Fetcher& fetcher, std::string_view start, std::size_t max_patterns);

}  // namespace botgraph
