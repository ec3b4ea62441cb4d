#include "botgraph/crawler.hpp"

#include "botgraph/error.hpp"

#include <httplib.h>

namespace botgraph {

struct HttpFetcher::Impl {
  httplib::Client client;

  explicit Impl(const std::string& origin) : client(origin) {}
};

HttpFetcher::HttpFetcher(std::string origin, std::chrono::milliseconds timeout,
                         std::string user_agent)
    : impl_(std::make_unique<Impl>(origin)) {
  auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout);
  auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(timeout - secs);
  impl_->client.set_connection_timeout(secs.count(), usecs.count());
  impl_->client.set_read_timeout(secs.count(), usecs.count());
  impl_->client.set_follow_location(true);
  impl_->client.set_default_headers({{"User-Agent", std::move(user_agent)}});
}

HttpFetcher::~HttpFetcher() = default;

FetchResult HttpFetcher::fetch(const std::string& target) {
  auto res = impl_->client.Get(target);
  if (!res) throw Error(ErrorKind::crawl, "GET " + target + ": " + httplib::to_string(res.error()));
  return FetchResult{res->status, res->body};
}

}  // namespace botgraph
