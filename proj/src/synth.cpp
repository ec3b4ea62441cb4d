#include "botgraph/synth.hpp"

#include "botgraph/error.hpp"
#include "botgraph/url_pattern.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <fstream>
#include <limits>

namespace botgraph {

std::string_view to_string(TrafficKind kind) {
  switch (kind) {
    case TrafficKind::human_walk: return "human_walk";
    case TrafficKind::scraper: return "scraper";
    case TrafficKind::crawler: return "crawler";
    case TrafficKind::bruteforcer: return "bruteforcer";
  }
  return "unknown";
}

std::optional<TrafficKind> parse_traffic_kind(std::string_view text) {
  for (auto kind : {TrafficKind::human_walk, TrafficKind::scraper, TrafficKind::crawler,
                    TrafficKind::bruteforcer}) {
    if (to_string(kind) == text) return kind;
  }
  return std::nullopt;
}

void TrafficProfile::validate() const {
  auto require = [this](bool ok, const char* what) {
    if (!ok) {
      throw Error(ErrorKind::config,
                  std::string(to_string(kind)) + " profile: " + std::string(what));
    }
  };
  require(min_length >= 1, "min_length must be at least 1");
  require(min_length <= max_length, "min_length must not exceed max_length");
  require(request_rate > 0.0 && std::isfinite(request_rate), "request_rate must be positive");
  require(edge_follow_probability >= 0.0 && edge_follow_probability <= 1.0,
          "edge_follow_probability must lie in [0, 1]");
  require(repeat_fraction >= 0.0 && repeat_fraction <= 1.0, "repeat_fraction must lie in [0, 1]");
  require(invalid_fraction >= 0.0 && invalid_fraction <= 1.0,
          "invalid_fraction must lie in [0, 1]");
}

namespace {

// Distribution mappings are written out instead of using <random>
// distributions, whose output is implementation-defined.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double exponential(std::mt19937_64& rng, double rate) {
  return -std::log1p(-uniform01(rng)) / rate;
}

template <typename T>
void shuffle(std::vector<T>& items, std::mt19937_64& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::swap(items[i - 1], items[uniform_below(rng, i)]);
  }
}

constexpr std::array<std::string_view, 10> kProbeTargets{
    "/backup.zip",           "/apmserv5.2.6.rar", "/wp-login.php",  "/.env",
    "/admin/config.php",     "/phpmyadmin/index.php", "/db.sql",    "/old/site.tar.gz",
    "/cgi-bin/test.cgi",     "/.git/config",
};

std::string_view user_agent(TrafficKind kind) {
  switch (kind) {
    case TrafficKind::human_walk:
      return "Mozilla/5.0 (Windows NT 10.0; Win64; x64) AppleWebKit/537.36 Chrome/120.0 Safari/537.36";
    case TrafficKind::scraper: return "python-requests/2.31";
    case TrafficKind::crawler: return "Mozilla/5.0 (compatible; ExampleBot/1.0)";
    case TrafficKind::bruteforcer: return "curl/8.4.0";
  }
  return "";
}

struct SiteView {
  const Sitemap& sitemap;
  std::vector<NodeId> real;                     // every node except INVALID
  std::vector<std::vector<NodeId>> successors;  // sorted, excludes INVALID

  explicit SiteView(const Sitemap& s) : sitemap(s), successors(s.size()) {
    for (NodeId id = 0; id < s.size(); ++id) {
      if (id != s.invalid_node_id()) real.push_back(id);
    }
    for (const auto& [from, to] : s.edges()) {
      if (from != s.invalid_node_id() && to != s.invalid_node_id() && from != to) {
        successors[from].push_back(to);
      }
    }
  }

  NodeId random_real(std::mt19937_64& rng) const { return real[uniform_below(rng, real.size())]; }
};

struct Visit {
  std::string uri;
  int status = 200;
};

std::vector<Visit> walk_human(const SiteView& site, const TrafficProfile& p, std::size_t length,
                              std::mt19937_64& rng) {
  std::vector<Visit> out;
  NodeId current = site.random_real(rng);
  for (std::size_t i = 0; i < length; ++i) {
    if (i > 0) {
      const auto& next = site.successors[current];
      if (!next.empty() && uniform01(rng) < p.edge_follow_probability) {
        current = next[uniform_below(rng, next.size())];
      } else {
        current = site.random_real(rng);
      }
    }
    out.push_back({instantiate_pattern(site.sitemap.pattern(current), rng), 200});
  }
  return out;
}

std::vector<Visit> walk_scraper(const SiteView& site, NodeId target, const TrafficProfile& p,
                                std::size_t length, std::mt19937_64& rng) {
  const auto repeats = std::min<std::size_t>(
      length, static_cast<std::size_t>(std::ceil(p.repeat_fraction * static_cast<double>(length))));
  std::vector<NodeId> nodes(repeats, target);
  while (nodes.size() < length) {
    NodeId other = site.random_real(rng);
    if (other != target) nodes.push_back(other);
  }
  shuffle(nodes, rng);
  std::vector<Visit> out;
  for (NodeId n : nodes) out.push_back({instantiate_pattern(site.sitemap.pattern(n), rng), 200});
  return out;
}

std::vector<Visit> walk_crawler(const SiteView& site, std::size_t length, std::mt19937_64& rng) {
  std::vector<Visit> out;
  std::vector<bool> seen(site.sitemap.size(), false);
  std::deque<NodeId> queue;
  auto enqueue = [&](NodeId n) {
    if (!seen[n]) {
      seen[n] = true;
      queue.push_back(n);
    }
  };
  enqueue(site.random_real(rng));
  while (out.size() < length) {
    if (queue.empty()) {
      auto unseen = std::find_if(site.real.begin(), site.real.end(),
                                 [&](NodeId n) { return !seen[n]; });
      if (unseen == site.real.end()) {
        std::fill(seen.begin(), seen.end(), false);
        enqueue(site.random_real(rng));
      } else {
        enqueue(*unseen);
      }
    }
    NodeId n = queue.front();
    queue.pop_front();
    out.push_back({instantiate_pattern(site.sitemap.pattern(n), rng), 200});
    for (NodeId next : site.successors[n]) enqueue(next);
  }
  return out;
}

std::string probe_target(const SiteView& site, std::mt19937_64& rng) {
  std::string uri(kProbeTargets[uniform_below(rng, kProbeTargets.size())]);
  if (!site.sitemap.find(normalize(uri).value())) return uri;
  // The site really serves this path; fall back to a name it cannot know.
  return "/__probe/" + std::to_string(uniform_below(rng, 1'000'000)) + ".bak";
}

std::vector<Visit> walk_bruteforcer(const SiteView& site, const TrafficProfile& p,
                                    std::size_t length, std::mt19937_64& rng) {
  const auto invalid = std::min<std::size_t>(
      length, static_cast<std::size_t>(std::llround(p.invalid_fraction * static_cast<double>(length))));
  std::vector<bool> is_probe(length, false);
  std::fill(is_probe.begin(), is_probe.begin() + static_cast<std::ptrdiff_t>(invalid), true);
  shuffle(is_probe, rng);
  std::vector<Visit> out;
  for (bool probe : is_probe) {
    if (probe) {
      out.push_back({probe_target(site, rng), 404});
    } else {
      out.push_back({instantiate_pattern(site.sitemap.pattern(site.random_real(rng)), rng), 200});
    }
  }
  return out;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t x = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::string instantiate_pattern(std::string_view pattern, std::mt19937_64& rng) {
  std::string out;
  out.reserve(pattern.size() + 8);
  for (char c : pattern) {
    if (c == '*') {
      out += std::to_string(1 + uniform_below(rng, 99'999));
    } else {
      out += c;
    }
  }
  return out;
}

std::vector<Session> generate(const Sitemap& sitemap, const std::vector<ProfileRequest>& profiles,
                              const SynthOptions& options) {
  SiteView site(sitemap);
  if (site.real.size() < 2) {
    throw Error(ErrorKind::config, "synthetic traffic needs a sitemap with at least 2 real nodes");
  }
  auto epoch = parse_timestamp(options.epoch);
  if (!epoch) throw Error(ErrorKind::config, "bad epoch '" + options.epoch + "'");
  if (!(options.session_rate > 0.0)) throw Error(ErrorKind::config, "session_rate must be positive");

  struct Draft {
    std::string session_id;
    TrafficKind kind;
    Label label;
    std::string client_ip;
    double rate;
    std::vector<Visit> visits;
    std::vector<double> gaps;
  };
  std::vector<Draft> drafts;

  for (std::size_t index = 0; index < profiles.size(); ++index) {
    const auto& [profile, count] = profiles[index];
    profile.validate();
    std::mt19937_64 rng(profile.seed);

    NodeId target = 0;
    if (profile.kind == TrafficKind::scraper) {
      if (profile.target_pattern) {
        auto id = sitemap.find(*profile.target_pattern);
        if (!id || *id == sitemap.invalid_node_id()) {
          throw Error(ErrorKind::config,
                      "scraper target '" + *profile.target_pattern + "' is not in the sitemap");
        }
        target = *id;
      } else {
        target = site.random_real(rng);
      }
    }

    for (std::size_t n = 0; n < count; ++n) {
      const std::size_t length =
          profile.min_length + uniform_below(rng, profile.max_length - profile.min_length + 1);
      Draft d;
      char id[64];
      std::snprintf(id, sizeof(id), "%s-%zu-%05zu", std::string(to_string(profile.kind)).c_str(),
                    index, n);
      d.session_id = id;
      d.kind = profile.kind;
      d.label = profile.kind == TrafficKind::human_walk ? Label::human : Label::bot;
      d.client_ip = "10." + std::to_string(uniform_below(rng, 256)) + "." +
                    std::to_string(uniform_below(rng, 256)) + "." +
                    std::to_string(1 + uniform_below(rng, 254));
      d.rate = profile.request_rate;
      switch (profile.kind) {
        case TrafficKind::human_walk: d.visits = walk_human(site, profile, length, rng); break;
        case TrafficKind::scraper: d.visits = walk_scraper(site, target, profile, length, rng); break;
        case TrafficKind::crawler: d.visits = walk_crawler(site, length, rng); break;
        case TrafficKind::bruteforcer: d.visits = walk_bruteforcer(site, profile, length, rng); break;
      }
      for (std::size_t k = 1; k < d.visits.size(); ++k) d.gaps.push_back(exponential(rng, d.rate));
      drafts.push_back(std::move(d));
    }
  }

  // Interleave sessions in time: random slot order, exponential start gaps.
  std::mt19937_64 timing(mix_seed(options.seed, 0xC0FFEE));
  std::vector<std::size_t> slot(drafts.size());
  for (std::size_t i = 0; i < slot.size(); ++i) slot[i] = i;
  shuffle(slot, timing);

  std::vector<Session> sessions;
  sessions.reserve(drafts.size());
  double start = 0.0;
  for (std::size_t s : slot) {
    start += exponential(timing, options.session_rate);
    Draft& d = drafts[s];
    Session session{d.session_id, {}, d.label};
    double t = start;
    for (std::size_t k = 0; k < d.visits.size(); ++k) {
      if (k > 0) t += d.gaps[k - 1];
      Request r;
      r.timestamp = *epoch + std::chrono::milliseconds(std::llround(t * 1000.0));
      r.http_method = HttpMethod{HttpMethodKind::get, {}};
      r.request_uri = std::move(d.visits[k].uri);
      r.status = d.visits[k].status;
      r.host = options.host;
      r.user_agent = std::string(user_agent(d.kind));
      r.client_ip = d.client_ip;
      r.session_id = d.session_id;
      r.label = d.label;
      session.requests.push_back(std::move(r));
    }
    sessions.push_back(std::move(session));
  }
  return sessions;
}

std::pair<std::vector<ProfileRequest>, SynthOptions> load_profiles(const std::string& path,
                                                                   std::uint64_t seed) {
  using json = nlohmann::json;
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open profile file " + path);
  json doc = json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw Error(ErrorKind::config, path + ": profile file is not a JSON object");
  }

  auto fail = [&](const std::string& what) -> Error {
    return Error(ErrorKind::config, path + ": " + what);
  };
  auto number = [&](const json& obj, const char* key, double fallback) {
    auto it = obj.find(key);
    if (it == obj.end()) return fallback;
    if (!it->is_number()) throw fail(std::string("'") + key + "' must be a number");
    return it->get<double>();
  };
  auto count = [&](const json& obj, const char* key, std::uint64_t fallback) {
    auto it = obj.find(key);
    if (it == obj.end()) return fallback;
    if (!it->is_number_unsigned()) throw fail(std::string("'") + key + "' must be a non-negative integer");
    return it->get<std::uint64_t>();
  };

  SynthOptions options;
  options.seed = seed;
  for (const auto& [key, value] : doc.items()) {
    if (key == "host" && value.is_string()) {
      options.host = value.get<std::string>();
    } else if (key == "epoch" && value.is_string()) {
      options.epoch = value.get<std::string>();
    } else if (key == "session_rate") {
      options.session_rate = number(doc, "session_rate", options.session_rate);
    } else if (key != "profiles") {
      throw fail("unknown or mistyped key '" + key + "'");
    }
  }

  auto list = doc.find("profiles");
  if (list == doc.end() || !list->is_array()) throw fail("missing \"profiles\" array");

  static const std::array<std::string_view, 10> kKeys{
      "kind", "sessions", "min_length", "max_length", "seed", "request_rate",
      "edge_follow_probability", "target", "repeat_fraction", "invalid_fraction"};

  std::vector<ProfileRequest> out;
  for (std::size_t i = 0; i < list->size(); ++i) {
    const json& item = (*list)[i];
    if (!item.is_object()) throw fail("profile " + std::to_string(i) + " is not an object");
    for (const auto& [key, value] : item.items()) {
      if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end()) {
        throw fail("profile " + std::to_string(i) + ": unknown key '" + key + "'");
      }
    }
    auto kind_it = item.find("kind");
    if (kind_it == item.end() || !kind_it->is_string()) {
      throw fail("profile " + std::to_string(i) + " lacks a \"kind\"");
    }
    auto kind = parse_traffic_kind(kind_it->get<std::string>());
    if (!kind) throw fail("unknown profile kind '" + kind_it->get<std::string>() + "'");

    ProfileRequest req;
    TrafficProfile& p = req.profile;
    p.kind = *kind;
    if (p.kind != TrafficKind::human_walk) {
      p.min_length = 20;
      p.max_length = 60;
      p.request_rate = 2.0;
    }
    req.sessions = count(item, "sessions", 0);
    p.min_length = static_cast<std::uint32_t>(count(item, "min_length", p.min_length));
    p.max_length = static_cast<std::uint32_t>(count(item, "max_length", p.max_length));
    p.seed = count(item, "seed", mix_seed(seed, i));
    p.request_rate = number(item, "request_rate", p.request_rate);
    p.edge_follow_probability = number(item, "edge_follow_probability", p.edge_follow_probability);
    p.repeat_fraction = number(item, "repeat_fraction", p.repeat_fraction);
    p.invalid_fraction = number(item, "invalid_fraction", p.invalid_fraction);
    if (auto t = item.find("target"); t != item.end()) {
      if (!t->is_string()) throw fail("'target' must be a string");
      p.target_pattern = t->get<std::string>();
    }
    p.validate();
    out.push_back(std::move(req));
  }
  return {std::move(out), options};
}

}  // namespace botgraph
