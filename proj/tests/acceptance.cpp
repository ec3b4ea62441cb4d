// Acceptance checks for the rendering pipeline. Prints one PASS/FAIL line per
// criterion and exits non-zero when any criterion fails.

#include "cli.hpp"

#include "botgraph/dataset.hpp"
#include "botgraph/layout.hpp"
#include "botgraph/pipeline.hpp"
#include "botgraph/render.hpp"
#include "botgraph/subgraph.hpp"
#include "botgraph/synth.hpp"
#include "botgraph/url_pattern.hpp"
#include "raster_oracle.hpp"
#include "test_support.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <exception>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using namespace botgraph;

namespace {

using Clock = std::chrono::steady_clock;

struct Verdict {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), format, a, b, c);
  return buf;
}

std::string fixture(const char* name) { return std::string(BOTGRAPH_FIXTURE_DIR) + "/" + name; }

// f(1) = r_min and f(x_gate) = r_gate within 1e-9, c = r_max exactly, and
// strictly increasing on 10^4 evenly spaced points of [1, 400]. Past x ~ 570
// the function equals r_max in double precision, so the grid stays below it.
Verdict radius_constraints() {
  auto start = Clock::now();
  RadiusParams p = solve_radius_params(4.0, 80.0, 50.0, 50.0);
  double e1 = std::fabs(radius(p, 1.0) - 4.0);
  double e50 = std::fabs(radius(p, 50.0) - 50.0);
  bool increasing = true;
  double prev = radius(p, 1.0);
  for (int i = 1; i < 10000; ++i) {
    double r = radius(p, 1.0 + 399.0 * i / 9999.0);
    increasing = increasing && r > prev;
    prev = r;
  }
  double elapsed = seconds_since(start);
  Verdict v;
  v.pass = e1 <= 1e-9 && e50 <= 1e-9 && p.c == 80.0 && increasing && elapsed < 1.0;
  v.detail = fmt("|f(1)-4|=%.2e |f(50)-50|=%.2e", e1, e50) + (p.c == 80.0 ? " c=80" : " c!=80") +
             (increasing ? " increasing" : " NOT increasing") + fmt(" %.3fs", elapsed);
  return v;
}

// 50 random subgraphs over the 20-node fixture, each compared pixel by pixel
// with the brute-force oracle.
Verdict raster_oracle() {
  auto start = Clock::now();
  Sitemap sitemap = run_layout(load_from_file(fixture("portal_sitemap.json")), LayoutConfig{});
  RenderConfig config;
  std::mt19937_64 rng(2024);
  std::size_t differing = 0, black = 0;
  for (int k = 0; k < 50; ++k) {
    Session session;
    session.session_id = "r" + std::to_string(k);
    int len = 2 + static_cast<int>(rng() % 40);
    for (int i = 0; i < len; ++i) {
      std::string uri = sitemap.pattern(static_cast<NodeId>(rng() % (sitemap.size() - 1)));
      std::mt19937_64 fill(rng());
      uri = instantiate_pattern(uri, fill);
      session.requests.push_back(testing::make_request(session.session_id, uri,
                                                       rng() % 8 == 0 ? 404 : 200, i));
    }
    SessionSubgraph g = map_session(sitemap, session);
    TraceImage img = render(sitemap, g, config);
    differing += testing::count_differences(img.pixels, testing::oracle_raster(sitemap, g, config));
    black += static_cast<std::size_t>(std::count(img.pixels.begin(), img.pixels.end(), 0));
  }
  double elapsed = seconds_since(start);
  return {differing == 0 && black > 0 && elapsed < 30.0,
          fmt("differing pixels=%.0f black pixels=%.0f %.2fs", static_cast<double>(differing),
              static_cast<double>(black), elapsed)};
}

// 100 synthetic sessions; frequencies and edges recounted by brute force.
Verdict subgraph_oracle() {
  Sitemap sitemap = load_from_file(fixture("shop_sitemap.json"));
  std::vector<ProfileRequest> profiles;
  TrafficKind kinds[] = {TrafficKind::human_walk, TrafficKind::scraper, TrafficKind::crawler,
                         TrafficKind::bruteforcer};
  for (int i = 0; i < 4; ++i) {
    TrafficProfile p;
    p.kind = kinds[i];
    p.seed = 100 + i;
    p.min_length = 3;
    p.max_length = 40;
    profiles.push_back({p, 25});
  }
  SynthOptions options;
  options.seed = 5;
  auto sessions = generate(sitemap, profiles, options);
  std::size_t mismatches = 0;
  for (const auto& session : sessions) {
    std::vector<std::string> mapped;
    for (const auto& r : session.requests) {
      std::string pattern = "INVALID";
      if (r.status < 400) {
        std::string p = normalize(r.request_uri).value();
        for (const auto& known : sitemap.patterns()) {
          if (known == p && known != "INVALID") pattern = p;
        }
      }
      mapped.push_back(pattern);
    }
    std::map<std::string, std::uint64_t> freq;
    for (const auto& m : mapped) ++freq[m];
    std::set<std::pair<std::string, std::string>> edges;
    for (std::size_t i = 1; i < mapped.size(); ++i) {
      if (mapped[i] != mapped[i - 1]) edges.emplace(mapped[i - 1], mapped[i]);
    }

    SessionSubgraph g = map_session(sitemap, session);
    std::map<std::string, std::uint64_t> got_freq;
    for (const auto& [id, f] : g.frequencies) got_freq[sitemap.pattern(id)] = f;
    std::set<std::pair<std::string, std::string>> got_edges;
    for (const auto& [a, b] : g.edges) got_edges.emplace(sitemap.pattern(a), sitemap.pattern(b));
    if (got_freq != freq || got_edges != edges) ++mismatches;
  }
  return {sessions.size() == 100 && mismatches == 0,
          fmt("sessions=%.0f mismatching=%.0f", static_cast<double>(sessions.size()),
              static_cast<double>(mismatches))};
}

Sitemap graph(const std::vector<std::string>& nodes,
              const std::vector<std::pair<std::string, std::string>>& edges) {
  SitemapBuilder b;
  for (const auto& n : nodes) b.add_node(n);
  for (const auto& [from, to] : edges) b.add_edge(*b.find(from), *b.find(to));
  return std::move(b).finish();
}

double dist(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

Verdict layout_affinity() {
  std::vector<std::string> nodes;
  std::vector<std::pair<std::string, std::string>> edges;
  for (char side : {'l', 'r'}) {
    for (int i = 0; i < 5; ++i) nodes.push_back(std::string("/") + side + std::to_string(i));
    for (int i = 0; i < 5; ++i)
      for (int j = i + 1; j < 5; ++j)
        edges.emplace_back(std::string("/") + side + std::to_string(i),
                           std::string("/") + side + std::to_string(j));
  }
  edges.emplace_back("/l0", "/r0");
  Sitemap cliques = graph(nodes, edges);
  LayoutConfig config;
  Sitemap first = run_layout(cliques, config);
  Sitemap second = run_layout(cliques, config);
  const auto& xy = first.coordinates();
  double intra = 0, inter = 0;
  int ni = 0, nx = 0;
  for (int i = 0; i < 10; ++i) {
    for (int j = i + 1; j < 10; ++j) {
      if ((i < 5) == (j < 5)) {
        intra += dist(xy[i], xy[j]);
        ++ni;
      } else {
        inter += dist(xy[i], xy[j]);
        ++nx;
      }
    }
  }
  intra /= ni;
  inter /= nx;
  bool bitwise = xy.size() == second.coordinates().size() &&
                 std::memcmp(xy.data(), second.coordinates().data(), xy.size() * sizeof(Point)) == 0;

  Sitemap path = run_layout(graph({"/A", "/B", "/C"}, {{"/A", "/B"}, {"/B", "/C"}}), config);
  Point a = path.coordinates()[*path.find("/A")];
  Point b = path.coordinates()[*path.find("/B")];
  Point c = path.coordinates()[*path.find("/C")];
  double ab = dist(a, b), ac = dist(a, c);

  return {intra < inter && ab < ac && bitwise,
          fmt("intra=%.4f inter=%.4f ", intra, inter) + fmt("AB=%.4f AC=%.4f", ab, ac) +
              (bitwise ? " bitwise-equal" : " runs differ")};
}

Verdict filter_semantics() {
  Sitemap sitemap = sitemap_from_json(R"({"nodes":["/a","/b","/c","/d"],"edges":[]})");
  auto session = [](std::string id, std::vector<std::string> uris) {
    return testing::make_session(std::move(id), uris);
  };
  // Distinct mapped nodes: 3 (the 404 lands on INVALID) and 4.
  Session three = session("three", {"/a", "/b", "/a", "/b", "/a"});
  three.requests.push_back(testing::make_request("three", "/a", 404, 99));
  Session four = session("four", {"/a", "/b", "/c", "/d", "/d"});
  Session four_invalid = session("four-invalid", {"/a", "/b", "/c", "/unknown"});
  std::vector<SessionSubgraph> graphs;
  for (const auto& s : {three, four, four_invalid}) graphs.push_back(map_session(sitemap, s));
  auto kept = filter_min_spots(graphs, 3);
  std::set<std::string> ids;
  for (const auto& g : kept) ids.insert(g.session_id);
  bool ok = graphs[0].spot_count() == 3 && graphs[1].spot_count() == 4 &&
            graphs[2].spot_count() == 4 && ids == std::set<std::string>{"four", "four-invalid"};
  return {ok, "3 spots excluded: " + std::string(ids.count("three") ? "no" : "yes") +
                  ", 4 spots kept: " + (ids.count("four") && ids.count("four-invalid") ? "yes" : "no")};
}

std::map<std::string, std::string> tree_contents(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (entry.is_regular_file()) {
      out[fs::relative(entry.path(), root).string()] = testing::read_file(entry.path());
    }
  }
  return out;
}

// synth -> sitemap build -> layout -> render through the command line, twice.
Verdict end_to_end_determinism() {
  const char* profiles = R"({"profiles":[
    {"kind":"human_walk","sessions":40,"min_length":5,"max_length":20},
    {"kind":"scraper","sessions":15,"target":"/product?id=*"},
    {"kind":"crawler","sessions":10},
    {"kind":"bruteforcer","sessions":10}]})";
  testing::TempDir dir;
  testing::write_file(dir / "profiles.json", profiles);
  std::string failure;
  auto run_once = [&](const fs::path& out, const std::string& jobs) {
    fs::create_directories(out);
    std::ostringstream sink, err;
    std::vector<std::vector<std::string>> steps = {
        {"--seed", "17", "synth", "--sitemap", fixture("shop_sitemap.json"), "--profiles",
         (dir / "profiles.json").string(), "--out", (out / "logs.jsonl").string()},
        {"sitemap", "build", "--mode", "sniff", "--logs", (out / "logs.jsonl").string(), "--out",
         (out / "sitemap.json").string()},
        {"--seed", "17", "layout", "--sitemap", (out / "sitemap.json").string()},
        {"render", "--sitemap", (out / "sitemap.json").string(), "--logs",
         (out / "logs.jsonl").string(), "--out", (out / "dataset").string(), "--jobs", jobs},
    };
    for (const auto& args : steps) {
      if (cli::run(args, sink, err) != 0 && failure.empty()) failure = err.str();
    }
  };
  run_once(dir / "one", "1");
  run_once(dir / "two", "1");
  run_once(dir / "three", "4");
  auto one = tree_contents(dir / "one");
  auto two = tree_contents(dir / "two");
  auto three = tree_contents(dir / "three");
  std::size_t images = 0;
  for (const auto& [name, bytes] : one) images += name.rfind("dataset/images/", 0) == 0;
  bool ok = failure.empty() && images > 0 && one == two && one == three;
  return {ok, failure.empty() ? fmt("files=%.0f images=%.0f ", static_cast<double>(one.size()),
                                    static_cast<double>(images)) +
                                    (one == two && one == three ? "byte-identical (jobs 1, 1, 4)"
                                                                : "outputs differ")
                              : "command failed: " + failure};
}

// 542-node sitemap shaped like a site tree plus cross links.
Sitemap search_scale_sitemap() {
  std::mt19937_64 rng(542);
  SitemapBuilder b;
  std::vector<NodeId> ids;
  for (int i = 0; i < 541; ++i) {
    ids.push_back(b.add_node("/section" + std::to_string(i % 23) + "/page" + std::to_string(i) +
                             (i % 3 == 0 ? "?id=*" : "")));
    if (i > 0) b.add_edge(ids[rng() % i], ids[i]);
  }
  for (int i = 0; i < 541; ++i) b.add_edge(ids[rng() % 541], ids[rng() % 541]);
  return std::move(b).finish();
}

// Map, filter, render and write PNGs for 50-request sessions on one thread.
Verdict throughput() {
  Sitemap sitemap = run_layout(search_scale_sitemap(), LayoutConfig{});
  std::vector<ProfileRequest> profiles;
  TrafficKind kinds[] = {TrafficKind::human_walk, TrafficKind::scraper, TrafficKind::crawler,
                         TrafficKind::bruteforcer};
  for (int i = 0; i < 4; ++i) {
    TrafficProfile p;
    p.kind = kinds[i];
    p.seed = 7 + i;
    p.min_length = 50;
    p.max_length = 50;
    profiles.push_back({p, i == 0 ? 200u : 100u});
  }
  auto sessions = generate(sitemap, profiles);
  testing::TempDir dir;
  auto start = Clock::now();
  RenderRunStats stats = render_dataset(sitemap, sessions, RenderConfig{}, 3, 1, dir.path());
  double elapsed = seconds_since(start);
  // Only rendered sessions count toward the rate.
  double rate = static_cast<double>(stats.sessions_out) / elapsed;
  return {sitemap.size() == 542 && stats.sessions_out > 0 && rate >= 100.0,
          fmt("nodes=%.0f rendered=%.0f ", static_cast<double>(sitemap.size()),
              static_cast<double>(stats.sessions_out)) +
              fmt("rate=%.0f sessions/s (%.2fs)", rate, elapsed)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"radius constraints", radius_constraints},
      {"rasterization oracle", raster_oracle},
      {"subgraph oracle", subgraph_oracle},
      {"layout affinity and determinism", layout_affinity},
      {"filter semantics", filter_semantics},
      {"end-to-end determinism", end_to_end_determinism},
      {"render throughput", throughput},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failed += !v.pass;
    std::cout << (v.pass ? "PASS  " : "FAIL  ") << name << ": " << v.detail << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed"
            << std::endl;
  return failed == 0 ? 0 : 1;
}
