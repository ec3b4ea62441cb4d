#include "botgraph/crawler.hpp"
#include "botgraph/error.hpp"
#include "botgraph/url_pattern.hpp"

#include <gtest/gtest.h>
#include <httplib.h>

#include <set>
#include <thread>

namespace botgraph {
namespace {

using Pages = std::map<std::string, std::string>;

std::set<std::pair<std::string, std::string>> named_edges(const Sitemap& s) {
  std::set<std::pair<std::string, std::string>> out;
  for (const auto& [a, b] : s.edges()) out.emplace(s.pattern(a), s.pattern(b));
  return out;
}

TEST(Crawl, EachPatternFetchedOnce) {
  FixtureFetcher fetcher(Pages{
      {"/", R"(<html><a href="/p?id=1">one</a> <a href='/p?id=2'>two</a></html>)"},
      {"/p?id=1", R"(<a href="/">home</a>)"},
      {"/p?id=2", R"(<a href="/">home</a>)"},
  });
  CrawlResult r = crawl(fetcher, "http://shop.example/", 100);
  std::set<std::string> nodes(r.sitemap.patterns().begin(), r.sitemap.patterns().end());
  EXPECT_EQ(nodes, (std::set<std::string>{"/", "/p?id=*", "INVALID"}));
  EXPECT_EQ(named_edges(r.sitemap),
            (std::set<std::pair<std::string, std::string>>{{"/", "/p?id=*"}, {"/p?id=*", "/"}}));
  int family = 0;
  for (const auto& t : fetcher.fetched()) family += normalize(t).value() == "/p?id=*";
  EXPECT_EQ(family, 1);
  EXPECT_EQ(r.fetches, 2u);
}

TEST(Crawl, StartWithoutLinks) {
  FixtureFetcher fetcher(Pages{{"/", "<p>nothing here</p>"}});
  CrawlResult r = crawl(fetcher, "/", 10);
  EXPECT_EQ(r.sitemap.size(), 2u);
  EXPECT_TRUE(r.sitemap.edges().empty());
}

TEST(Crawl, BudgetOfOneFetchesOnlyStart) {
  FixtureFetcher fetcher(Pages{{"/", R"(<a href="/a">a</a><a href="/b">b</a>)"},
                          {"/a", ""},
                          {"/b", ""}});
  CrawlResult r = crawl(fetcher, "/", 1);
  EXPECT_EQ(fetcher.fetched(), std::vector<std::string>{"/"});
  EXPECT_EQ(r.sitemap.size(), 2u);
}

TEST(Crawl, NeverFetchesTwoUrlsOfOnePattern) {
  std::map<std::string, std::string> pages;
  pages["/"] = R"(<a href="/cat/1">c</a><a href="/cat/2">c</a><a href="/item?id=9">i</a>)";
  for (int i = 1; i <= 30; ++i) {
    std::string links;
    for (int j = 1; j <= 30; ++j) {
      links += "<a href=\"/item?id=" + std::to_string(i * 100 + j) + "\">x</a>";
      links += "<a href=\"/cat/" + std::to_string(j) + "\">x</a>";
    }
    pages["/cat/" + std::to_string(i)] = links + R"(<a href="/about">about</a>)";
    pages["/item?id=" + std::to_string(i)] = R"(<a href="../cat/3">up</a>)";
  }
  pages["/about"] = R"html(<a href="mailto:x@y">m</a><a href="javascript:void(0)">j</a><a href="#top">t</a>)html";
  FixtureFetcher fetcher(pages);
  CrawlResult r = crawl(fetcher, "http://shop.example/", 100);
  std::set<std::string> seen;
  for (const auto& t : fetcher.fetched()) EXPECT_TRUE(seen.insert(normalize(t).value()).second) << t;
  r.sitemap.validate();
}

TEST(Crawl, FailedPagesAreRecorded) {
  FixtureFetcher fetcher(Pages{{"/", R"(<a href="/gone">x</a><a href="/ok">y</a>)"}, {"/ok", ""}});
  CrawlResult r = crawl(fetcher, "/", 10);
  EXPECT_EQ(r.failed_targets, std::vector<std::string>{"/gone"});
}

TEST(Crawl, StartFailureIsCrawlError) {
  FixtureFetcher fetcher(Pages{});
  try {
    crawl(fetcher, "/", 10);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::crawl);
  }
}

TEST(Crawl, ZeroBudgetIsConfigError) {
  FixtureFetcher fetcher(Pages{{"/", ""}});
  try {
    crawl(fetcher, "/", 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::config);
  }
}

TEST(Links, ExtractAndResolve) {
  auto links = extract_links(
      R"(<A HREF="/x?a=1&amp;b=2">x</A><!-- <a href="/hidden"> --><a class=c href=/bare>b</a>)");
  EXPECT_EQ(links, (std::vector<std::string>{"/x?a=1&b=2", "/bare"}));

  EXPECT_EQ(resolve_link("b/c", "/a/index", "h"), "/a/b/c");
  EXPECT_EQ(resolve_link("../up", "/a/b/c", "h"), "/a/up");
  EXPECT_EQ(resolve_link("?q=1", "/s/page", "h"), "/s/page?q=1");
  EXPECT_EQ(resolve_link("//h/x", "/", "h"), "/x");
  EXPECT_EQ(resolve_link("https://H:8443/y#z", "/", "h"), "/y");
  EXPECT_FALSE(resolve_link("http://other/x", "/", "h").has_value());
  EXPECT_FALSE(resolve_link("mailto:a@b", "/", "h").has_value());
  EXPECT_FALSE(resolve_link("javascript:go()", "/", "h").has_value());
  EXPECT_FALSE(resolve_link("#frag", "/", "h").has_value());
}

TEST(Links, SplitUrl) {
  auto u = split_url("http://Shop.Example:8080/a/b?x=1#f");
  ASSERT_TRUE(u);
  EXPECT_EQ(u->origin, "http://Shop.Example:8080");
  EXPECT_EQ(u->host, "shop.example");
  EXPECT_EQ(u->target, "/a/b?x=1");
  auto rel = split_url("/only");
  ASSERT_TRUE(rel);
  EXPECT_TRUE(rel->origin.empty());
  EXPECT_FALSE(split_url("ftp://x/y").has_value());
}

TEST(HttpFetcher, CrawlsLoopbackServer) {
  httplib::Server server;
  std::string seen_agent;
  server.Get("/", [&](const httplib::Request& req, httplib::Response& res) {
    seen_agent = req.get_header_value("User-Agent");
    res.set_content(R"(<a href="/item?id=1">1</a><a href="/old">old</a><a href="/broken">b</a>)",
                    "text/html");
  });
  server.Get("/item", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(R"(<a href="/">home</a>)", "text/html");
  });
  server.Get("/old", [](const httplib::Request&, httplib::Response& res) {
    res.set_redirect("/item?id=2");
  });
  server.Get("/broken", [](const httplib::Request&, httplib::Response& res) { res.status = 500; });
  int port = server.bind_to_any_port("127.0.0.1");
  ASSERT_GT(port, 0);
  std::thread worker([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  const std::string origin = "http://127.0.0.1:" + std::to_string(port);
  HttpFetcher fetcher(origin, std::chrono::milliseconds(2000), "botgraph-test/1");
  CrawlResult r = crawl(fetcher, origin + "/", 10);
  server.stop();
  worker.join();

  std::set<std::string> nodes(r.sitemap.patterns().begin(), r.sitemap.patterns().end());
  EXPECT_EQ(nodes, (std::set<std::string>{"/", "/item?id=*", "/old", "/broken", "INVALID"}));
  EXPECT_EQ(r.failed_targets, std::vector<std::string>{"/broken"});
  EXPECT_EQ(seen_agent, "botgraph-test/1");
}

TEST(HttpFetcher, UnreachableStartIsCrawlError) {
  httplib::Server probe;
  int port = probe.bind_to_any_port("127.0.0.1");
  probe.stop();
  HttpFetcher fetcher("http://127.0.0.1:" + std::to_string(port), std::chrono::milliseconds(300), "t");
  try {
    crawl(fetcher, "/", 5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::crawl);
  }
}

}  // namespace
}  // namespace botgraph
