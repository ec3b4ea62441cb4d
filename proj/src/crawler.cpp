#include "botgraph/crawler.hpp"

#include "botgraph/error.hpp"
#include "botgraph/url_pattern.hpp"

#include <algorithm>
#include <cctype>
#include <deque>

namespace botgraph {

FetchResult FixtureFetcher::fetch(const std::string& target) {
  fetched_.push_back(target);
  auto it = pages_.find(target);
  if (it == pages_.end()) return FetchResult{404, {}};
  return FetchResult{200, it->second};
}

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool iequals_prefix(std::string_view text, std::size_t pos, std::string_view prefix) {
  if (text.size() - pos < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(text[pos + i])) != prefix[i]) return false;
  }
  return true;
}

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::string strip_fragment(std::string_view s) {
  return std::string(s.substr(0, s.find('#')));
}

// RFC 3986 section 5.2.4 on the path component only.
std::string remove_dot_segments(std::string_view target) {
  std::string_view path = target;
  std::string_view query;
  if (auto q = target.find('?'); q != std::string_view::npos) {
    path = target.substr(0, q);
    query = target.substr(q);
  }
  std::vector<std::string_view> out;
  std::size_t pos = 1;
  bool trailing_slash = false;
  while (pos <= path.size()) {
    std::size_t next = path.find('/', pos);
    if (next == std::string_view::npos) next = path.size();
    std::string_view seg = path.substr(pos, next - pos);
    trailing_slash = false;
    if (seg == ".") {
      trailing_slash = true;
    } else if (seg == "..") {
      if (!out.empty()) out.pop_back();
      trailing_slash = true;
    } else {
      out.push_back(seg);
    }
    pos = next + 1;
  }
  std::string result;
  for (auto seg : out) {
    result += '/';
    result += seg;
  }
  if (result.empty() || (trailing_slash && result.back() != '/')) result += '/';
  result += query;
  return result;
}

}  // namespace

std::optional<SplitUrl> split_url(std::string_view url) {
  if (!url.empty() && url.front() == '/') {
    return SplitUrl{{}, {}, strip_fragment(url)};
  }
  auto sep = url.find("://");
  if (sep == std::string_view::npos) return std::nullopt;
  std::string scheme = lower(url.substr(0, sep));
  if (scheme != "http" && scheme != "https") return std::nullopt;
  std::string_view rest = url.substr(sep + 3);
  std::size_t authority_end = rest.find_first_of("/?#");
  if (authority_end == std::string_view::npos) authority_end = rest.size();
  std::string_view authority = rest.substr(0, authority_end);
  if (auto at = authority.rfind('@'); at != std::string_view::npos) authority = authority.substr(at + 1);
  if (authority.empty()) return std::nullopt;

  SplitUrl out;
  out.origin = scheme + "://" + std::string(authority);
  out.host = lower(authority.substr(0, authority.find(':')));
  std::string target = strip_fragment(rest.substr(authority_end));
  if (target.empty() || target.front() != '/') target.insert(target.begin(), '/');
  out.target = std::move(target);
  return out;
}

std::vector<std::string> extract_links(std::string_view html) {
  std::vector<std::string> links;
  std::size_t pos = 0;
  while ((pos = html.find('<', pos)) != std::string_view::npos) {
    if (html.substr(pos, 4) == "<!--") {
      auto end = html.find("-->", pos + 4);
      if (end == std::string_view::npos) break;
      pos = end + 3;
      continue;
    }
    if (!iequals_prefix(html, pos, "<a") || pos + 2 >= html.size() ||
        !(is_space(html[pos + 2]) || html[pos + 2] == '>')) {
      ++pos;
      continue;
    }
    pos += 2;
    // Attributes up to the closing '>'.
    while (pos < html.size() && html[pos] != '>') {
      while (pos < html.size() && (is_space(html[pos]) || html[pos] == '/')) ++pos;
      std::size_t name_start = pos;
      while (pos < html.size() && !is_space(html[pos]) && html[pos] != '=' && html[pos] != '>') {
        ++pos;
      }
      std::string name = lower(html.substr(name_start, pos - name_start));
      while (pos < html.size() && is_space(html[pos])) ++pos;
      std::string value;
      bool has_value = false;
      if (pos < html.size() && html[pos] == '=') {
        ++pos;
        while (pos < html.size() && is_space(html[pos])) ++pos;
        has_value = true;
        if (pos < html.size() && (html[pos] == '"' || html[pos] == '\'')) {
          char quote = html[pos++];
          std::size_t end = html.find(quote, pos);
          if (end == std::string_view::npos) end = html.size();
          value = html.substr(pos, end - pos);
          pos = std::min(end + 1, html.size());
        } else {
          std::size_t start = pos;
          while (pos < html.size() && !is_space(html[pos]) && html[pos] != '>') ++pos;
          value = html.substr(start, pos - start);
        }
      }
      if (name == "href" && has_value) {
        std::string decoded;
        for (std::size_t i = 0; i < value.size(); ++i) {
          if (value.compare(i, 5, "&amp;") == 0) {
            decoded += '&';
            i += 4;
          } else {
            decoded += value[i];
          }
        }
        links.push_back(std::move(decoded));
      }
      if (name.empty() && !has_value && pos < html.size() && html[pos] != '>') ++pos;
    }
  }
  return links;
}

std::optional<std::string> resolve_link(std::string_view href, std::string_view page_target,
                                        std::string_view host) {
  while (!href.empty() && is_space(href.front())) href.remove_prefix(1);
  while (!href.empty() && is_space(href.back())) href.remove_suffix(1);
  if (href.empty() || href.front() == '#') return std::nullopt;

  if (href.substr(0, 2) == "//") {
    std::string absolute = "http:" + std::string(href);
    return resolve_link(absolute, page_target, host);
  }

  std::size_t colon = href.find(':');
  std::size_t first_delim = href.find_first_of("/?#");
  if (colon != std::string_view::npos && colon < first_delim) {
    auto split = split_url(href);
    if (!split || host.empty() || split->host != lower(host)) return std::nullopt;
    return remove_dot_segments(split->target);
  }

  std::string_view page_path = page_target.substr(0, page_target.find('?'));
  if (href.front() == '/') return remove_dot_segments(strip_fragment(href));
  if (href.front() == '?') return std::string(page_path) + strip_fragment(href);

  std::string base(page_path.substr(0, page_path.rfind('/') + 1));
  if (base.empty()) base = "/";
  return remove_dot_segments(base + strip_fragment(href));
}

CrawlResult crawl(Fetcher& fetcher, std::string_view start, std::size_t max_patterns) {
  if (max_patterns == 0) throw Error(ErrorKind::config, "max_patterns must be at least 1");
  auto start_url = split_url(start);
  if (!start_url) throw Error(ErrorKind::crawl, "unsupported start url '" + std::string(start) + "'");

  SitemapBuilder builder;
  CrawlResult result{SitemapBuilder{}.finish(), 0, {}};
  std::deque<std::pair<std::string, NodeId>> queue;
  queue.emplace_back(start_url->target, builder.add_node(normalize(start_url->target).value()));

  bool first = true;
  while (!queue.empty()) {
    auto [target, page_id] = std::move(queue.front());
    queue.pop_front();

    FetchResult page;
    std::string failure;
    ++result.fetches;
    try {
      page = fetcher.fetch(target);
      if (page.status >= 400) failure = "status " + std::to_string(page.status);
    } catch (const std::exception& e) {
      failure = e.what();
    }
    if (!failure.empty()) {
      if (first) throw Error(ErrorKind::crawl, "start page " + target + ": " + failure);
      result.failed_targets.push_back(target);
      continue;
    }
    first = false;

    for (const auto& href : extract_links(page.body)) {
      auto link = resolve_link(href, target, start_url->host);
      if (!link) continue;
      std::string pattern = normalize(*link).value();
      auto linked = builder.find(pattern);
      if (!linked) {
        if (builder.size() >= max_patterns) continue;
        linked = builder.add_node(pattern);
        queue.emplace_back(*link, *linked);
      }
      if (*linked != page_id) builder.add_edge(page_id, *linked);
    }
  }
  result.sitemap = std::move(builder).finish();
  return result;
}

}  // namespace botgraph
