#include "botgraph/url_pattern.hpp"

#include "botgraph/error.hpp"

#include <algorithm>
#include <cctype>
#include <vector>

namespace botgraph {

namespace {

bool is_hex(char c) { return std::isxdigit(static_cast<unsigned char>(c)) != 0; }

bool all_of(std::string_view s, bool (*pred)(char)) {
  return !s.empty() && std::all_of(s.begin(), s.end(), pred);
}

bool is_uuid(std::string_view s) {
  if (s.size() != 36) return false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    bool dash = i == 8 || i == 13 || i == 18 || i == 23;
    if (dash ? s[i] != '-' : !is_hex(s[i])) return false;
  }
  return true;
}

std::string lower_percent_escapes(std::string_view s) {
  std::string out(s);
  for (std::size_t i = 0; i + 2 < out.size(); ++i) {
    if (out[i] == '%' && is_hex(out[i + 1]) && is_hex(out[i + 2])) {
      out[i + 1] = static_cast<char>(std::tolower(static_cast<unsigned char>(out[i + 1])));
      out[i + 2] = static_cast<char>(std::tolower(static_cast<unsigned char>(out[i + 2])));
      i += 2;
    }
  }
  return out;
}

}  // namespace

bool is_identifier_segment(std::string_view segment) {
  if (all_of(segment, [](char c) { return c >= '0' && c <= '9'; })) return true;
  if (segment.size() >= 8 && all_of(segment, is_hex)) return true;
  return is_uuid(segment);
}

UrlPattern normalize(std::string_view uri) {
  if (uri.empty() || uri.front() != '/') {
    throw Error(ErrorKind::invalid_uri, "'" + std::string(uri) + "' does not start with '/'");
  }
  if (auto hash = uri.find('#'); hash != std::string_view::npos) uri = uri.substr(0, hash);

  std::string_view path = uri;
  std::string_view query;
  bool has_query = false;
  if (auto q = uri.find('?'); q != std::string_view::npos) {
    path = uri.substr(0, q);
    query = uri.substr(q + 1);
    has_query = true;
  }

  std::string normalized_path = lower_percent_escapes(path);
  while (normalized_path.size() > 1 && normalized_path.back() == '/') normalized_path.pop_back();

  std::string out;
  out.reserve(normalized_path.size() + query.size());
  std::size_t pos = 1;
  out += '/';
  while (pos <= normalized_path.size()) {
    std::size_t next = normalized_path.find('/', pos);
    if (next == std::string::npos) next = normalized_path.size();
    std::string_view segment(normalized_path.data() + pos, next - pos);
    out += is_identifier_segment(segment) ? std::string_view("*") : segment;
    if (next < normalized_path.size()) out += '/';
    pos = next + 1;
  }

  if (has_query) {
    std::vector<std::string> keys;
    std::size_t start = 0;
    while (start <= query.size()) {
      std::size_t amp = query.find('&', start);
      if (amp == std::string_view::npos) amp = query.size();
      std::string_view param = query.substr(start, amp - start);
      std::string_view key = param.substr(0, param.find('='));
      if (!key.empty()) keys.push_back(lower_percent_escapes(key));
      start = amp + 1;
    }
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    for (std::size_t i = 0; i < keys.size(); ++i) {
      out += i == 0 ? '?' : '&';
      out += keys[i];
      out += "=*";
    }
  }
  return UrlPattern(std::move(out));
}

}  // namespace botgraph
