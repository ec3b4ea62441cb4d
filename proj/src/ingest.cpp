#include "botgraph/ingest.hpp"

#include "botgraph/csv.hpp"
#include "botgraph/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>

namespace botgraph {

using json = nlohmann::json;

std::string_view to_string(Label label) {
  return label == Label::bot ? "bot" : "human";
}

std::optional<Label> parse_label(std::string_view text) {
  if (text == "bot") return Label::bot;
  if (text == "human" || text == "non-bot") return Label::human;
  return std::nullopt;
}

namespace {

constexpr std::array<std::pair<std::string_view, HttpMethodKind>, 7> kMethods{{
    {"GET", HttpMethodKind::get},
    {"POST", HttpMethodKind::post},
    {"PUT", HttpMethodKind::put},
    {"DELETE", HttpMethodKind::del},
    {"HEAD", HttpMethodKind::head},
    {"OPTIONS", HttpMethodKind::options},
    {"PATCH", HttpMethodKind::patch},
}};

// Reads between min_digits and max_digits decimal digits.
bool read_number(std::string_view text, std::size_t& pos, std::size_t min_digits,
                 std::size_t max_digits, int& value) {
  std::size_t start = pos;
  while (pos < text.size() && pos - start < max_digits && text[pos] >= '0' && text[pos] <= '9') {
    ++pos;
  }
  if (pos - start < min_digits) return false;
  auto [ptr, ec] = std::from_chars(text.data() + start, text.data() + pos, value);
  return ec == std::errc() && ptr == text.data() + pos;
}

bool consume(std::string_view text, std::size_t& pos, char c) {
  if (pos < text.size() && text[pos] == c) {
    ++pos;
    return true;
  }
  return false;
}

}  // namespace

HttpMethod HttpMethod::parse(std::string_view text) {
  for (const auto& [name, kind] : kMethods) {
    if (text == name) return HttpMethod{kind, {}};
  }
  return HttpMethod{HttpMethodKind::other, std::string(text)};
}

std::string HttpMethod::to_string() const {
  for (const auto& [name, k] : kMethods) {
    if (k == kind) return std::string(name);
  }
  return other;
}

std::optional<Timestamp> parse_timestamp(std::string_view text) {
  using namespace std::chrono;
  std::size_t pos = 0;
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0, ms = 0;
  if (!read_number(text, pos, 4, 4, y) || !consume(text, pos, '-') ||
      !read_number(text, pos, 1, 2, mo) || !consume(text, pos, '-') ||
      !read_number(text, pos, 1, 2, d)) {
    return std::nullopt;
  }
  year_month_day date{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!date.ok()) return std::nullopt;

  minutes offset{0};
  if (pos < text.size()) {
    if (!consume(text, pos, 'T') && !consume(text, pos, ' ')) return std::nullopt;
    if (!read_number(text, pos, 2, 2, h) || !consume(text, pos, ':') ||
        !read_number(text, pos, 2, 2, mi) || !consume(text, pos, ':') ||
        !read_number(text, pos, 2, 2, s)) {
      return std::nullopt;
    }
    if (h > 23 || mi > 59 || s > 60) return std::nullopt;
    if (consume(text, pos, '.')) {
      std::size_t start = pos;
      while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
      if (pos == start) return std::nullopt;
      // Millisecond precision: extra fraction digits are truncated.
      std::string frac(text.substr(start, std::min<std::size_t>(pos - start, 3)));
      frac.resize(3, '0');
      ms = std::stoi(frac);
    }
    if (consume(text, pos, 'Z')) {
    } else if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
      int sign = text[pos] == '-' ? -1 : 1;
      ++pos;
      int oh = 0, om = 0;
      if (!read_number(text, pos, 2, 2, oh)) return std::nullopt;
      consume(text, pos, ':');
      if (!read_number(text, pos, 2, 2, om)) return std::nullopt;
      offset = minutes{sign * (oh * 60 + om)};
    }
    if (pos != text.size()) return std::nullopt;
  }
  return Timestamp{sys_days{date}} + hours{h} + minutes{mi} + seconds{s} + milliseconds{ms} -
         offset;
}

std::string format_timestamp(Timestamp ts) {
  using namespace std::chrono;
  auto days = floor<std::chrono::days>(ts);
  year_month_day date{days};
  hh_mm_ss<milliseconds> tod{ts - days};
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02d:%02d:%02d.%03dZ", int(date.year()),
                unsigned(date.month()), unsigned(date.day()), int(tod.hours().count()),
                int(tod.minutes().count()), int(tod.seconds().count()),
                int(tod.subseconds().count()));
  return buf;
}

std::optional<std::string> check_request(const Request& request) {
  if (request.status < 100 || request.status > 599) {
    return "status " + std::to_string(request.status) + " outside [100, 599]";
  }
  if (request.request_uri.empty() || request.request_uri.front() != '/') {
    return "request_uri must begin with '/'";
  }
  if (request.session_id.empty()) return "empty session_id";
  return std::nullopt;
}

std::optional<LogFormat> parse_log_format(std::string_view text) {
  if (text == "jsonl") return LogFormat::jsonl;
  if (text == "csv") return LogFormat::csv;
  return std::nullopt;
}

namespace {

std::optional<Request> request_from_json(const std::string& line) {
  json obj = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (!obj.is_object()) return std::nullopt;
  auto text_field = [&](const char* key) -> std::optional<std::string> {
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_string()) return std::nullopt;
    return it->get<std::string>();
  };

  Request r;
  auto ts = text_field("timestamp");
  auto method = text_field("http_method");
  auto uri = text_field("request_uri");
  auto host = text_field("host");
  auto ua = text_field("user_agent");
  auto ip = text_field("client_ip");
  auto sid = text_field("session_id");
  auto status = obj.find("status");
  if (!ts || !method || !uri || !host || !ua || !ip || !sid) return std::nullopt;
  if (status == obj.end() || !status->is_number_integer()) return std::nullopt;

  auto parsed_ts = parse_timestamp(*ts);
  if (!parsed_ts) return std::nullopt;
  r.timestamp = *parsed_ts;
  r.http_method = HttpMethod::parse(*method);
  r.request_uri = std::move(*uri);
  auto code = status->get<std::int64_t>();
  if (code < 0 || code > 9999) return std::nullopt;
  r.status = static_cast<int>(code);
  r.host = std::move(*host);
  r.user_agent = std::move(*ua);
  r.client_ip = std::move(*ip);
  r.session_id = std::move(*sid);

  if (auto it = obj.find("label"); it != obj.end() && !it->is_null()) {
    if (!it->is_string()) return std::nullopt;
    const auto& text = it->get_ref<const std::string&>();
    if (!text.empty()) {
      r.label = parse_label(text);
      if (!r.label) return std::nullopt;
    }
  }
  if (check_request(r)) return std::nullopt;
  return r;
}

bool blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(),
                     [](unsigned char c) { return c == ' ' || c == '\t' || c == '\r'; });
}

struct CsvColumns {
  std::unordered_map<std::string, std::size_t> index;
  std::size_t width = 0;

  std::optional<std::string> get(const std::vector<std::string>& fields,
                                 const std::string& name) const {
    auto it = index.find(name);
    if (it == index.end() || it->second >= fields.size()) return std::nullopt;
    return fields[it->second];
  }
};

std::optional<Request> request_from_csv(const CsvColumns& cols,
                                        const std::vector<std::string>& fields) {
  if (fields.size() != cols.width) return std::nullopt;
  Request r;
  auto ts = parse_timestamp(*cols.get(fields, "timestamp"));
  if (!ts) return std::nullopt;
  r.timestamp = *ts;
  r.http_method = HttpMethod::parse(*cols.get(fields, "http_method"));
  r.request_uri = *cols.get(fields, "request_uri");
  const std::string status = *cols.get(fields, "status");
  auto [ptr, ec] = std::from_chars(status.data(), status.data() + status.size(), r.status);
  if (ec != std::errc() || ptr != status.data() + status.size()) return std::nullopt;
  r.host = *cols.get(fields, "host");
  r.user_agent = *cols.get(fields, "user_agent");
  r.client_ip = *cols.get(fields, "client_ip");
  r.session_id = *cols.get(fields, "session_id");
  if (auto label = cols.get(fields, "label"); label && !label->empty()) {
    r.label = parse_label(*label);
    if (!r.label) return std::nullopt;
  }
  if (check_request(r)) return std::nullopt;
  return r;
}

void note_malformed(ParseResult& result, std::size_t line_no) {
  ++result.malformed;
  if (!result.first_malformed_line) result.first_malformed_line = line_no;
}

}  // namespace

ParseResult parse_log(std::istream& in, LogFormat format) {
  ParseResult result;
  if (!in) throw Error(ErrorKind::input, "unreadable log stream");

  std::size_t line_no = 0;
  if (format == LogFormat::jsonl) {
    std::string line;
    while (std::getline(in, line)) {
      ++line_no;
      if (blank(line)) continue;
      if (auto r = request_from_json(line)) {
        result.requests.push_back(std::move(*r));
      } else {
        note_malformed(result, line_no);
      }
    }
  } else {
    std::vector<std::string> fields;
    std::size_t consumed = 0;
    bool ok = true;
    CsvColumns cols;
    // Header.
    while (read_csv_record(in, fields, consumed, ok)) {
      line_no += consumed;
      if (fields.size() == 1 && blank(fields[0])) continue;
      for (std::size_t i = 0; i < fields.size(); ++i) cols.index.emplace(fields[i], i);
      cols.width = fields.size();
      break;
    }
    if (!cols.index.empty()) {
      for (const char* required : {"timestamp", "http_method", "request_uri", "status", "host",
                                   "user_agent", "client_ip", "session_id"}) {
        if (!cols.index.count(required)) {
          throw Error(ErrorKind::format,
                      "csv header is missing column '" + std::string(required) + "'");
        }
      }
      while (read_csv_record(in, fields, consumed, ok)) {
        std::size_t record_line = line_no + 1;
        line_no += consumed;
        if (fields.size() == 1 && blank(fields[0])) continue;
        std::optional<Request> r;
        if (ok) r = request_from_csv(cols, fields);
        if (r) {
          result.requests.push_back(std::move(*r));
        } else {
          note_malformed(result, record_line);
        }
      }
    }
  }
  if (in.bad()) throw Error(ErrorKind::input, "read failure on log stream");

  std::size_t total = result.requests.size() + result.malformed;
  if (total > 0 && result.malformed * 2 > total) {
    throw Error(ErrorKind::format, std::to_string(result.malformed) + " of " +
                                       std::to_string(total) +
                                       " records malformed; first at line " +
                                       std::to_string(*result.first_malformed_line));
  }
  return result;
}

ParseResult parse_log_file(const std::string& path, LogFormat format) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::input, "cannot open log file " + path);
  return parse_log(in, format);
}

std::string to_jsonl(const Request& request) {
  // ordered_json keeps the documented key order.
  nlohmann::ordered_json obj;
  obj["timestamp"] = format_timestamp(request.timestamp);
  obj["http_method"] = request.http_method.to_string();
  obj["request_uri"] = request.request_uri;
  obj["status"] = request.status;
  obj["host"] = request.host;
  obj["user_agent"] = request.user_agent;
  obj["client_ip"] = request.client_ip;
  obj["session_id"] = request.session_id;
  if (request.label) obj["label"] = std::string(to_string(*request.label));
  return obj.dump();
}

void write_jsonl(std::ostream& out, const std::vector<Request>& requests) {
  for (const auto& r : requests) out << to_jsonl(r) << '\n';
}

std::vector<Session> sessionize(const std::vector<Request>& requests) {
  std::unordered_map<std::string, std::size_t> slot;
  std::vector<Session> sessions;
  for (const auto& r : requests) {
    auto [it, inserted] = slot.try_emplace(r.session_id, sessions.size());
    if (inserted) sessions.push_back(Session{r.session_id, {}, std::nullopt});
    sessions[it->second].requests.push_back(r);
  }

  for (auto& s : sessions) {
    std::stable_sort(s.requests.begin(), s.requests.end(),
                     [](const Request& a, const Request& b) { return a.timestamp < b.timestamp; });
    s.label = s.requests.front().label;
    for (const auto& r : s.requests) {
      if (r.label != s.label) {
        throw Error(ErrorKind::labeling_conflict,
                    "session '" + s.session_id + "' has requests with differing labels");
      }
    }
  }
  std::stable_sort(sessions.begin(), sessions.end(), [](const Session& a, const Session& b) {
    return a.requests.front().timestamp < b.requests.front().timestamp;
  });
  return sessions;
}

std::vector<Request> flatten(const std::vector<Session>& sessions) {
  std::vector<Request> out;
  for (const auto& s : sessions) out.insert(out.end(), s.requests.begin(), s.requests.end());
  return out;
}

}  // namespace botgraph
