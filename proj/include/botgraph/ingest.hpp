#pragma once

#include <chrono>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace botgraph {

using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;

enum class Label { bot, human };

std::string_view to_string(Label label);
// Accepts "bot", "human" and the alias "non-bot".
std::optional<Label> parse_label(std::string_view text);

enum class HttpMethodKind { get, post, put, del, head, options, patch, other };

struct HttpMethod {
  HttpMethodKind kind = HttpMethodKind::get;
  std::string other;  // verb text, only meaningful for HttpMethodKind::other

  static HttpMethod parse(std::string_view text);
  std::string to_string() const;

  friend bool operator==(const HttpMethod&, const HttpMethod&) = default;
};

// ISO-8601 "YYYY-MM-DD[THH:MM:SS[.fff][Z|+HH:MM]]". Naive values are UTC.
std::optional<Timestamp> parse_timestamp(std::string_view text);
// Always "YYYY-MM-DDTHH:MM:SS.mmmZ".
std::string format_timestamp(Timestamp ts);

struct Request {
  Timestamp timestamp{};
  HttpMethod http_method;
  std::string request_uri;
  int status = 200;
  std::string host;
  std::string user_agent;  // reporting only
  std::string client_ip;   // reporting only
  std::string session_id;
  std::optional<Label> label;

  friend bool operator==(const Request&, const Request&) = default;
};

// Checks the Request invariants; returns a reason when violated.
std::optional<std::string> check_request(const Request& request);

struct Session {
  std::string session_id;
  std::vector<Request> requests;
  std::optional<Label> label;

  friend bool operator==(const Session&, const Session&) = default;
};

enum class LogFormat { jsonl, csv };

std::optional<LogFormat> parse_log_format(std::string_view text);

struct ParseResult {
  std::vector<Request> requests;
  std::size_t malformed = 0;
  std::optional<std::size_t> first_malformed_line;  // 1-based
};

// Blank lines are ignored. Throws Error(input) when the stream fails and
// Error(format) when more than half of the records are malformed.
ParseResult parse_log(std::istream& in, LogFormat format);
ParseResult parse_log_file(const std::string& path, LogFormat format);

std::string to_jsonl(const Request& request);
void write_jsonl(std::ostream& out, const std::vector<Request>& requests);

// Groups by session_id, stable-sorts each group by timestamp and orders the
// sessions by first-request timestamp (ties keep first-appearance order).
std::vector<Session> sessionize(const std::vector<Request>& requests);

std::vector<Request> flatten(const std::vector<Session>& sessions);

}  // namespace botgraph
