#include "botgraph/csv.hpp"

#include <istream>

namespace botgraph {

bool read_csv_record(std::istream& in, std::vector<std::string>& fields, std::size_t& lines_read,
                     bool& well_formed) {
  fields.clear();
  lines_read = 0;
  well_formed = true;
  std::string line;
  if (!std::getline(in, line)) return false;
  ++lines_read;

  std::string field;
  bool quoted = false;
  bool field_was_quoted = false;
  std::size_t i = 0;
  while (true) {
    if (i >= line.size()) {
      if (quoted) {
        std::string next;
        if (!std::getline(in, next)) {
          well_formed = false;
          break;
        }
        ++lines_read;
        field += '\n';
        line = std::move(next);
        i = 0;
        continue;
      }
      break;
    }
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          i += 2;
          continue;
        }
        quoted = false;
        ++i;
        continue;
      }
      field += c;
      ++i;
      continue;
    }
    if (c == '"' && field.empty() && !field_was_quoted) {
      quoted = true;
      field_was_quoted = true;
      ++i;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
      field_was_quoted = false;
      ++i;
    } else if (c == '\r' && i + 1 == line.size()) {
      ++i;
    } else {
      if (field_was_quoted) well_formed = false;
      field += c;
      ++i;
    }
  }
  fields.push_back(std::move(field));
  return true;
}

std::string csv_field(std::string_view value) {
  if (value.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(value);
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace botgraph
