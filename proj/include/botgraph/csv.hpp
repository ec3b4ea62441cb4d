#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace botgraph {

// Reads one RFC-4180 record. Quoted fields may span lines; `lines_read` is
// the number of physical lines consumed and `well_formed` turns false on an
// unterminated quote or text after a closing quote. Returns false at EOF.
bool read_csv_record(std::istream& in, std::vector<std::string>& fields, std::size_t& lines_read,
                     bool& well_formed);

// Quotes the field when it contains a comma, quote or line break.
std::string csv_field(std::string_view value);

}  // namespace botgraph
