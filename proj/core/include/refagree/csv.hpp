#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace refagree::csv {

/// Reads one logical record (RFC 4180 quoting; quoted fields may span
/// lines). Returns nullopt at end of input. `line` is advanced by the
/// number of physical lines consumed.
std::optional<std::vector<std::string>> read_row(std::istream& in, std::size_t& line);

/// Quotes a field when it contains a delimiter, quote, or line break.
std::string escape(std::string_view field);

void write_row(std::ostream& out, const std::vector<std::string>& fields);

/// Shortest round-trip decimal representation.
std::string format_double(double value);

}  // namespace refagree::csv
