#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace depositlag::csv {

// RFC 4180 field quoting: fields containing ',', '"', CR or LF are quoted.
std::string escape(std::string_view field);

void write_row(std::ostream& out, const std::vector<std::string>& fields);

// Reads all rows; quoted fields may span lines. Throws DataError on an
// unterminated quote.
std::vector<std::vector<std::string>> read_rows(std::istream& in);

std::string format_fixed(double value, int decimals);

}  // namespace depositlag::csv
