#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace krongraph::csv {

// Comma-delimited, UTF-8, LF or CRLF.  Fields are plain byte strings; no
// quoting is interpreted.
std::vector<std::string> split_line(const std::string& line);

// Reads every non-empty line of the stream into split rows.
std::vector<std::vector<std::string>> read_rows(std::istream& in);

// `where` feeds the error message ("file.csv line 12, column value").
double parse_double(const std::string& field, const std::string& where);
long parse_long(const std::string& field, const std::string& where);

// 17 significant digits so a write/read round trip is lossless.
std::string format_double(double v);

}  // namespace krongraph::csv
