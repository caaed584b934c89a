#include "krongraph/csv.hpp"

#include <charconv>
#include <cstdio>
#include <istream>

#include "krongraph/errors.hpp"

namespace krongraph::csv {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(current);
      current.clear();
    } else if (c != '\r') {
      current.push_back(c);
    }
  }
  fields.push_back(current);
  return fields;
}

std::vector<std::vector<std::string>> read_rows(std::istream& in) {
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    rows.push_back(split_line(line));
  }
  return rows;
}

double parse_double(const std::string& field, const std::string& where) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || field.empty()) {
    throw ValidationError("NonNumericValue",
                          "cannot parse '" + field + "' as a number (" + where + ")");
  }
  return value;
}

long parse_long(const std::string& field, const std::string& where) {
  long value = 0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || field.empty()) {
    throw ValidationError("NonNumericValue",
                          "cannot parse '" + field + "' as an integer (" + where + ")");
  }
  return value;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace krongraph::csv
