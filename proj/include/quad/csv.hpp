#ifndef QUAD_CSV_HPP
#define QUAD_CSV_HPP

#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

namespace quad::csv {

// Scientific notation, 16 significant digits, '.' decimal regardless of locale.
inline std::string number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15e", v);
  return buf;
}

inline std::string join(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ',';
    line += cells[i];
  }
  line += '\n';
  return line;
}

std::vector<std::string> split(std::string_view line, char sep = ',');

std::string trim(std::string_view s);

}  // namespace quad::csv

#endif  // QUAD_CSV_HPP
