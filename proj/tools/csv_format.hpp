#pragma once

#include <cstdio>
#include <string>
#include <vector>

namespace fpt_cli {

// One CSV cell per value, %.10g, comma separated, LF line endings, no
// trailing delimiter.
inline std::string csv_cell(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

inline std::string csv_row(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ',';
    out += csv_cell(values[i]);
  }
  out += '\n';
  return out;
}

inline std::string csv_header(const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i > 0) out += ',';
    out += names[i];
  }
  out += '\n';
  return out;
}

}  // namespace fpt_cli
