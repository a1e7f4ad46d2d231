#pragma once

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iostream>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>
#include <variant>
#include <vector>

#include "pathloss/error.hpp"

namespace pathloss {

using Cell = std::variant<double, std::string>;
using Row = std::vector<Cell>;

inline constexpr std::string_view kPdfHeader = "l_db,pdf,method,est_error";
inline constexpr std::string_view kCdfHeader = "l_db,cdf";
inline constexpr std::string_view kSampleHeader = "x_m,y_m,r_m,w_db,psi_db,l_db";
inline constexpr std::string_view kValidateHeader = "bin_center_db,empirical_pdf,analytic_pdf";

/// 9 significant digits, shortest of fixed/scientific, locale independent.
inline std::string format_number(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 9);
  return std::string(buf, res.ptr);
}

inline void write_table(std::ostream& os, const std::vector<Row>& rows, std::string_view header) {
  const auto columns = static_cast<std::size_t>(std::count(header.begin(), header.end(), ',')) + 1;
  os << header << '\n';
  std::string line;
  for (const auto& row : rows) {
    if (row.size() != columns) throw std::invalid_argument("write_table: row width does not match header");
    line.clear();
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) line += ',';
      if (const auto* d = std::get_if<double>(&row[i])) {
        line += format_number(*d);
      } else {
        line += std::get<std::string>(row[i]);
      }
    }
    line += '\n';
    os << line;
  }
}

/// Writes to `path`, or to standard output when path is empty or "-".
inline void write_table(const std::vector<Row>& rows, std::string_view header, const std::string& path,
                        std::ostream& stdout_stream = std::cout) {
  if (path.empty() || path == "-") {
    write_table(stdout_stream, rows, header);
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw config_error("cannot open output file '" + path + "' for writing");
  write_table(file, rows, header);
  file.flush();
  if (!file) throw config_error("failed writing output file '" + path + "'");
}

}  // namespace pathloss
