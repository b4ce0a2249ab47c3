#include "ifs/csv.hpp"

#include <cstdio>
#include <stdexcept>

namespace ifs {

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(std::ostream& out, const std::vector<std::string>& header)
    : out_(out), columns_(header.size()) {
  row(header);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) {
    throw std::logic_error("csv row width mismatch");
  }
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    out_ << cells[i];
  }
  out_ << '\n';
}

std::string cell(double v) { return format_number(v); }
std::string cell(long v) { return std::to_string(v); }
std::string cell(int v) { return std::to_string(v); }

}  // namespace ifs
