#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ifs {

// CSV cells use '.' decimals, 17 significant digits, no locale dependence.
std::string format_number(double v);

class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const std::vector<std::string>& header);
  void row(const std::vector<std::string>& cells);

 private:
  std::ostream& out_;
  size_t columns_;
};

std::string cell(double v);
std::string cell(long v);
std::string cell(int v);

}  // namespace ifs
