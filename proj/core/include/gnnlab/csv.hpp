#pragma once

#include <string>
#include <vector>

namespace gnnlab {

// CSV dialect: comma separator, '.' decimal point, header row, LF endings.

std::string csv_double(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string serialize() const;
  int column(const std::string& name) const;  // -1 when absent
};

CsvTable parse_csv(const std::string& text);

}  // namespace gnnlab
