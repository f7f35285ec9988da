#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "calderlab/grid.hpp"

namespace calderlab {

// 17 significant digits, '.' decimal separator, locale independent.
std::string fmt17(double v);

// Two-column CSV (x, value); complex functions get re/im columns.
void write_function_csv(std::ostream& os, const SampledFunction& f, bool complex_columns = false);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

// Throws if the table has no rows.
void write_table_csv(std::ostream& os, const Table& t);

}  // namespace calderlab
