#include "calderlab/io.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace calderlab {

std::string fmt17(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

void write_function_csv(std::ostream& os, const SampledFunction& f, bool complex_columns) {
  const bool freq = f.side == Side::frequency;
  os << (freq ? "xi" : "x") << (complex_columns ? ",re,im\n" : ",value\n");
  for (std::size_t j = 0; j < f.size(); ++j) {
    os << fmt17(freq ? f.grid.xi(j) : f.grid.x(j)) << ',' << fmt17(f.values[j].real());
    if (complex_columns) os << ',' << fmt17(f.values[j].imag());
    os << '\n';
  }
}

void write_table_csv(std::ostream& os, const Table& t) {
  if (t.rows.empty()) throw std::invalid_argument("refusing to write an empty table");
  for (std::size_t i = 0; i < t.header.size(); ++i) os << (i ? "," : "") << t.header[i];
  os << '\n';
  for (const auto& row : t.rows) {
    if (row.size() != t.header.size()) throw std::invalid_argument("table row width mismatch");
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << fmt17(row[i]);
    os << '\n';
  }
}

}  // namespace calderlab
