#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace calderlab {

// Least-squares fits of measured norms against <n> = 2 + |n|.
struct GrowthFit {
  double c0 = 0.0;              // value ~ c0 + c1 log<n>
  double c1 = 0.0;
  double residual = 0.0;        // RMS residual of the log model
  double power_exponent = 0.0;  // slope of log value against log<n>
};

GrowthFit fit_growth(const std::vector<std::int64_t>& shifts, const std::vector<double>& values);

double shift_bracket(std::int64_t n);

struct NormGrowthTable {
  std::string op;
  double p = 2.0;
  std::vector<std::int64_t> shifts;
  std::vector<double> norms;
  GrowthFit fit;
};

std::string to_json(const NormGrowthTable& t);

}  // namespace calderlab
