#include "calderlab/growth.hpp"

#include <cmath>
#include <stdexcept>
#include <tuple>

#include "json.hpp"

namespace calderlab {

double shift_bracket(std::int64_t n) { return 2.0 + std::abs(static_cast<double>(n)); }

namespace {

// Returns (intercept, slope) of y against x.
std::pair<double, double> linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double den = n * sxx - sx * sx;
  if (den == 0.0) return {sy / n, 0.0};
  const double slope = (n * sxy - sx * sy) / den;
  return {(sy - slope * sx) / n, slope};
}

}  // namespace

GrowthFit fit_growth(const std::vector<std::int64_t>& shifts, const std::vector<double>& values) {
  if (shifts.size() != values.size() || shifts.empty())
    throw std::invalid_argument("fit_growth: need matching, nonempty shift and value lists");
  std::vector<double> lx, v(values), lv;
  for (std::size_t i = 0; i < shifts.size(); ++i) {
    lx.push_back(std::log(shift_bracket(shifts[i])));
    lv.push_back(values[i] > 0.0 ? std::log(values[i]) : -745.0);
  }
  GrowthFit fit;
  std::tie(fit.c0, fit.c1) = linear_fit(lx, v);
  double rss = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double r = v[i] - (fit.c0 + fit.c1 * lx[i]);
    rss += r * r;
  }
  fit.residual = std::sqrt(rss / static_cast<double>(lx.size()));
  fit.power_exponent = linear_fit(lx, lv).second;
  return fit;
}

std::string to_json(const NormGrowthTable& t) {
  nlohmann::ordered_json j;
  j["op"] = t.op;
  j["p"] = t.p;
  j["shifts"] = t.shifts;
  j["norms"] = t.norms;
  j["fit"] = {{"c0", t.fit.c0},
              {"c1", t.fit.c1},
              {"residual", t.fit.residual},
              {"power_exponent", t.fit.power_exponent}};
  return j.dump(2);
}

}  // namespace calderlab
