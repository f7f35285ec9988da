#include "calderlab/whitney.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "calderlab/fft.hpp"
#include "calderlab/grid.hpp"
#include "calderlab/io.hpp"
#include "json.hpp"

namespace calderlab {

const char* to_string(WindowPart part) {
  switch (part) {
    case WindowPart::low_high: return "low_high";
    case WindowPart::high_low: return "high_low";
    case WindowPart::high_high: return "high_high";
  }
  return "?";
}

WindowPart parse_window_part(const std::string& s) {
  std::string t = s;
  std::replace(t.begin(), t.end(), '-', '_');
  if (t == "low_high") return WindowPart::low_high;
  if (t == "high_low") return WindowPart::high_low;
  if (t == "high_high") return WindowPart::high_high;
  throw std::invalid_argument("unknown window part '" + s + "'");
}

WindowedSymbol::WindowedSymbol(WindowPart part, int scale, SymbolDescriptor base)
    : part_(part), scale_(scale), base_(std::move(base)) {}

double WindowedSymbol::period() const { return std::ldexp(static_cast<double>(kPeriodBox), scale_); }

double WindowedSymbol::window_first(double xi) const {
  return part_ == WindowPart::low_high ? lp_phi_hat(scale_ - 1, xi) : lp_psi_hat(scale_, xi);
}

double WindowedSymbol::window_second(double xi1) const {
  return part_ == WindowPart::high_low ? lp_phi_hat(scale_ - 1, xi1) : lp_psi_hat(scale_, xi1);
}

double WindowedSymbol::operator()(double xi, double xi1) const {
  const double w = window(xi, xi1);
  return w == 0.0 ? 0.0 : w * base_.real_value(xi, xi1);
}

WindowedSymbol build_windowed_symbol(WindowPart part, int k, const SymbolDescriptor& base) {
  switch (base.kind()) {
    case SymbolKind::c1_sgn:
    case SymbolKind::c1_indicator:
    case SymbolKind::gen22_product:
    case SymbolKind::double_commutator:
    case SymbolKind::constant:
      break;
    default:
      throw std::invalid_argument(std::string("build_windowed_symbol: unsupported base kind ") +
                                  to_string(base.kind()));
  }
  if (std::abs(k) > 500) throw std::invalid_argument("build_windowed_symbol: scale out of range");
  return WindowedSymbol(part, k, base);
}

CoeffTable::CoeffTable(WindowPart part, int scale, int n_max, int resolution)
    : part_(part),
      scale_(scale),
      n_max_(n_max),
      resolution_(resolution),
      data_(static_cast<std::size_t>(2 * n_max + 1) * static_cast<std::size_t>(2 * n_max + 1)) {
  if (n_max < 0) throw std::invalid_argument("CoeffTable: n_max must be nonnegative");
}

std::size_t CoeffTable::offset(int n, int n1) const {
  if (std::abs(n) > n_max_ || std::abs(n1) > n_max_)
    throw std::out_of_range("CoeffTable index outside |n|, |n1| <= n_max");
  const std::size_t w = static_cast<std::size_t>(2 * n_max_ + 1);
  return static_cast<std::size_t>(n + n_max_) * w + static_cast<std::size_t>(n1 + n_max_);
}

std::complex<double>& CoeffTable::at(int n, int n1) { return data_[offset(n, n1)]; }
const std::complex<double>& CoeffTable::at(int n, int n1) const { return data_[offset(n, n1)]; }

std::complex<double> CoeffTable::synthesize(double xi, double xi1, double period) const {
  std::complex<double> s = 0.0;
  for (int n = -n_max_; n <= n_max_; ++n) {
    const std::complex<double> e = std::polar(1.0, 2.0 * M_PI * std::fmod(n * xi / period, 1.0));
    std::complex<double> row = 0.0;
    for (int n1 = -n_max_; n1 <= n_max_; ++n1)
      row += at(n, n1) * std::polar(1.0, 2.0 * M_PI * std::fmod(n1 * xi1 / period, 1.0));
    s += e * row;
  }
  return s;
}

// Sample points xi_j = -T/2 + jT/R, so exp(-2 pi i n xi_j / T) = (-1)^n exp(-2 pi i nj/R)
// and C_{n,n1} = (-1)^(n+n1) R^-2 DFT2[n mod R, n1 mod R].  Rows whose first
// window factor vanishes are skipped; only the |n1| <= n_max columns are kept.
CoeffTable compute_coeffs(const WindowedSymbol& ws, int n_max, int resolution) {
  if (resolution <= 0 || !is_power_of_two(static_cast<std::size_t>(resolution)))
    throw std::invalid_argument("compute_coeffs: resolution must be a power of two");
  if (n_max < 1) throw std::invalid_argument("compute_coeffs: n_max must be positive");
  if (resolution < 8 * n_max)
    throw std::invalid_argument("compute_coeffs: insufficient resolution (need R >= 8 n_max)");
  const std::size_t R = static_cast<std::size_t>(resolution);
  const double T = ws.period();
  const double step = T / static_cast<double>(R);
  const int width = 2 * n_max + 1;

  std::vector<double> grid(R), w2(R);
  for (std::size_t l = 0; l < R; ++l) {
    grid[l] = -0.5 * T + static_cast<double>(l) * step;
    w2[l] = ws.window_second(grid[l]);
  }

  // cols[(n1 + n_max) * R + j]: row transform of row j at n1.
  std::vector<std::complex<double>> cols(static_cast<std::size_t>(width) * R);
  std::vector<double> base_row(R);
  std::vector<std::complex<double>> row(R);
  for (std::size_t j = 0; j < R; ++j) {
    const double w1 = ws.window_first(grid[j]);
    if (w1 == 0.0) continue;
    ws.base().real_row(grid[j], grid, base_row);
    for (std::size_t l = 0; l < R; ++l) row[l] = w1 * w2[l] * base_row[l];
    fft::forward(row.data(), row.data(), R);
    for (int n1 = -n_max; n1 <= n_max; ++n1) {
      const std::size_t src = static_cast<std::size_t>((n1 % resolution + resolution) % resolution);
      cols[static_cast<std::size_t>(n1 + n_max) * R + j] = row[src];
    }
  }

  CoeffTable table(ws.part(), ws.scale(), n_max, resolution);
  const double norm = 1.0 / (static_cast<double>(R) * static_cast<double>(R));
  std::vector<std::complex<double>> col(R);
  for (int n1 = -n_max; n1 <= n_max; ++n1) {
    std::copy_n(cols.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(n1 + n_max) * R),
                R, col.begin());
    fft::forward(col.data(), col.data(), R);
    for (int n = -n_max; n <= n_max; ++n) {
      const std::size_t src = static_cast<std::size_t>((n % resolution + resolution) % resolution);
      const double sign = ((n + n1) & 1) ? -norm : norm;
      table.at(n, n1) = sign * col[src];
    }
  }

  bool alias = false;
  for (int i = -n_max; i <= n_max && !alias; ++i)
    alias = std::abs(table.at(n_max, i)) > 1e-8 || std::abs(table.at(-n_max, i)) > 1e-8 ||
            std::abs(table.at(i, n_max)) > 1e-8 || std::abs(table.at(i, -n_max)) > 1e-8;
  table.set_aliasing_flag(alias);
  const DecayReport r = verify_decay(table, DecayShape::plain);
  table.set_decay_fit({r.c_quad, r.exp_n, r.exp_n1});
  return table;
}

double japanese(int n) { return 2.0 + std::abs(static_cast<double>(n)); }

double decay_bound(DecayShape shape, int n, int n1) {
  const double bn = japanese(n), bn1 = japanese(n1);
  if (shape == DecayShape::plain) return std::pow(bn, -2.0) * std::pow(bn1, -kDecayPower);
  return std::pow(bn, -2.0) * std::pow(japanese(n - n1), -kDecayPower) +
         std::pow(bn, -kDecayPower) * std::pow(bn1, -kDecayPower);
}

double fitted_exponent(const CoeffTable& table, int axis, int lo) {
  const int n_max = table.n_max();
  double peak = 0.0;
  for (int n = -n_max; n <= n_max; ++n)
    peak = std::max(peak, std::abs(axis == 0 ? table.at(n, 0) : table.at(0, n)));
  // Samples at the rounding floor carry no decay information.
  const double floor = 1e-14 * peak;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (int n = -n_max; n <= n_max; ++n) {
    if (std::abs(n) < lo) continue;
    const double v = std::abs(axis == 0 ? table.at(n, 0) : table.at(0, n));
    if (!(v > floor)) continue;
    const double x = std::log(japanese(n)), y = std::log(v);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count < 2) return std::numeric_limits<double>::quiet_NaN();
  const double den = count * sxx - sx * sx;
  if (den == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return (count * sxy - sx * sy) / den;
}

DecayReport verify_decay(const CoeffTable& table, DecayShape shape) {
  const int n_max = table.n_max();
  double c = 0.0;
  for (int n = -n_max; n <= n_max; ++n)
    for (int n1 = -n_max; n1 <= n_max; ++n1)
      c = std::max(c, std::abs(table.at(n, n1)) / decay_bound(shape, n, n1));
  return DecayReport{table.part(),          table.scale(), n_max, table.resolution(), shape, c,
                     fitted_exponent(table, 0), fitted_exponent(table, 1)};
}

namespace {

nlohmann::json number_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

}  // namespace

std::string to_json(const DecayReport& r) {
  nlohmann::ordered_json j;
  j["part"] = to_string(r.part);
  j["k"] = r.k;
  j["n_max"] = r.n_max;
  j["resolution"] = r.resolution;
  j["bound"] = r.shape == DecayShape::plain ? "plain" : "tilde";
  j["C_quad"] = number_or_null(r.c_quad);
  j["exp_n"] = number_or_null(r.exp_n);
  j["exp_n1"] = number_or_null(r.exp_n1);
  return j.dump(2);
}

double off_band_ratio(const CoeffTable& table, double c_quad, int band, int min_bracket) {
  if (!(c_quad > 0.0)) return 0.0;
  const int n_max = table.n_max();
  double worst = 0.0;
  for (int n = -n_max; n <= n_max; ++n)
    for (int n1 = -n_max; n1 <= n_max; ++n1) {
      if (std::abs(n - n1) <= band) continue;
      if (std::min(japanese(n), japanese(n1)) < min_bracket) continue;
      const double env = std::pow(japanese(n), -kDecayPower) * std::pow(japanese(n1), -kDecayPower);
      worst = std::max(worst, std::abs(table.at(n, n1)) / (env * c_quad));
    }
  return worst;
}

double verify_scale_uniformity(const SymbolDescriptor& base, WindowPart part,
                               const std::vector<int>& k_list, int n_max) {
  int R = 1024;
  while (R < 8 * n_max) R *= 2;
  const CoeffTable ref = compute_coeffs(build_windowed_symbol(part, 0, base), n_max, R);
  double worst = 0.0;
  for (int k : k_list) {
    if (k == 0) continue;
    const CoeffTable t = compute_coeffs(build_windowed_symbol(part, k, base), n_max, R);
    for (int n = -n_max; n <= n_max; ++n)
      for (int n1 = -n_max; n1 <= n_max; ++n1)
        worst = std::max(worst, std::abs(t.at(n, n1) - ref.at(n, n1)));
  }
  return worst;
}

void write_csv(std::ostream& os, const CoeffTable& table) {
  os << "part,k,n,n1,re,im,abs\n";
  const int n_max = table.n_max();
  for (int n = -n_max; n <= n_max; ++n)
    for (int n1 = -n_max; n1 <= n_max; ++n1) {
      const auto c = table.at(n, n1);
      os << to_string(table.part()) << ',' << table.scale() << ',' << n << ',' << n1 << ','
         << fmt17(c.real()) << ',' << fmt17(c.imag()) << ',' << fmt17(std::abs(c)) << '\n';
    }
}

}  // namespace calderlab
