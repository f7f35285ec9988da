#include <cmath>

#include "calderlab/kernels.hpp"

namespace calderlab::kernels {
namespace {

SignCounts sign_counts(double offset, double slope, std::int64_t nodes) {
  SignCounts c;
  for (std::int64_t i = 0; i < nodes; ++i) {
    const double v = offset + (static_cast<double>(i) + 0.5) * slope;
    c.positive += v > 0.0;
    c.negative += v < 0.0;
  }
  return c;
}

void c1_sgn(const double* xi, const double* xi1, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = c1_sgn_point(xi[i], xi1[i]);
}

void c1_indicator(const double* xi, const double* xi1, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = c1_indicator_point(xi[i], xi1[i]);
}

void weighted_mac(const double* w_re, const double* w_im, std::complex<double> s,
                  const std::complex<double>* g, std::complex<double>* out, std::size_t n) {
  const double sr = s.real(), si = s.imag();
  for (std::size_t i = 0; i < n; ++i) {
    const double gr = g[i].real(), gi = g[i].imag();
    const double tr = sr * gr - si * gi;
    const double ti = sr * gi + si * gr;
    const double wr = w_re[i];
    double re = out[i].real(), im = out[i].imag();
    if (w_im) {
      const double wi = w_im[i];
      re += wr * tr - wi * ti;
      im += wr * ti + wi * tr;
    } else {
      re += wr * tr;
      im += wr * ti;
    }
    out[i] = {re, im};
  }
}

double pv_row(const double* a, double a0, const double* f, const double* w, std::size_t n) {
  double s = 0.0;
  for (std::size_t j = 0; j < n; ++j) s += (a[j] - a0) * f[j] * w[j];
  return s;
}

inline double pow_minus_100(double u) {
  // u^-100 = (u^-4) * (u^-32) * (u^-64) by repeated squaring.
  const double r = 1.0 / u;
  const double r2 = r * r, r4 = r2 * r2, r8 = r4 * r4, r16 = r8 * r8, r32 = r16 * r16;
  const double r64 = r32 * r32;
  return r64 * r32 * r4;
}

double decay_weighted_sum(const double* v, std::size_t n, double y0, double step, double lo,
                          double hi, double inv_len) {
  double s = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double y = y0 + static_cast<double>(j) * step;
    double d = lo - y;
    if (y - hi > d) d = y - hi;
    if (d < 0.0) d = 0.0;
    s += v[j] * pow_minus_100(1.0 + d * inv_len);
  }
  return s;
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable t{Isa::scalar, "scalar", sign_counts, c1_sgn, c1_indicator,
                             weighted_mac, pv_row,  decay_weighted_sum};
  return t;
}

}  // namespace calderlab::kernels
