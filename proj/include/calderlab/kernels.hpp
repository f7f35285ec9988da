#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>

namespace calderlab::kernels {

enum class Isa { scalar, avx2 };

struct SignCounts {
  std::int64_t positive = 0;
  std::int64_t negative = 0;
};

// One table per instruction set. Every entry has a scalar reference; the
// vector variants must return bit-identical results except where noted.
struct KernelTable {
  Isa isa;
  const char* name;

  // Signs of offset + (i + 1/2) * slope for i in [0, nodes).
  SignCounts (*sign_counts)(double offset, double slope, std::int64_t nodes);

  // out[i] = closed-form symbol at (xi[i], xi1[i]).
  void (*c1_sgn)(const double* xi, const double* xi1, double* out, std::size_t n);
  void (*c1_indicator)(const double* xi, const double* xi1, double* out, std::size_t n);

  // out[i] += (w_re[i] + i w_im[i]) * (s * g[i]); w_im may be null (real weights).
  void (*weighted_mac)(const double* w_re, const double* w_im, std::complex<double> s,
                       const std::complex<double>* g, std::complex<double>* out, std::size_t n);

  // sum_j (a[j] - a0) * f[j] * w[j].  Summation order differs between tables.
  double (*pv_row)(const double* a, double a0, const double* f, const double* w, std::size_t n);

  // sum_j v[j] * (1 + d_j * inv_len)^-100 with d_j the distance from
  // y0 + j*step to [lo, hi].  Summation order differs between tables.
  double (*decay_weighted_sum)(const double* v, std::size_t n, double y0, double step, double lo,
                               double hi, double inv_len);
};

const KernelTable& scalar_table();
// Null when not compiled in or not supported by this CPU.
const KernelTable* avx2_table();

// Table in use. Honours force_isa() and the CALDERLAB_FORCE_SCALAR env var.
const KernelTable& active();
void force_isa(std::optional<Isa> isa);
bool cpu_supports(Isa isa);

inline double sgn(double v) { return static_cast<double>((v > 0.0) - (v < 0.0)); }
inline double heaviside(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? 0.0 : 0.5); }

// Closed form of int_0^1 sgn(xi + t xi1) dt.
inline double c1_sgn_point(double xi, double xi1) {
  if (xi1 == 0.0) return sgn(xi);
  const double a = -xi / xi1;
  if (a > 0.0 && a < 1.0) return sgn(xi) * a + sgn(xi + xi1) * (1.0 - a);
  return sgn(xi + 0.5 * xi1);
}

// Closed form of int_0^1 1_{>0}(xi + t xi1) dt with the value 1/2 at 0.
inline double c1_indicator_point(double xi, double xi1) {
  if (xi1 == 0.0) return heaviside(xi);
  const double a = -xi / xi1;
  if (a > 0.0 && a < 1.0) return xi > 0.0 ? a : 1.0 - a;
  return heaviside(xi + 0.5 * xi1);
}

}  // namespace calderlab::kernels
