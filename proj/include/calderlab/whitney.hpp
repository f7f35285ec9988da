#pragma once

#include <complex>
#include <string>
#include <vector>

#include "calderlab/symbols.hpp"

namespace calderlab {

enum class WindowPart { low_high, high_low, high_high };

const char* to_string(WindowPart part);
WindowPart parse_window_part(const std::string& s);  // accepts low_high / low-high etc.

// Period box constant: coefficients live on the lattice n / (Q 2^k).
inline constexpr int kPeriodBox = 8;

class WindowedSymbol {
 public:
  WindowedSymbol(WindowPart part, int scale, SymbolDescriptor base);

  WindowPart part() const { return part_; }
  int scale() const { return scale_; }
  const SymbolDescriptor& base() const { return base_; }
  // Full period T = Q 2^k; the box is [-T/2, T/2]^2.
  double period() const;
  bool classical() const { return part_ == WindowPart::high_low; }

  double window_first(double xi) const;
  double window_second(double xi1) const;
  double window(double xi, double xi1) const { return window_first(xi) * window_second(xi1); }
  double operator()(double xi, double xi1) const;

 private:
  WindowPart part_;
  int scale_;
  SymbolDescriptor base_;
};

// low_high: Phi_hat_{k-1}(xi) Psi_hat_k(xi1), so |xi| <= 2^(k-1) <= |xi1| and the
// line xi + xi1 = 0 only touches the support at its corners.  high_low is the
// mirror; high_high is Psi_hat_k(xi) Psi_hat_k(xi1).
WindowedSymbol build_windowed_symbol(WindowPart part, int k, const SymbolDescriptor& base);

struct DecayFit {
  double c_quad = 0.0;
  double exponent_n = 0.0;
  double exponent_n1 = 0.0;
};

class CoeffTable {
 public:
  CoeffTable(WindowPart part, int scale, int n_max, int resolution);

  WindowPart part() const { return part_; }
  int scale() const { return scale_; }
  int n_max() const { return n_max_; }
  int resolution() const { return resolution_; }
  bool aliasing_flag() const { return aliasing_; }
  void set_aliasing_flag(bool v) { aliasing_ = v; }
  const DecayFit& decay_fit() const { return fit_; }
  void set_decay_fit(const DecayFit& f) { fit_ = f; }

  std::complex<double>& at(int n, int n1);
  const std::complex<double>& at(int n, int n1) const;

  // sum C_{n,n1} exp(2 pi i (n xi + n1 xi1) / T).
  std::complex<double> synthesize(double xi, double xi1, double period) const;

 private:
  std::size_t offset(int n, int n1) const;

  WindowPart part_;
  int scale_;
  int n_max_;
  int resolution_;
  bool aliasing_ = false;
  DecayFit fit_{};
  std::vector<std::complex<double>> data_;
};

// C_{n,n1} = T^-2 int int W(xi, xi1) exp(-2 pi i (n xi + n1 xi1)/T) over the box,
// by an R x R midpoint/periodic rule.
CoeffTable compute_coeffs(const WindowedSymbol& ws, int n_max, int resolution);

enum class DecayShape { plain, tilde };

struct DecayReport {
  WindowPart part;
  int k;
  int n_max;
  int resolution;
  DecayShape shape;
  double c_quad;
  double exp_n;
  double exp_n1;
};

inline constexpr int kDecayPower = 4;

// <n> = 2 + |n|.
double japanese(int n);
double decay_bound(DecayShape shape, int n, int n1);
DecayReport verify_decay(const CoeffTable& table, DecayShape shape);
std::string to_json(const DecayReport& r);

// Least-squares slope of log|C| against log<n> over lo <= |n| <= n_max
// along the n1 = 0 (axis 0) or n = 0 (axis 1) slice.  NaN if fewer than two
// nonzero samples.
double fitted_exponent(const CoeffTable& table, int axis, int lo = 8);

// max over |n - n1| > band and min(<n>, <n1>) >= min_bracket of
// |C| / (<n>^-4 <n1>^-4 c_quad).
double off_band_ratio(const CoeffTable& table, double c_quad, int band = 4, int min_bracket = 8);

double verify_scale_uniformity(const SymbolDescriptor& base, WindowPart part,
                               const std::vector<int>& k_list, int n_max);

void write_csv(std::ostream& os, const CoeffTable& table);

}  // namespace calderlab
