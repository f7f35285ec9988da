#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

namespace calderlab {

using cplx = std::complex<double>;

// Uniform periodic sampling of [-L, L): x_j = -L + j*h, h = 2L/N.
// The frequency side uses the centered lattice xi_k = (k - N/2) / (2L).
class Grid {
 public:
  Grid(double half_width, std::size_t sample_count);

  double half_width() const { return L_; }
  std::size_t size() const { return N_; }
  double spacing() const { return h_; }
  double frequency_spacing() const { return 1.0 / (2.0 * L_); }
  double nyquist() const { return 0.5 * static_cast<double>(N_) * frequency_spacing(); }

  double x(std::size_t j) const { return -L_ + static_cast<double>(j) * h_; }
  double xi(std::size_t k) const {
    return (static_cast<double>(k) - static_cast<double>(N_ / 2)) * frequency_spacing();
  }

  bool operator==(const Grid& o) const { return L_ == o.L_ && N_ == o.N_; }

 private:
  double L_;
  std::size_t N_;
  double h_;
};

Grid make_grid(double L, std::size_t N);

bool is_power_of_two(std::size_t n);

enum class Side { space, frequency };
enum class Direction { forward, inverse };

// Frequency-side values are unitary DFT coefficients on the centered lattice,
// so sqrt(h * sum |F_k|^2) is the L2 norm of the space function and
// h * sqrt(N) * F_k approximates the continuous transform at xi_k.
struct SampledFunction {
  Grid grid;
  std::vector<cplx> values;
  Side side = Side::space;

  SampledFunction(const Grid& g, Side s = Side::space);
  SampledFunction(const Grid& g, std::vector<cplx> v, Side s = Side::space);

  template <class F>
  static SampledFunction from_space(const Grid& g, F&& fn) {
    SampledFunction out(g);
    for (std::size_t j = 0; j < g.size(); ++j) out.values[j] = fn(g.x(j));
    return out;
  }
  template <class F>
  static SampledFunction from_frequency(const Grid& g, F&& fn) {
    SampledFunction out(g, Side::frequency);
    for (std::size_t k = 0; k < g.size(); ++k) out.values[k] = fn(g.xi(k));
    return out;
  }

  std::size_t size() const { return values.size(); }
  cplx& operator[](std::size_t i) { return values[i]; }
  const cplx& operator[](std::size_t i) const { return values[i]; }
};

SampledFunction dft(const SampledFunction& f, Direction dir);

inline constexpr double infinity = std::numeric_limits<double>::infinity();

double lp_norm(const SampledFunction& f, double p);

// Pointwise algebra used by several modules and by tests.
SampledFunction operator+(const SampledFunction& a, const SampledFunction& b);
SampledFunction operator-(const SampledFunction& a, const SampledFunction& b);
SampledFunction operator*(cplx s, const SampledFunction& a);
SampledFunction pointwise_product(const SampledFunction& a, const SampledFunction& b);
// h * sum f * conj(g)
cplx inner_product(const SampledFunction& f, const SampledFunction& g);
void require_same_grid(const SampledFunction& a, const SampledFunction& b, const char* what);

// [2^k n, 2^k (n+1)).
struct DyadicInterval {
  int scale = 0;
  std::int64_t index = 0;

  double length() const;
  double left() const;
  double right() const;
  double center() const;
  bool contains(double x) const { return left() <= x && x < right(); }
  DyadicInterval parent() const;
  DyadicInterval child(int which) const;

  bool operator==(const DyadicInterval& o) const = default;
  auto operator<=>(const DyadicInterval& o) const = default;
};

// I_n: same scale, index shifted down by n (n lengths of |I| to the left).
DyadicInterval shift(const DyadicInterval& I, std::int64_t n);

// --- Littlewood-Paley cutoffs -------------------------------------------

// C-infinity step: 0 for t <= 0, 1 for t >= 1.
double smooth_step(double t);
// 1 on |xi| <= 1, 0 on |xi| >= 2.
double lowpass_cutoff(double xi);
// chi(xi/2^k) - chi(xi/2^(k-1)); supported on 2^(k-1) <= |xi| <= 2^(k+1).
double lp_psi_hat(int k, double xi);
// sum_{j<k} psi_hat_j = chi(xi/2^(k-1)); supported on |xi| <= 2^k.
double lp_phi_hat(int k, double xi);

enum class BumpType { phi, psi };

struct FrequencyInterval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
  double distance_to_origin() const;
};

struct BumpFamily {
  BumpType bump_type = BumpType::psi;
  int scale = 0;
  std::int64_t shift = 0;
  SampledFunction profile;         // frequency side, unit L2 norm
  FrequencyInterval fourier_support;
  double normalization = 1.0;      // profile = normalization * raw shape
};

// One frequency band per k in [k_min, k_max]; profile is the L2-normalized psi_hat_k.
std::vector<BumpFamily> make_lp_family(int k_min, int k_max, const Grid& grid);

// Wave packet adapted to spatial intervals of length 2^k centred at 0.
// psi: one-sided band psi_hat_{-k}(xi) for xi > 0.  phi: lowpass chi(2^k xi).
BumpFamily make_wave_packet(BumpType type, int spatial_scale, const Grid& grid);

// Space-side bump translated to the centre of I (phase modulation in frequency).
SampledFunction bump_at(const BumpFamily& family, const DyadicInterval& I);

// Sample offset s of the centre of I, so that a bump centred at c_I is the
// packet centred at 0 shifted by s samples.  Throws if c_I is not a grid point.
std::int64_t centre_offset(const DyadicInterval& I, const Grid& grid);

// <f, Phi_J> for every grid translate of the family's packet: entry
// (s mod N) holds h * sum_j f_j conj(p[j - s]).  Circular, via FFT.
std::vector<cplx> packet_correlations(const BumpFamily& family, const SampledFunction& f);

// Measured support on the half-line xi >= 0 (profiles here are even or
// one-sided): hull of the samples with |value| > threshold * max.
FrequencyInterval measured_support(const SampledFunction& profile, double threshold = 0.0);

}  // namespace calderlab
