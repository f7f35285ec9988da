#include "calderlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "calderlab/fft.hpp"

namespace calderlab {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

Grid::Grid(double half_width, std::size_t sample_count) : L_(half_width), N_(sample_count) {
  if (!(half_width > 0.0) || !std::isfinite(half_width))
    throw std::invalid_argument("grid half-width L must be positive, got " + std::to_string(half_width));
  if (!is_power_of_two(sample_count))
    throw std::invalid_argument("grid size N must be a power of two, got " + std::to_string(sample_count));
  if (sample_count < 8)
    throw std::invalid_argument("grid size N must be at least 8, got " + std::to_string(sample_count));
  h_ = 2.0 * L_ / static_cast<double>(N_);
}

Grid make_grid(double L, std::size_t N) { return Grid(L, N); }

SampledFunction::SampledFunction(const Grid& g, Side s) : grid(g), values(g.size()), side(s) {}

SampledFunction::SampledFunction(const Grid& g, std::vector<cplx> v, Side s)
    : grid(g), values(std::move(v)), side(s) {
  if (values.size() != grid.size())
    throw std::invalid_argument("sample count " + std::to_string(values.size()) +
                                " does not match grid size " + std::to_string(grid.size()));
}

// With x_j = -L + jh and xi_k = (k - N/2)/(2L) the kernel exp(-2 pi i x_j xi_k)
// factors as (-1)^(k - N/2) (-1)^j exp(-2 pi i jk/N); N/2 is even since N >= 8.
SampledFunction dft(const SampledFunction& f, Direction dir) {
  const Side want = dir == Direction::forward ? Side::space : Side::frequency;
  if (f.side != want)
    throw std::invalid_argument(dir == Direction::forward
                                    ? "forward dft expects a space-side function"
                                    : "inverse dft expects a frequency-side function");
  const std::size_t n = f.size();
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  std::vector<cplx> buf(n);
  for (std::size_t j = 0; j < n; ++j) buf[j] = (j & 1) ? -f.values[j] : f.values[j];
  if (dir == Direction::forward)
    fft::forward(buf.data(), buf.data(), n);
  else
    fft::backward(buf.data(), buf.data(), n);
  for (std::size_t k = 0; k < n; ++k) buf[k] *= (k & 1) ? -scale : scale;
  return SampledFunction(f.grid, std::move(buf),
                         dir == Direction::forward ? Side::frequency : Side::space);
}

double lp_norm(const SampledFunction& f, double p) {
  if (!(p > 0.0)) throw std::invalid_argument("lp_norm needs p > 0");
  if (f.side != Side::space) throw std::invalid_argument("lp_norm expects a space-side function");
  if (std::isinf(p)) {
    double m = 0.0;
    for (const auto& v : f.values) m = std::max(m, std::abs(v));
    return m;
  }
  double s = 0.0;
  if (p == 2.0) {
    for (const auto& v : f.values) s += std::norm(v);
    return std::sqrt(f.grid.spacing() * s);
  }
  for (const auto& v : f.values) s += std::pow(std::abs(v), p);
  return std::pow(f.grid.spacing() * s, 1.0 / p);
}

void require_same_grid(const SampledFunction& a, const SampledFunction& b, const char* what) {
  if (!(a.grid == b.grid)) throw std::invalid_argument(std::string(what) + ": grid mismatch");
  if (a.side != b.side) throw std::invalid_argument(std::string(what) + ": side mismatch");
}

SampledFunction operator+(const SampledFunction& a, const SampledFunction& b) {
  require_same_grid(a, b, "operator+");
  SampledFunction out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out.values[i] += b.values[i];
  return out;
}

SampledFunction operator-(const SampledFunction& a, const SampledFunction& b) {
  require_same_grid(a, b, "operator-");
  SampledFunction out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out.values[i] -= b.values[i];
  return out;
}

SampledFunction operator*(cplx s, const SampledFunction& a) {
  SampledFunction out = a;
  for (auto& v : out.values) v *= s;
  return out;
}

SampledFunction pointwise_product(const SampledFunction& a, const SampledFunction& b) {
  require_same_grid(a, b, "pointwise_product");
  SampledFunction out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out.values[i] *= b.values[i];
  return out;
}

cplx inner_product(const SampledFunction& f, const SampledFunction& g) {
  require_same_grid(f, g, "inner_product");
  cplx s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += f.values[i] * std::conj(g.values[i]);
  return f.grid.spacing() * s;
}

double DyadicInterval::length() const { return std::ldexp(1.0, scale); }
double DyadicInterval::left() const { return std::ldexp(static_cast<double>(index), scale); }
double DyadicInterval::right() const { return std::ldexp(static_cast<double>(index + 1), scale); }
double DyadicInterval::center() const {
  return std::ldexp(static_cast<double>(index) + 0.5, scale);
}
DyadicInterval DyadicInterval::parent() const { return {scale + 1, index >> 1}; }
DyadicInterval DyadicInterval::child(int which) const {
  return {scale - 1, 2 * index + (which ? 1 : 0)};
}

DyadicInterval shift(const DyadicInterval& I, std::int64_t n) { return {I.scale, I.index - n}; }

double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / t);
  const double b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

double lowpass_cutoff(double xi) { return smooth_step(2.0 - std::abs(xi)); }

double lp_psi_hat(int k, double xi) {
  return lowpass_cutoff(std::ldexp(xi, -k)) - lowpass_cutoff(std::ldexp(xi, 1 - k));
}

double lp_phi_hat(int k, double xi) { return lowpass_cutoff(std::ldexp(xi, 1 - k)); }

double FrequencyInterval::distance_to_origin() const {
  if (lo <= 0.0 && hi >= 0.0) return 0.0;
  return std::min(std::abs(lo), std::abs(hi));
}

namespace {

BumpFamily normalized_family(BumpType type, int scale, const Grid& grid, FrequencyInterval support,
                             double (*shape)(int, double), bool one_sided) {
  SampledFunction profile(grid, Side::frequency);
  double energy = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double xi = grid.xi(k);
    const double v = (one_sided && xi <= 0.0) ? 0.0 : shape(scale, xi);
    profile.values[k] = v;
    energy += v * v;
  }
  energy *= grid.spacing();
  if (!(energy > 0.0)) throw std::invalid_argument("bump has no samples on this grid");
  const double c = 1.0 / std::sqrt(energy);
  for (auto& v : profile.values) v *= c;
  return BumpFamily{type, scale, 0, std::move(profile), support, c};
}

double packet_psi_shape(int spatial_scale, double xi) { return lp_psi_hat(-spatial_scale, xi); }
double packet_phi_shape(int spatial_scale, double xi) {
  return lowpass_cutoff(std::ldexp(xi, spatial_scale));
}

}  // namespace

std::vector<BumpFamily> make_lp_family(int k_min, int k_max, const Grid& grid) {
  if (k_min > k_max) throw std::invalid_argument("make_lp_family: k_min > k_max");
  const double dxi = grid.frequency_spacing();
  const double nyq = grid.nyquist();
  if (std::ldexp(1.0, k_min - 1) < dxi || std::ldexp(1.0, k_max + 1) > nyq)
    throw std::invalid_argument("make_lp_family: scales [" + std::to_string(k_min) + ", " +
                                std::to_string(k_max) + "] not representable on this grid");
  std::vector<BumpFamily> out;
  for (int k = k_min; k <= k_max; ++k)
    out.push_back(normalized_family(BumpType::psi, k, grid,
                                    {std::ldexp(1.0, k - 1), std::ldexp(1.0, k + 1)}, lp_psi_hat,
                                    false));
  return out;
}

BumpFamily make_wave_packet(BumpType type, int spatial_scale, const Grid& grid) {
  const double top = std::ldexp(1.0, 1 - spatial_scale);
  if (top > grid.nyquist() || top < 4.0 * grid.frequency_spacing())
    throw std::invalid_argument("wave packet at spatial scale 2^" + std::to_string(spatial_scale) +
                                " not representable on this grid");
  if (type == BumpType::psi)
    return normalized_family(type, spatial_scale, grid, {0.25 * top, top}, packet_psi_shape, true);
  return normalized_family(type, spatial_scale, grid, {-top, top}, packet_phi_shape, false);
}

SampledFunction bump_at(const BumpFamily& family, const DyadicInterval& I) {
  const Grid& g = family.profile.grid;
  const double c = I.center();
  SampledFunction spec = family.profile;
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (spec.values[k] == 0.0) continue;
    const double turns = std::fmod(g.xi(k) * c, 1.0);
    spec.values[k] *= std::polar(1.0, -2.0 * M_PI * turns);
  }
  return dft(spec, Direction::inverse);
}

std::int64_t centre_offset(const DyadicInterval& I, const Grid& grid) {
  const double s = I.center() / grid.spacing();
  if (s != std::floor(s))
    throw std::invalid_argument("centre of a scale-" + std::to_string(I.scale) +
                                " interval is not a grid point");
  return static_cast<std::int64_t>(s);
}

std::vector<cplx> packet_correlations(const BumpFamily& family, const SampledFunction& f) {
  if (!(family.profile.grid == f.grid)) throw std::invalid_argument("packet_correlations: grid mismatch");
  if (f.side != Side::space) throw std::invalid_argument("packet_correlations expects a space-side function");
  const std::size_t N = f.size();
  std::vector<cplx> p = dft(family.profile, Direction::inverse).values;
  std::vector<cplx> F(f.values);
  fft::forward(p.data(), p.data(), N);
  fft::forward(F.data(), F.data(), N);
  for (std::size_t k = 0; k < N; ++k) F[k] *= std::conj(p[k]);
  fft::backward(F.data(), F.data(), N);
  const double scale = f.grid.spacing() / static_cast<double>(N);
  for (auto& v : F) v *= scale;
  return F;
}

FrequencyInterval measured_support(const SampledFunction& profile, double threshold) {
  if (profile.side != Side::frequency)
    throw std::invalid_argument("measured_support expects a frequency-side profile");
  double peak = 0.0;
  for (const auto& v : profile.values) peak = std::max(peak, std::abs(v));
  const double cut = threshold * peak;
  FrequencyInterval s{infinity, -infinity};
  for (std::size_t k = 0; k < profile.size(); ++k) {
    const double xi = profile.grid.xi(k);
    if (xi < 0.0 || std::abs(profile.values[k]) <= cut) continue;
    s.lo = std::min(s.lo, xi);
    s.hi = std::max(s.hi, xi);
  }
  if (s.lo > s.hi) return {0.0, 0.0};
  return s;
}

}  // namespace calderlab
