#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

#include "calderlab/fft.hpp"
#include "calderlab/operators.hpp"

namespace calderlab {

int ModelOperatorSpec::psi_count() const {
  return (type1 == BumpType::psi) + (type2 == BumpType::psi) + (type3 == BumpType::psi);
}

namespace {

bool inside(const DyadicInterval& I, const Grid& g) {
  return I.left() >= -g.half_width() && I.right() <= g.half_width();
}

std::size_t wrap(std::int64_t s, std::size_t N) {
  const auto n = static_cast<std::int64_t>(N);
  return static_cast<std::size_t>(((s % n) + n) % n);
}

// Raw FFT of the packet centred at x = 0.
std::vector<cplx> packet_spectrum(BumpType type, int scale, const Grid& grid) {
  const BumpFamily fam = make_wave_packet(type, scale, grid);
  std::vector<cplx> p = dft(fam.profile, Direction::inverse).values;
  fft::forward(p.data(), p.data(), p.size());
  return p;
}

}  // namespace

void validate(const ModelOperatorSpec& spec, const Grid& grid) {
  if (spec.psi_count() < 2)
    throw std::invalid_argument("model operator needs at least two psi-type bump families");
  std::vector<DyadicInterval> sorted = spec.intervals;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("model operator interval collection has duplicates");
  for (const auto& I : spec.intervals) {
    for (const auto& J : {I, shift(I, spec.shift1), shift(I, spec.shift2)}) {
      if (!inside(J, grid))
        throw std::invalid_argument("interval [" + std::to_string(J.left()) + ", " +
                                    std::to_string(J.right()) + ") lies outside the domain");
      centre_offset(J, grid);
    }
    for (BumpType t : {spec.type1, spec.type2, spec.type3}) make_wave_packet(t, I.scale, grid);
  }
}

SampledFunction model_bump(BumpType type, const DyadicInterval& I, const Grid& grid) {
  return bump_at(make_wave_packet(type, I.scale, grid), I);
}

// <f, Phi_J> = h sum_j f_j conj(p[j - s_J]) is a circular cross-correlation
// evaluated at s_J; the synthesis sum_J w_J p3[j - s_J] is a circular convolution.
SampledFunction apply_model_operator(const ModelOperatorSpec& spec, const SampledFunction& f,
                                     const SampledFunction& g) {
  require_same_grid(f, g, "apply_model_operator");
  if (f.side != Side::space) throw std::invalid_argument("apply_model_operator expects space-side inputs");
  const Grid& grid = f.grid;
  validate(spec, grid);
  const std::size_t N = grid.size();
  const double h = grid.spacing();
  const double invN = 1.0 / static_cast<double>(N);

  std::map<int, std::vector<DyadicInterval>> by_scale;
  for (const auto& I : spec.intervals) by_scale[I.scale].push_back(I);

  std::vector<cplx> Fr(f.values), Gr(g.values);
  fft::forward(Fr.data(), Fr.data(), N);
  fft::forward(Gr.data(), Gr.data(), N);

  std::vector<cplx> total(N, 0.0), corr_f(N), corr_g(N), weights(N);
  for (const auto& [scale, intervals] : by_scale) {
    const std::vector<cplx> P1 = packet_spectrum(spec.type1, scale, grid);
    const std::vector<cplx> P2 = packet_spectrum(spec.type2, scale, grid);
    const std::vector<cplx> P3 = packet_spectrum(spec.type3, scale, grid);
    for (std::size_t k = 0; k < N; ++k) {
      corr_f[k] = Fr[k] * std::conj(P1[k]);
      corr_g[k] = Gr[k] * std::conj(P2[k]);
    }
    fft::backward(corr_f.data(), corr_f.data(), N);
    fft::backward(corr_g.data(), corr_g.data(), N);

    std::fill(weights.begin(), weights.end(), cplx(0.0));
    const double amp = 1.0 / std::sqrt(std::ldexp(1.0, scale));
    for (const auto& I : intervals) {
      const cplx cf = h * invN * corr_f[wrap(centre_offset(shift(I, spec.shift1), grid), N)];
      const cplx cg = h * invN * corr_g[wrap(centre_offset(shift(I, spec.shift2), grid), N)];
      weights[wrap(centre_offset(I, grid), N)] += amp * cf * cg;
    }
    fft::forward(weights.data(), weights.data(), N);
    for (std::size_t k = 0; k < N; ++k) total[k] += weights[k] * P3[k];
  }
  fft::backward(total.data(), total.data(), N);
  for (auto& v : total) v *= invN;
  return SampledFunction(grid, std::move(total));
}

std::vector<DyadicInterval> admissible_intervals(const Grid& grid, int k_lo, int k_hi,
                                                 std::int64_t shift1, std::int64_t shift2) {
  std::vector<DyadicInterval> out;
  const double L = grid.half_width();
  for (int k = k_lo; k <= k_hi; ++k) {
    const double len = std::ldexp(1.0, k);
    const auto lo = static_cast<std::int64_t>(std::ceil(-L / len));
    const auto hi = static_cast<std::int64_t>(std::floor(L / len)) - 1;
    for (std::int64_t n = lo; n <= hi; ++n) {
      const DyadicInterval I{k, n};
      if (inside(shift(I, shift1), grid) && inside(shift(I, shift2), grid)) out.push_back(I);
    }
  }
  return out;
}

}  // namespace calderlab
