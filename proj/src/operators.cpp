#include "calderlab/operators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "calderlab/kernels.hpp"
#include "json.hpp"

namespace calderlab {

namespace {

void require_space_pair(const SampledFunction& f, const SampledFunction& g, const char* what) {
  require_same_grid(f, g, what);
  if (f.side != Side::space) throw std::invalid_argument(std::string(what) + ": expects space-side inputs");
}

double max_abs(const std::vector<cplx>& v) {
  double m = 0.0;
  for (const auto& z : v) m = std::max(m, std::abs(z));
  return m;
}

}  // namespace

// Output coefficient O_k collects F_k1 G_k2 with k1 + k2 - N/2 = k (mod N); with
// unitary coefficients the lattice weights dxi^2 (h sqrt N)^2 sqrt N reduce to 1/sqrt N.
SampledFunction apply_multiplier(const SymbolDescriptor& m, const SampledFunction& f,
                                 const SampledFunction& g, const MultiplierOptions& opts) {
  require_space_pair(f, g, "apply_multiplier");
  if (opts.spectral_cutoff < 0.0) throw std::invalid_argument("spectral_cutoff must be >= 0");
  const Grid& grid = f.grid;
  const std::size_t N = grid.size();
  const std::vector<cplx> F = dft(f, Direction::forward).values;
  const std::vector<cplx> G = dft(g, Direction::forward).values;
  const double cut1 = opts.spectral_cutoff * max_abs(F);
  const double cut2 = opts.spectral_cutoff * max_abs(G);

  std::size_t lo2 = 0, hi2 = N;
  if (opts.spectral_cutoff > 0.0) {
    while (lo2 < N && std::abs(G[lo2]) <= cut2) ++lo2;
    while (hi2 > lo2 && std::abs(G[hi2 - 1]) <= cut2) --hi2;
  }
  const std::size_t n2 = hi2 - lo2;
  std::vector<cplx> out(N, 0.0);
  if (n2 == 0) return dft(SampledFunction(grid, std::move(out), Side::frequency), Direction::inverse);

  std::vector<double> xi2(n2), wr(n2), wi;
  for (std::size_t i = 0; i < n2; ++i) xi2[i] = grid.xi(lo2 + i);
  if (!m.is_real()) wi.resize(n2);
  const auto& kern = kernels::active();
  const double inv = 1.0 / std::sqrt(static_cast<double>(N));

  for (std::size_t k1 = 0; k1 < N; ++k1) {
    const double mag = std::abs(F[k1]);
    if (mag == 0.0 || (opts.spectral_cutoff > 0.0 && mag <= cut1)) continue;
    const double xi1 = grid.xi(k1);
    if (m.is_real()) {
      m.real_row(xi1, xi2, wr);
    } else {
      for (std::size_t i = 0; i < n2; ++i) {
        const cplx v = m(xi1, xi2[i]);
        wr[i] = v.real();
        wi[i] = v.imag();
      }
    }
    const cplx s = F[k1] * inv;
    const std::size_t start = (k1 + lo2 + N / 2) % N;  // k1 + k2 - N/2 mod N
    const std::size_t first = std::min(n2, N - start);
    const double* wip = wi.empty() ? nullptr : wi.data();
    kern.weighted_mac(wr.data(), wip, s, G.data() + lo2, out.data() + start, first);
    if (first < n2)
      kern.weighted_mac(wr.data() + first, wip ? wip + first : nullptr, s, G.data() + lo2 + first,
                        out.data(), n2 - first);
  }
  return dft(SampledFunction(grid, std::move(out), Side::frequency), Direction::inverse);
}

SymbolDescriptor adjoint_symbol(const SymbolDescriptor& m, AdjointKind which) {
  const ArgumentMap star1{{-1, -1, 0, 1}};
  const ArgumentMap star2{{1, 0, -1, -1}};
  return m.with_arguments(which == AdjointKind::star1 ? star1 : star2);
}

std::complex<double> trilinear_form(const SymbolDescriptor& m, const SampledFunction& f,
                                    const SampledFunction& g, const SampledFunction& h) {
  require_space_pair(f, g, "trilinear_form");
  require_space_pair(f, h, "trilinear_form");
  const Grid& grid = f.grid;
  const std::size_t N = grid.size();
  const std::vector<cplx> F = dft(f, Direction::forward).values;
  const std::vector<cplx> G = dft(g, Direction::forward).values;
  const std::vector<cplx> H = dft(h, Direction::forward).values;
  std::vector<double> xi2(N), w(N);
  for (std::size_t k = 0; k < N; ++k) xi2[k] = grid.xi(k);
  cplx total = 0.0;
  for (std::size_t k1 = 0; k1 < N; ++k1) {
    if (F[k1] == 0.0) continue;
    const double xi1 = grid.xi(k1);
    if (m.is_real()) m.real_row(xi1, xi2, w);
    cplx row = 0.0;
    for (std::size_t k2 = 0; k2 < N; ++k2) {
      // index of -(xi1 + xi2), folded
      const std::size_t k3 = (3 * N / 2 + 2 * N - k1 - k2) % N;
      const cplx gh = G[k2] * H[k3];
      row += m.is_real() ? w[k2] * gh : m(xi1, xi2[k2]) * gh;
    }
    total += F[k1] * row;
  }
  return grid.spacing() / std::sqrt(static_cast<double>(N)) * total;
}

PvResult c1_pv_oracle(const SampledFunction& f, const SampledFunction& a,
                      const TruncationParams& trunc) {
  require_space_pair(f, a, "c1_pv_oracle");
  const Grid& grid = f.grid;
  const std::size_t N = grid.size();
  const double h = grid.spacing();
  const double eps = trunc.epsilon == 0.0 ? h : trunc.epsilon;
  if (!(eps >= h * (1.0 - 1e-12)))
    throw std::invalid_argument("c1_pv_oracle: epsilon must be at least the grid spacing");
  double outer = 1.0 / eps;
  const bool clamped = outer > grid.half_width();
  if (clamped) outer = grid.half_width();
  if (outer < eps) throw std::invalid_argument("c1_pv_oracle: empty truncation annulus");

  const auto M = static_cast<std::ptrdiff_t>(std::floor(outer / h * (1.0 + 1e-12)));
  const auto m_min = static_cast<std::ptrdiff_t>(std::ceil(eps / h * (1.0 - 1e-12)));
  std::vector<double> w(static_cast<std::size_t>(2 * M + 1), 0.0);
  for (std::ptrdiff_t m = m_min; m <= M; ++m) {
    const double v = 1.0 / (static_cast<double>(m) * static_cast<double>(m) * h);
    w[static_cast<std::size_t>(M + m)] = v;
    w[static_cast<std::size_t>(M - m)] = v;
  }

  std::vector<double> ar(N), ai(N), fr(N), fi(N);
  bool a_complex = false, f_complex = false;
  for (std::size_t j = 0; j < N; ++j) {
    fr[j] = f.values[j].real();
    fi[j] = f.values[j].imag();
    f_complex |= fi[j] != 0.0;
    a_complex |= a.values[j].imag() != 0.0;
  }
  // Trapezoid antiderivative, A(x_0) = 0.
  for (std::size_t j = 1; j < N; ++j) {
    ar[j] = ar[j - 1] + 0.5 * h * (a.values[j - 1].real() + a.values[j].real());
    ai[j] = ai[j - 1] + 0.5 * h * (a.values[j - 1].imag() + a.values[j].imag());
  }

  const auto& kern = kernels::active();
  SampledFunction out(grid);
  const auto n = static_cast<std::ptrdiff_t>(N);
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, i - M);
    const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(n - 1, i + M);
    const std::size_t len = static_cast<std::size_t>(hi - lo + 1);
    const double* wp = w.data() + (lo - i + M);
    const auto row = [&](const std::vector<double>& A, const std::vector<double>& F) {
      return kern.pv_row(A.data() + lo, A[static_cast<std::size_t>(i)], F.data() + lo, wp, len);
    };
    double re = row(ar, fr), im = 0.0;
    if (f_complex) im += row(ar, fi);
    if (a_complex) {
      re -= row(ai, fi);
      im += row(ai, fr);
    }
    out.values[static_cast<std::size_t>(i)] = {-re, -im};
  }
  return PvResult{std::move(out), eps, outer, clamped};
}

namespace {

SampledFunction embed(const SampledFunction& f, const Grid& big, std::size_t offset) {
  SampledFunction out(big);
  std::copy(f.values.begin(), f.values.end(), out.values.begin() + static_cast<std::ptrdiff_t>(offset));
  return out;
}

SampledFunction crop(const SampledFunction& big, const Grid& small, std::size_t offset) {
  SampledFunction out(small);
  std::copy_n(big.values.begin() + static_cast<std::ptrdiff_t>(offset), small.size(), out.values.begin());
  return out;
}

Grid padded_grid(const Grid& g, std::size_t pad) {
  if (!is_power_of_two(pad)) throw std::invalid_argument("padding factor must be a power of two");
  return Grid(g.half_width() * static_cast<double>(pad), g.size() * pad);
}

}  // namespace

SampledFunction hilbert_transform(const SampledFunction& f, std::size_t pad) {
  if (f.side != Side::space) throw std::invalid_argument("hilbert_transform expects a space-side function");
  const Grid big = padded_grid(f.grid, pad);
  const std::size_t offset = (pad - 1) * f.grid.size() / 2;
  SampledFunction spec = dft(embed(f, big, offset), Direction::forward);
  for (std::size_t k = 0; k < big.size(); ++k)
    spec.values[k] *= cplx(0.0, -kernels::sgn(big.xi(k)));
  return crop(dft(spec, Direction::inverse), f.grid, offset);
}

SampledFunction apply_multiplier_padded(const SymbolDescriptor& m, const SampledFunction& f,
                                        const SampledFunction& g, std::size_t pad,
                                        const MultiplierOptions& opts) {
  require_space_pair(f, g, "apply_multiplier_padded");
  const Grid big = padded_grid(f.grid, pad);
  const std::size_t offset = (pad - 1) * f.grid.size() / 2;
  return crop(apply_multiplier(m, embed(f, big, offset), embed(g, big, offset), opts), f.grid,
              offset);
}

SampledFunction c1_via_multiplier(const SampledFunction& f, const SampledFunction& a,
                                  std::size_t pad, const MultiplierOptions& opts) {
  return cplx(0.0, -M_PI) * apply_multiplier_padded(SymbolDescriptor::c1_sgn(), f, a, pad, opts);
}

ComparisonReport compare(const std::string& op, const SampledFunction& value,
                         const SampledFunction& reference, double epsilon) {
  require_same_grid(value, reference, "compare");
  const SampledFunction diff = value - reference;
  const double ref = lp_norm(reference, 2.0);
  const double err = lp_norm(diff, 2.0);
  return ComparisonReport{op,
                          value.grid.half_width(),
                          value.grid.size(),
                          epsilon,
                          ref > 0.0 ? err / ref : err,
                          lp_norm(diff, infinity)};
}

std::string to_json(const ComparisonReport& r) {
  nlohmann::ordered_json j;
  j["op"] = r.op;
  j["grid"] = {{"L", r.L}, {"N", r.N}};
  j["epsilon"] = r.epsilon;
  j["rel_l2_error"] = r.rel_l2_error;
  j["linf_error"] = r.linf_error;
  return j.dump(2);
}

}  // namespace calderlab
