#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "calderlab/experiments.hpp"
#include "calderlab/kernels.hpp"
#include "calderlab/operators.hpp"

using namespace calderlab;

namespace {

// T(f, g)(x_j) = sum_{k1,k2} m(xi1, xi2) f^(xi1) g^(xi2) e(x_j (xi1 + xi2)) dxi^2 with
// f^(xi) = h sum_j f_j e(-x_j xi), straight from the definition.  O(N^3).
std::vector<cplx> naive_multiplier(const SymbolDescriptor& m, const SampledFunction& f,
                                   const SampledFunction& g) {
  const Grid& G = f.grid;
  const std::size_t N = G.size();
  const double h = G.spacing(), dxi = G.frequency_spacing();
  std::vector<cplx> F(N), Gh(N);
  for (std::size_t k = 0; k < N; ++k)
    for (std::size_t j = 0; j < N; ++j) {
      const cplx e = std::polar(1.0, -2.0 * M_PI * G.x(j) * G.xi(k));
      F[k] += h * f[j] * e;
      Gh[k] += h * g[j] * e;
    }
  std::vector<cplx> out(N);
  for (std::size_t j = 0; j < N; ++j)
    for (std::size_t k1 = 0; k1 < N; ++k1)
      for (std::size_t k2 = 0; k2 < N; ++k2)
        out[j] += m(G.xi(k1), G.xi(k2)) * F[k1] * Gh[k2] *
                  std::polar(1.0, 2.0 * M_PI * G.x(j) * (G.xi(k1) + G.xi(k2))) * dxi * dxi;
  return out;
}

SampledFunction random_function(const Grid& g, std::mt19937_64& rng, bool complex_values = true) {
  std::normal_distribution<double> nd;
  SampledFunction f(g);
  for (auto& v : f.values) v = {nd(rng), complex_values ? nd(rng) : 0.0};
  return f;
}

// Real function whose spectrum sits in |xi| < nyquist / 3, so no sum of three
// frequencies wraps around the lattice.
SampledFunction low_band(const Grid& g, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  SampledFunction F(g, Side::frequency);
  const std::size_t N = g.size();
  for (std::size_t k = 0; k < N; ++k)
    if (std::abs(g.xi(k)) < g.nyquist() / 3) F.values[k] = {nd(rng), nd(rng)};
  for (std::size_t k = 1; k < N; ++k) F.values[N - k] = std::conj(F.values[k]);
  F.values[0] = 0.0;
  F.values[N / 2] = F.values[N / 2].real();
  return dft(F, Direction::inverse);
}

double max_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double w = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) w = std::max(w, std::abs(a[i] - b[i]));
  return w;
}

SampledFunction gaussian(const Grid& g) {
  return SampledFunction::from_space(g, [](double x) { return std::exp(-M_PI * x * x); });
}

}  // namespace

TEST_CASE("multiplier agrees with the defining double sum", "[operators][oracle]") {
  const Grid g(2.0, 32);
  std::mt19937_64 rng(7);
  const auto f = random_function(g, rng), a = random_function(g, rng);
  for (const auto& m : {SymbolDescriptor::c1_sgn(), SymbolDescriptor::gen22(2, -0.5),
                        SymbolDescriptor::circular(1, 3), SymbolDescriptor::separable_sgn(2),
                        adjoint_symbol(SymbolDescriptor::c1_indicator(), AdjointKind::star1)}) {
    const auto out = apply_multiplier(m, f, a);
    CHECK(max_diff(out.values, naive_multiplier(m, f, a)) < 1e-11);
  }
}

TEST_CASE("constant and separable symbols", "[operators]") {
  const Grid g(8, 512);
  std::mt19937_64 rng(8);
  const auto f = random_function(g, rng), a = random_function(g, rng);
  const auto prod = apply_multiplier(SymbolDescriptor::constant(1), f, a);
  CHECK(max_diff(prod.values, pointwise_product(f, a).values) < 1e-10);
  const auto hg = apply_multiplier(SymbolDescriptor::separable_sgn(1), f, a);
  CHECK(max_diff(hg.values, pointwise_product(hilbert_transform(f), a).values) < 1e-10);
  const auto fh = apply_multiplier(SymbolDescriptor::separable_sgn(2), f, a);
  CHECK(max_diff(fh.values, pointwise_product(f, hilbert_transform(a)).values) < 1e-10);
}

TEST_CASE("spectral cutoff drops only negligible frequencies", "[operators]") {
  const Grid g(16, 1024);
  const auto f = gaussian(g);
  const auto a = SampledFunction::from_space(g, [](double x) { return std::exp(-x * x) * std::cos(x); });
  MultiplierOptions opts;
  opts.spectral_cutoff = 1e-15;
  const auto full = apply_multiplier(SymbolDescriptor::c1_sgn(), f, a);
  const auto cut = apply_multiplier(SymbolDescriptor::c1_sgn(), f, a, opts);
  CHECK(max_diff(full.values, cut.values) < 1e-12);
  opts.spectral_cutoff = -1;
  CHECK_THROWS_AS(apply_multiplier(SymbolDescriptor::c1_sgn(), f, a, opts), std::invalid_argument);
}

TEST_CASE("grid and side mismatches are rejected", "[operators]") {
  const Grid g(4, 64), g2(4, 128);
  const SampledFunction f(g), f2(g2), F(g, Side::frequency);
  const auto m = SymbolDescriptor::c1_sgn();
  CHECK_THROWS_AS(apply_multiplier(m, f, f2), std::invalid_argument);
  CHECK_THROWS_AS(apply_multiplier(m, f, F), std::invalid_argument);
  CHECK_THROWS_AS(trilinear_form(m, f, f, f2), std::invalid_argument);
  CHECK_THROWS_AS(c1_pv_oracle(f, f2), std::invalid_argument);
  CHECK_THROWS_AS(hilbert_transform(F), std::invalid_argument);
  CHECK_THROWS_AS(apply_multiplier_padded(m, f, f, 3), std::invalid_argument);
}

TEST_CASE("trilinear form equals the paired operator output", "[operators]") {
  std::mt19937_64 rng(9);
  const Grid g(4, 256);
  const auto f = random_function(g, rng), a = random_function(g, rng), h = random_function(g, rng);
  for (const auto& m : {SymbolDescriptor::c1_sgn(), SymbolDescriptor::separable_sgn(1),
                        SymbolDescriptor::constant(1)}) {
    const auto T = apply_multiplier(m, f, a);
    cplx paired = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) paired += T[j] * h[j];
    paired *= g.spacing();
    const cplx lam = trilinear_form(m, f, a, h);
    CHECK(std::abs(lam - paired) <= 1e-10 * std::max(1.0, std::abs(paired)));
  }
  // constant symbol: the h-weighted integral of the triple product
  cplx direct = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) direct += f[j] * a[j] * h[j];
  direct *= g.spacing();
  CHECK(std::abs(trilinear_form(SymbolDescriptor::constant(1), f, a, h) - direct) <= 1e-10 * std::abs(direct));

  // Gaussian pair through c1
  const Grid gg(16, 1024);
  const auto e = gaussian(gg);
  const auto T = apply_multiplier(SymbolDescriptor::c1_sgn(), e, e);
  cplx paired = 0.0;
  for (std::size_t j = 0; j < gg.size(); ++j) paired += T[j] * e[j];
  paired *= gg.spacing();
  CHECK(std::abs(trilinear_form(SymbolDescriptor::c1_sgn(), e, e, e) - paired) < 1e-10);
}

TEST_CASE("adjoint symbols", "[operators]") {
  const auto c1 = SymbolDescriptor::c1_sgn();
  CHECK(adjoint_symbol(c1, AdjointKind::star2).real_value(1, -3) == 1.0);
  CHECK(adjoint_symbol(c1, AdjointKind::star2).real_value(1, -3) == eval_c1(1, 2));
  CHECK(adjoint_symbol(c1, AdjointKind::star1).real_value(1, -3) == eval_c1(2, -3));
  const auto one = adjoint_symbol(SymbolDescriptor::constant(1), AdjointKind::star2);
  CHECK(one(5, -2) == cplx(1.0, 0.0));
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(-20, 20);
  const auto twice = adjoint_symbol(adjoint_symbol(c1, AdjointKind::star2), AdjointKind::star2);
  const auto twice1 = adjoint_symbol(adjoint_symbol(c1, AdjointKind::star1), AdjointKind::star1);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng), y = u(rng);
    // (x, y) -> (x, -x - y) is an involution
    CHECK(twice.real_value(x, y) == c1.real_value(x, y));
    CHECK(twice1.real_value(x, y) == c1.real_value(x, y));
  }
  CHECK(twice.arguments().is_identity());
}

TEST_CASE("duality for band-limited real inputs", "[operators]") {
  std::mt19937_64 rng(11);
  const Grid g(8, 256);
  for (const auto& m : {SymbolDescriptor::c1_sgn(), SymbolDescriptor::gen22(2, 3), SymbolDescriptor::circular(1, 2)}) {
    for (int t = 0; t < 5; ++t) {
      const auto f = low_band(g, rng), a = low_band(g, rng), h = low_band(g, rng);
      const double scale = lp_norm(f, 2) * lp_norm(a, 2) * lp_norm(h, 2);
      const cplx lhs = trilinear_form(m, f, a, h);
      CHECK(std::abs(lhs - trilinear_form(adjoint_symbol(m, AdjointKind::star2), f, h, a)) <= 1e-10 * scale);
      CHECK(std::abs(lhs - trilinear_form(adjoint_symbol(m, AdjointKind::star1), h, a, f)) <= 1e-10 * scale);
    }
  }
}

namespace {

// -sum_{eps <= |t| <= R} (A(x+t) - A(x)) / t * f(x+t) h / t with t = m h, plain loops.
std::vector<cplx> naive_pv(const SampledFunction& f, const SampledFunction& a, double eps, double R) {
  const Grid& g = f.grid;
  const long N = static_cast<long>(g.size());
  const double h = g.spacing();
  std::vector<cplx> A(g.size());
  for (long j = 1; j < N; ++j) A[j] = A[j - 1] + 0.5 * h * (a[j - 1] + a[j]);
  std::vector<cplx> out(g.size());
  for (long i = 0; i < N; ++i) {
    cplx s = 0.0;
    for (long j = 0; j < N; ++j) {
      const double t = static_cast<double>(j - i) * h;
      if (std::abs(t) < eps * (1 - 1e-12) || std::abs(t) > R * (1 + 1e-12)) continue;
      s += (A[j] - A[i]) / t * f[j] * h / t;
    }
    out[i] = -s;
  }
  return out;
}

}  // namespace

TEST_CASE("principal value oracle against a direct loop", "[operators][oracle]") {
  std::mt19937_64 rng(12);
  const Grid g(4, 128);
  const auto f = random_function(g, rng), a = random_function(g, rng);
  for (double eps : {0.0, 0.25, 0.5}) {
    const PvResult r = c1_pv_oracle(f, a, {eps});
    const double e = eps == 0.0 ? g.spacing() : eps;
    CHECK(r.epsilon == e);
    CHECK(r.outer_clamped == (1 / e > 4));
    CHECK(max_diff(r.values.values, naive_pv(f, a, e, r.outer_radius)) < 1e-11);
  }
  // real inputs go through the single-row path
  const auto fr = random_function(g, rng, false), ar = random_function(g, rng, false);
  CHECK(max_diff(c1_pv_oracle(fr, ar).values.values, naive_pv(fr, ar, g.spacing(), 4)) < 1e-11);
}

TEST_CASE("principal value oracle edge cases", "[operators]") {
  const Grid g(16, 1024);
  const SampledFunction zero(g);
  const auto f = gaussian(g);
  const auto one = SampledFunction::from_space(g, [](double) { return 1.0; });
  const PvResult r0 = c1_pv_oracle(zero, one);
  CHECK(lp_norm(r0.values, infinity) == 0.0);
  CHECK_THROWS_AS(c1_pv_oracle(f, one, {0.5 * g.spacing()}), std::invalid_argument);
  CHECK_THROWS_AS(c1_pv_oracle(f, one, {8.0}), std::invalid_argument);  // 1/eps < eps
  const PvResult r = c1_pv_oracle(f, one);
  CHECK(r.outer_clamped);
  CHECK(r.outer_radius == 16.0);
  const PvResult r2 = c1_pv_oracle(f, one, {0.125});
  CHECK_FALSE(r2.outer_clamped);
  CHECK(r2.outer_radius == 8.0);
  // even f, a = 1 gives an odd output
  double odd = 0.0;
  for (std::size_t j = 1; j < g.size(); ++j) odd = std::max(odd, std::abs(r.values[j] + r.values[g.size() - j]));
  CHECK(odd <= 1e-8);
}

TEST_CASE("a = 1 reduces to pi times the Hilbert transform", "[operators]") {
  CHECK(hilbert_degeneration_error(Grid(16, 4096)) <= 1e-2);
  // the O(h) error halves with the spacing
  const double coarse = hilbert_degeneration_error(Grid(16, 1024));
  const double fine = hilbert_degeneration_error(Grid(16, 2048));
  CHECK(fine < 0.6 * coarse);
}

TEST_CASE("halving epsilon contracts the truncation changes", "[operators]") {
  const Grid g(16, 4096);
  const auto f = gaussian(g);
  const auto a = SampledFunction::from_space(g, [](double x) { return std::cos(x) * std::exp(-x * x / 8); });
  std::vector<SampledFunction> outs;
  for (double eps : {0.25, 0.125, 0.0625}) outs.push_back(c1_pv_oracle(f, a, {eps}).values);
  const double d1 = lp_norm(outs[1] - outs[0], 2), d2 = lp_norm(outs[2] - outs[1], 2);
  CHECK(d1 > 0.0);
  CHECK(d2 <= 0.6 * d1);
}

TEST_CASE("multiplier and kernel sides agree", "[operators]") {
  const auto e1 = multiplier_vs_pv_errors(Grid(16, 2048));
  const auto e2 = multiplier_vs_pv_errors(Grid(16, 4096));
  REQUIRE(e1.size() == 5);
  for (std::size_t i = 0; i < e1.size(); ++i) {
    CHECK(e2[i] <= 3e-2);
    CHECK(e2[i] <= 0.7 * e1[i]);
  }
}

TEST_CASE("hilbert transform of a sinusoid", "[operators]") {
  const Grid g(4, 256);
  // xi = 3/8 is on the lattice (dxi = 1/8)
  const auto c = SampledFunction::from_space(g, [](double x) { return std::cos(2 * M_PI * 0.375 * x); });
  const auto H = hilbert_transform(c);
  for (std::size_t j = 0; j < g.size(); ++j)
    CHECK(std::abs(H[j] - std::sin(2 * M_PI * 0.375 * g.x(j))) < 1e-12);
}

TEST_CASE("comparison report", "[operators]") {
  const Grid g(1, 8);
  const auto a = SampledFunction::from_space(g, [](double) { return 2.0; });
  const auto b = SampledFunction::from_space(g, [](double) { return 1.0; });
  const auto r = compare("x", a, b, 0.25);
  CHECK(r.rel_l2_error == 1.0);
  CHECK(r.linf_error == 1.0);
  const std::string js = to_json(r);
  CHECK(js.find("\"rel_l2_error\"") != std::string::npos);
  CHECK(js.find("\"grid\"") != std::string::npos);
}
