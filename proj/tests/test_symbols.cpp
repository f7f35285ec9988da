#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "calderlab/symbols.hpp"

using namespace calderlab;
using Catch::Matchers::WithinAbs;

TEST_CASE("c1 closed form examples", "[symbols]") {
  CHECK(eval_c1(1, 0) == 1.0);
  CHECK(eval_c1(2, 1) == 1.0);
  CHECK(eval_c1(-1, 2) == 0.0);
  CHECK(eval_c1(-1, 4) == 0.5);
  CHECK(eval_c1(0, 0) == 0.0);
  CHECK(eval_c1(0, 3) == 1.0);
  CHECK(eval_c1(0, -3) == -1.0);
}

TEST_CASE("c1 examples against the quadrature oracle", "[symbols][oracle]") {
  const auto c1 = SymbolDescriptor::c1_sgn();
  CHECK_THAT(quadrature_oracle(c1, -1, 2, 1000000), WithinAbs(0.0, 2e-6));
  CHECK_THAT(quadrature_oracle(c1, -1, 4, 1000000), WithinAbs(0.5, 2e-6));
  CHECK(quadrature_oracle(c1, 5, 1, 100) == 1.0);
  const auto ind = SymbolDescriptor::c1_indicator();
  CHECK_THAT(quadrature_oracle(ind, -1, 4, 1000000), WithinAbs(0.75, 2e-6));
  CHECK_THAT(quadrature_oracle(ind, -1, 2, 1000000), WithinAbs(0.5, 2e-6));
  CHECK_THAT(quadrature_oracle(SymbolDescriptor::gen22(1, 1), -1, 4, 1000000), WithinAbs(0.25, 1e-5));
  CHECK_THROWS_AS(quadrature_oracle(c1, 1, 1, 9), std::invalid_argument);
  CHECK_THROWS_AS(quadrature_oracle(SymbolDescriptor::constant(1), 1, 1, 100), std::invalid_argument);
  CHECK_THROWS_AS(quadrature_oracle(SymbolDescriptor::separable_sgn(1), 1, 1, 100),
                  std::invalid_argument);
}

TEST_CASE("indicator symbol", "[symbols]") {
  CHECK(eval_c1_indicator(1, 0) == 1.0);
  CHECK(eval_c1_indicator(-1, 4) == 0.75);
  CHECK(eval_c1_indicator(-1, 2) == 0.5);
  CHECK(eval_c1_indicator(0, 0) == 0.5);
}

TEST_CASE("primitive", "[symbols]") {
  CHECK(eval_primitive(1, 2) == 2.0);
  CHECK(eval_primitive(-3, 2) == 0.0);
  CHECK(eval_primitive(-1, 2) == 1.0);
  // oriented: int_0^{-2} = -int_{-2}^0
  CHECK(eval_primitive(1, -2) == -1.0);
  CHECK(eval_primitive(-1, -2) == 0.0);
  CHECK(eval_primitive(3, -2) == -2.0);
}

// midpoint rule for int_0^xi1 1_{>0}(xi + t) dt, oriented
double primitive_oracle(double xi, double xi1, int M) {
  double s = 0.0;
  const double step = xi1 / M;
  for (int i = 0; i < M; ++i) {
    const double v = xi + (i + 0.5) * step;
    s += v > 0 ? 1.0 : (v < 0 ? 0.0 : 0.5);
  }
  return s * step;
}

TEST_CASE("primitive against its oracle", "[symbols][oracle]") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-10, 10);
  for (int i = 0; i < 300; ++i) {
    const double xi = u(rng), xi1 = u(rng);
    CHECK_THAT(eval_primitive(xi, xi1), WithinAbs(primitive_oracle(xi, xi1, 200000), 2e-4));
  }
}

TEST_CASE("primitive is piecewise linear away from its kinks", "[symbols]") {
  const double d = 1e-3;
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-10, 10);
  int tested = 0;
  while (tested < 500) {
    const double x = u(rng), y = u(rng);
    // kinks of the primitive: xi = 0 and xi + xi1 = 0
    if (std::abs(x) <= 10 * d || std::abs(x + y) / std::sqrt(2.0) <= 10 * d) continue;
    ++tested;
    const auto P = [](double a, double b) { return eval_primitive(a, b); };
    const double dxx = P(x + d, y) - 2 * P(x, y) + P(x - d, y);
    const double dyy = P(x, y + d) - 2 * P(x, y) + P(x, y - d);
    const double dxy = P(x + d, y + d) - P(x + d, y - d) - P(x - d, y + d) + P(x - d, y - d);
    CHECK(std::abs(dxx) <= 1e-9);
    CHECK(std::abs(dyy) <= 1e-9);
    CHECK(std::abs(dxy) <= 1e-9);
  }
}

TEST_CASE("gen22 and circular examples", "[symbols]") {
  CHECK(eval_gen22(1, 1, -1, 4) == 0.25);
  CHECK(eval_gen22(1, 1, 1, 0) == 1.0);
  CHECK(eval_gen22(2, -1, -1, 1) == 0.0);
  CHECK(eval_c1(-1, 2) * eval_c1(-1, -1) == 0.0);
  CHECK(eval_circular(1, 1, 3, 3) == 1.0);
  CHECK(eval_circular(1, 1, -1, 4) == 0.5);
  CHECK_THROWS_AS(eval_gen22(0, 1, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(eval_circular(1, 0, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(SymbolDescriptor::gen22(1, 0), std::invalid_argument);
  CHECK_THROWS_AS(SymbolDescriptor::circular(0, 1), std::invalid_argument);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-50, 50);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng), y = u(rng);
    CHECK(eval_circular(1, 1, x, y) == eval_circular(1, 1, y, x));
    CHECK(eval_circular(2.5, 2.5, x, y) == eval_circular(2.5, 2.5, y, x));
  }
}

TEST_CASE("double commutator is gen22(1, 1), the square of c1", "[symbols]") {
  const auto dc = SymbolDescriptor::double_commutator();
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-100, 100);
  for (int i = 0; i < 10000; ++i) {
    const double x = u(rng), y = u(rng);
    const double c = eval_c1(x, y);
    CHECK(std::abs(dc.real_value(x, y) - c * c) <= 1e-15);
    CHECK(std::abs(eval_gen22(1, 1, x, y) - c * c) <= 1e-15);
  }
}

TEST_CASE("homogeneity, ranges and the affine relation", "[symbols]") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-100, 100), lam(0.01, 100);
  for (int i = 0; i < 5000; ++i) {
    const double x = u(rng), y = u(rng);
    const double c = eval_c1(x, y);
    CHECK(c >= -1.0);
    CHECK(c <= 1.0);
    const double p = eval_c1_indicator(x, y);
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);
    CHECK_THAT(c, WithinAbs(2 * p - 1, 1e-15));
    const double g = eval_gen22(u(rng), u(rng) + 200, x, y);
    CHECK(std::abs(g) <= 1.0);
    // powers of two scale exactly; general lambda only up to rounding of -xi/xi1
    const double two = std::ldexp(1.0, static_cast<int>(rng() % 40) - 20);
    CHECK(eval_c1(two * x, two * y) == c);
    const double l = lam(rng);
    CHECK_THAT(eval_c1(l * x, l * y), WithinAbs(c, 1e-14));
  }
}

TEST_CASE("c1 is continuous but kinked across xi + xi1 = 0", "[symbols]") {
  const double d = 1e-6;
  const double left = eval_c1(-1 - d, 1), mid = eval_c1(-1, 1), right = eval_c1(-1 + d, 1);
  CHECK(std::abs(right - mid) < 1e-5);
  CHECK(std::abs(mid - left) < 1e-5);
  const double h = 1e-3;
  const double slope_plus = (eval_c1(-1 + h, 1) - eval_c1(-1, 1)) / h;
  const double slope_minus = (eval_c1(-1, 1) - eval_c1(-1 - h, 1)) / h;
  CHECK(std::abs(slope_plus - slope_minus) >= 0.1);
}

TEST_CASE("descriptor evaluation and argument maps", "[symbols]") {
  const auto c1 = SymbolDescriptor::c1_sgn();
  CHECK(c1(-1, 4) == std::complex<double>(0.5, 0));
  CHECK(SymbolDescriptor::constant(2.5)(3, -7) == std::complex<double>(2.5, 0));
  CHECK(SymbolDescriptor::separable_sgn(1)(-2, 5) == std::complex<double>(0, 1));
  CHECK(SymbolDescriptor::separable_sgn(2)(-2, 5) == std::complex<double>(0, -1));
  CHECK_THROWS_AS(SymbolDescriptor::separable_sgn(3), std::invalid_argument);
  CHECK_FALSE(SymbolDescriptor::separable_sgn(1).is_real());
  CHECK(SymbolDescriptor::double_commutator() == SymbolDescriptor::double_commutator());
  CHECK_FALSE(c1.formula().empty());

  const ArgumentMap swap{{0, 1, 1, 0}};
  const auto swapped = c1.with_arguments(swap);
  CHECK(swapped.real_value(4, -1) == eval_c1(-1, 4));
  CHECK((swap * swap).is_identity());
  const ArgumentMap a{{1, 2, 3, 4}}, b{{0, 1, -1, 5}};
  CHECK((a * b).m == std::array<int, 4>{-2, 11, -4, 23});
  // nesting composes as a * b: x -> b(x) is substituted inside a
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-10, 10);
  for (int i = 0; i < 100; ++i) {
    const double x = u(rng), y = u(rng);
    const double bx = b.m[0] * x + b.m[1] * y, by = b.m[2] * x + b.m[3] * y;
    CHECK(c1.with_arguments(a).with_arguments(b).real_value(x, y) ==
          c1.with_arguments(a).real_value(bx, by));
  }
}

TEST_CASE("evaluate dispatches on the point layout", "[symbols]") {
  const auto circ = SymbolDescriptor::circular(1, 1);
  CHECK(evaluate(circ, FrequencyPoint{0, -1, 4.0}).real() == 0.5);
  CHECK_THROWS_AS(evaluate(circ, FrequencyPoint{0, -1, std::nullopt}), std::invalid_argument);
  CHECK(evaluate(SymbolDescriptor::c1_sgn(), FrequencyPoint{-1, 4, std::nullopt}).real() == 0.5);
  CHECK_THAT(quadrature_oracle(circ, FrequencyPoint{0, -1, 4.0}, 1000000), WithinAbs(0.5, 1e-5));
}

TEST_CASE("real_row matches pointwise evaluation for every real kind", "[symbols]") {
  const std::vector<SymbolDescriptor> kinds{
      SymbolDescriptor::c1_sgn(),         SymbolDescriptor::c1_indicator(),
      SymbolDescriptor::gen22(2, -0.5),   SymbolDescriptor::circular(1.5, 3),
      SymbolDescriptor::double_commutator(), SymbolDescriptor::constant(-2),
      SymbolDescriptor::c1_sgn().with_arguments({{-1, -1, 0, 1}})};
  std::vector<double> v(257), out(257);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = -8.0 + 0.0625 * static_cast<double>(i);
  for (const auto& m : kinds)
    for (double u : {-3.0, -0.5, 0.0, 1.0, 7.25}) {
      m.real_row(u, v, out);
      for (std::size_t i = 0; i < v.size(); ++i) CHECK(out[i] == m.real_value(u, v[i]));
    }
}
