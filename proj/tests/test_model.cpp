#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>

#include "calderlab/operators.hpp"

using namespace calderlab;

namespace {

SampledFunction random_function(const Grid& g, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  SampledFunction f(g);
  for (auto& v : f.values) v = {nd(rng), nd(rng)};
  return f;
}

// 16 random admissible intervals at each of scales k0 .. k0 + 3.
std::vector<DyadicInterval> pick(const Grid& g, int k0, std::int64_t s1, std::int64_t s2, std::mt19937_64& rng) {
  std::vector<DyadicInterval> out;
  for (int k = k0; k < k0 + 4; ++k) {
    auto all = admissible_intervals(g, k, k, s1, s2);
    std::shuffle(all.begin(), all.end(), rng);
    out.insert(out.end(), all.begin(), all.begin() + std::min<std::ptrdiff_t>(16, static_cast<std::ptrdiff_t>(all.size())));
  }
  return out;
}

}  // namespace

TEST_CASE("empty collection gives zero", "[model]") {
  const Grid g(8, 512);
  std::mt19937_64 rng(1);
  const ModelOperatorSpec spec;
  const auto T = apply_model_operator(spec, random_function(g, rng), random_function(g, rng));
  CHECK(lp_norm(T, infinity) == 0.0);
}

TEST_CASE("bumps are unit vectors", "[model]") {
  const Grid g(8, 1024);
  for (BumpType t : {BumpType::psi, BumpType::phi})
    for (const DyadicInterval I : {DyadicInterval{-3, 5}, DyadicInterval{0, -2}, DyadicInterval{2, 1}}) {
      const auto b = model_bump(t, I, g);
      CHECK(std::abs(inner_product(b, b) - 1.0) < 1e-12);
    }
}

TEST_CASE("single interval normalization", "[model]") {
  const Grid g(8, 1024);
  for (int k : {-4, -1, 1}) {
    ModelOperatorSpec spec;
    const DyadicInterval I{k, 1};
    spec.intervals = {I};
    spec.shift1 = 3;
    spec.shift2 = 1;
    const auto f = model_bump(spec.type1, shift(I, 3), g);
    const auto a = model_bump(spec.type2, shift(I, 1), g);
    const auto T = apply_model_operator(spec, f, a);
    const auto expect = cplx(1.0 / std::sqrt(I.length())) * model_bump(spec.type3, I, g);
    CHECK(lp_norm(T - expect, infinity) <= 1e-10);
  }
}

TEST_CASE("pairing against h equals the brute-force triple sum", "[model][oracle]") {
  const Grid g(8, 1024);
  std::mt19937_64 rng(2);
  for (auto [s1, s2] : {std::pair<std::int64_t, std::int64_t>{3, -2}, {0, 5}, {-7, 0}}) {
    ModelOperatorSpec spec;
    spec.shift1 = s1;
    spec.shift2 = s2;
    spec.type2 = BumpType::phi;
    spec.type3 = BumpType::psi;
    spec.intervals = pick(g, -4, s1, s2, rng);
    REQUIRE(spec.intervals.size() == 64);
    const auto f = random_function(g, rng), a = random_function(g, rng), h = random_function(g, rng);
    const cplx fast = inner_product(apply_model_operator(spec, f, a), h);
    cplx brute = 0.0;
    for (const auto& I : spec.intervals)
      brute += inner_product(f, model_bump(spec.type1, shift(I, s1), g)) *
               inner_product(a, model_bump(spec.type2, shift(I, s2), g)) *
               inner_product(model_bump(spec.type3, I, g), h) / std::sqrt(I.length());
    CHECK(std::abs(fast - brute) <= 1e-10 * std::max(1.0, std::abs(brute)));
  }
}

TEST_CASE("model operator is linear in each slot", "[model]") {
  const Grid g(8, 1024);
  std::mt19937_64 rng(3);
  ModelOperatorSpec spec;
  spec.shift1 = 4;
  spec.intervals = pick(g, -3, 4, 0, rng);
  const auto f1 = random_function(g, rng), f2 = random_function(g, rng), a = random_function(g, rng);
  const cplx alpha(0.7, -1.3);
  const auto lhs = apply_model_operator(spec, alpha * f1 + f2, a);
  const auto rhs = alpha * apply_model_operator(spec, f1, a) + apply_model_operator(spec, f2, a);
  CHECK(lp_norm(lhs - rhs, infinity) <= 1e-12 * std::max(1.0, lp_norm(rhs, infinity)));
  const auto lhs2 = apply_model_operator(spec, a, alpha * f1 + f2);
  const auto rhs2 = alpha * apply_model_operator(spec, a, f1) + apply_model_operator(spec, a, f2);
  CHECK(lp_norm(lhs2 - rhs2, infinity) <= 1e-12 * std::max(1.0, lp_norm(rhs2, infinity)));
}

TEST_CASE("model operator validation", "[model]") {
  const Grid g(8, 1024);
  ModelOperatorSpec spec;
  spec.intervals = {{0, 0}};
  CHECK_NOTHROW(validate(spec, g));
  CHECK(spec.psi_count() == 2);

  auto bad = spec;
  bad.type1 = BumpType::phi;
  CHECK(bad.psi_count() == 1);
  CHECK_THROWS_AS(validate(bad, g), std::invalid_argument);

  bad = spec;
  bad.intervals = {{0, 0}, {0, 0}};
  CHECK_THROWS_AS(validate(bad, g), std::invalid_argument);

  bad = spec;
  bad.intervals = {{0, 7}};
  CHECK_NOTHROW(validate(bad, g));
  bad.shift2 = -1;  // I_{-1} = [8, 9) leaves the domain
  CHECK_THROWS_AS(validate(bad, g), std::invalid_argument);

  bad = spec;
  bad.intervals = {{4, 0}};  // [0, 16) is wider than the right half
  CHECK_THROWS_AS(validate(bad, g), std::invalid_argument);

  bad = spec;
  bad.intervals = {{-9, 0}};  // below the packet resolution
  CHECK_THROWS(validate(bad, g));

  const SampledFunction f(g), F(g, Side::frequency), other(Grid(8, 512));
  CHECK_THROWS_AS(apply_model_operator(spec, f, other), std::invalid_argument);
  CHECK_THROWS_AS(apply_model_operator(spec, F, F), std::invalid_argument);
}

TEST_CASE("admissible intervals fit with both shifts", "[model]") {
  const Grid g(8, 1024);
  const auto all = admissible_intervals(g, -2, 1, 5, -3);
  CHECK_FALSE(all.empty());
  for (const auto& I : all)
    for (const auto& J : {I, shift(I, 5), shift(I, -3)}) {
      CHECK(J.left() >= -8.0);
      CHECK(J.right() <= 8.0);
    }
  // at scale 0 the unshifted count is 16; each shift rules out some
  CHECK(admissible_intervals(g, 0, 0, 0, 0).size() == 16);
  CHECK(admissible_intervals(g, 0, 0, 5, -3).size() == 16 - 5 - 3);
}
