#include "calderlab/shifted.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "calderlab/kernels.hpp"

namespace calderlab {

DyadicTree::DyadicTree(const Grid& grid) : grid_(grid) {
  int e = 0;
  const double m = std::frexp(grid.spacing(), &e);
  if (m != 0.5)
    throw std::invalid_argument("dyadic tree needs a power-of-two grid spacing, got h = " +
                                std::to_string(grid.spacing()));
  k_min_ = e - 1;
  std::frexp(grid.half_width(), &e);
  k_max_ = e - 1;  // largest 2^k <= L
  if (k_max_ < k_min_) k_max_ = k_min_;
}

std::pair<std::int64_t, std::int64_t> DyadicTree::indices(int k) const {
  const double len = std::ldexp(1.0, k);
  const double L = grid_.half_width();
  return {static_cast<std::int64_t>(std::ceil(-L / len)),
          static_cast<std::int64_t>(std::floor(L / len)) - 1};
}

bool DyadicTree::contains(const DyadicInterval& I) const {
  if (I.scale < k_min_ || I.scale > k_max_) return false;
  const auto [lo, hi] = indices(I.scale);
  return I.index >= lo && I.index <= hi;
}

std::pair<std::size_t, std::size_t> DyadicTree::cells(const DyadicInterval& I) const {
  const double L = grid_.half_width(), h = grid_.spacing();
  return {static_cast<std::size_t>((I.left() + L) / h), static_cast<std::size_t>((I.right() + L) / h)};
}

std::vector<DyadicInterval> DyadicTree::roots() const {
  std::vector<DyadicInterval> r;
  const auto [lo, hi] = indices(k_max_);
  for (std::int64_t n = lo; n <= hi; ++n) r.push_back({k_max_, n});
  return r;
}

namespace {

std::vector<double> abs_values(const SampledFunction& f) {
  if (f.side != Side::space) throw std::invalid_argument("expected a space-side function");
  std::vector<double> a(f.size());
  for (std::size_t j = 0; j < f.size(); ++j) a[j] = std::abs(f.values[j]);
  return a;
}

std::vector<double> prefix_sums(const std::vector<double>& v) {
  std::vector<double> s(v.size() + 1, 0.0);
  for (std::size_t j = 0; j < v.size(); ++j) s[j + 1] = s[j] + v[j];
  return s;
}

// Calls fn(I, I_n) for every tree interval whose shift is in the tree too.
template <class Fn>
void for_each_shifted_pair(const DyadicTree& tree, std::int64_t n, int k_from, Fn&& fn) {
  for (int k = std::max(k_from, tree.min_scale()); k <= tree.max_scale(); ++k) {
    const auto [lo, hi] = tree.indices(k);
    for (std::int64_t idx = lo; idx <= hi; ++idx) {
      const DyadicInterval I{k, idx};
      const DyadicInterval J = shift(I, n);
      if (tree.contains(J)) fn(I, J);
    }
  }
}

void raise_on(std::vector<cplx>& out, std::pair<std::size_t, std::size_t> cells, double v) {
  for (std::size_t j = cells.first; j < cells.second; ++j)
    if (v > out[j].real()) out[j] = v;
}

}  // namespace

SampledFunction sharp_shifted_maximal(const SampledFunction& f, std::int64_t n) {
  const DyadicTree tree(f.grid);
  const std::vector<double> S = prefix_sums(abs_values(f));
  SampledFunction out(f.grid);
  for_each_shifted_pair(tree, n, tree.min_scale(), [&](const DyadicInterval& I, const DyadicInterval& J) {
    const auto [a, b] = tree.cells(J);
    raise_on(out.values, tree.cells(I), (S[b] - S[a]) / static_cast<double>(b - a));
  });
  return out;
}

// The I_n part reuses the prefix-sum mean of the sharp variant and the tails
// are added on top, so shifted_maximal >= sharp_shifted_maximal holds exactly.
SampledFunction shifted_maximal(const SampledFunction& f, std::int64_t n, double reach) {
  if (!(reach > 0.0)) throw std::invalid_argument("shifted_maximal: reach must be positive");
  const DyadicTree tree(f.grid);
  const std::vector<double> v = abs_values(f);
  const std::vector<double> S = prefix_sums(v);
  const auto& kern = kernels::active();
  const double h = f.grid.spacing(), L = f.grid.half_width();
  const std::size_t N = f.size();
  SampledFunction out(f.grid);
  for_each_shifted_pair(tree, n, tree.min_scale(), [&](const DyadicInterval& I, const DyadicInterval& J) {
    const auto [a, b] = tree.cells(J);
    const std::size_t count = b - a;
    std::size_t lo = 0, hi = N;
    if (std::isfinite(reach)) {
      const double cells = std::ceil(reach * static_cast<double>(count));
      const auto w = static_cast<std::size_t>(std::min(cells, static_cast<double>(N)));
      lo = a > w ? a - w : 0;
      hi = std::min(N, b + w);
    }
    const double inv_len = 1.0 / I.length();
    double tails = 0.0;
    if (a > lo)
      tails += kern.decay_weighted_sum(v.data() + lo, a - lo, -L + (static_cast<double>(lo) + 0.5) * h,
                                       h, J.left(), J.right(), inv_len);
    if (hi > b)
      tails += kern.decay_weighted_sum(v.data() + b, hi - b, -L + (static_cast<double>(b) + 0.5) * h, h,
                                       J.left(), J.right(), inv_len);
    raise_on(out.values, tree.cells(I), ((S[b] - S[a]) + tails) / static_cast<double>(count));
  });
  return out;
}

namespace {

int packet_min_scale(const Grid& grid, const DyadicTree& tree) {
  int e = 0;
  std::frexp(4.0 * grid.spacing(), &e);
  return std::max(tree.min_scale(), e - 1);
}

template <class Fn>
void for_each_square_term(const SampledFunction& f, std::int64_t n, BumpType type, Fn&& fn) {
  if (type != BumpType::psi)
    throw std::invalid_argument("shifted square function needs psi-type (mean-zero) packets");
  if (f.side != Side::space) throw std::invalid_argument("shifted_square expects a space-side function");
  const DyadicTree tree(f.grid);
  const std::size_t N = f.size();
  const int k_from = packet_min_scale(f.grid, tree);
  for (int k = k_from; k <= tree.max_scale(); ++k) {
    const std::vector<cplx> c = packet_correlations(make_wave_packet(type, k, f.grid), f);
    const auto [lo, hi] = tree.indices(k);
    for (std::int64_t idx = lo; idx <= hi; ++idx) {
      const DyadicInterval I{k, idx};
      const DyadicInterval J = shift(I, n);
      if (!tree.contains(J)) continue;
      const auto s = centre_offset(J, f.grid) % static_cast<std::int64_t>(N);
      fn(tree, I, std::norm(c[static_cast<std::size_t>(s < 0 ? s + static_cast<std::int64_t>(N) : s)]));
    }
  }
}

}  // namespace

SampledFunction shifted_square(const SampledFunction& f, std::int64_t n, BumpType type) {
  std::vector<double> acc(f.size(), 0.0);
  for_each_square_term(f, n, type, [&](const DyadicTree& tree, const DyadicInterval& I, double c2) {
    const auto [a, b] = tree.cells(I);
    const double v = c2 / I.length();
    for (std::size_t j = a; j < b; ++j) acc[j] += v;
  });
  SampledFunction out(f.grid);
  for (std::size_t j = 0; j < acc.size(); ++j) out.values[j] = std::sqrt(acc[j]);
  return out;
}

double shifted_square_energy(const SampledFunction& f, std::int64_t n) {
  double e = 0.0;
  for_each_square_term(f, n, BumpType::psi,
                       [&](const DyadicTree&, const DyadicInterval&, double c2) { e += c2; });
  return e;
}

// For each left end a, the best mean over [a, b) with b > j is a suffix
// maximum in b, so every cell j >= a is updated in one sweep.
SampledFunction hardy_littlewood_maximal(const SampledFunction& f) {
  const std::vector<double> S = prefix_sums(abs_values(f));
  const std::size_t N = f.size();
  std::vector<double> best(N, 0.0), suffix(N + 1);
  for (std::size_t a = 0; a < N; ++a) {
    double run = 0.0;
    for (std::size_t b = N; b > a; --b) {
      run = std::max(run, (S[b] - S[a]) / static_cast<double>(b - a));
      suffix[b] = run;
    }
    for (std::size_t j = a; j < N; ++j) best[j] = std::max(best[j], suffix[j + 1]);
  }
  SampledFunction out(f.grid);
  for (std::size_t j = 0; j < N; ++j) out.values[j] = best[j];
  return out;
}

double level_set_measure(const SampledFunction& v, double level) {
  std::size_t count = 0;
  for (const auto& z : v.values) count += z.real() > level;
  return v.grid.spacing() * static_cast<double>(count);
}

CZResult cz_decompose(const SampledFunction& f, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw std::invalid_argument("cz_decompose: lambda must be positive and finite");
  const DyadicTree tree(f.grid);
  const std::vector<double> v = abs_values(f);

  // Interval sums of |f| built bottom-up, so each parent is exactly the sum of its children.
  const int levels = tree.max_scale() - tree.min_scale();
  std::vector<std::vector<double>> sums(static_cast<std::size_t>(levels + 1));
  sums[0] = v;
  for (int l = 1; l <= levels; ++l) {
    const auto& prev = sums[static_cast<std::size_t>(l - 1)];
    auto& cur = sums[static_cast<std::size_t>(l)];
    cur.resize(prev.size() / 2);
    for (std::size_t i = 0; i < cur.size(); ++i) cur[i] = prev[2 * i] + prev[2 * i + 1];
  }
  const auto mean_abs = [&](const DyadicInterval& I) {
    const int l = I.scale - tree.min_scale();
    const auto [a, b] = tree.cells(I);
    const std::size_t count = b - a;
    return sums[static_cast<std::size_t>(l)][a / count] / static_cast<double>(count);
  };

  CZResult r{lambda, {}, f, {}, 0.0, false};
  std::vector<DyadicInterval> stack = tree.roots();
  std::reverse(stack.begin(), stack.end());
  const auto roots = tree.roots();
  while (!stack.empty()) {
    const DyadicInterval I = stack.back();
    stack.pop_back();
    if (mean_abs(I) > lambda) {
      r.selected.push_back(I);
      if (std::find(roots.begin(), roots.end(), I) != roots.end()) r.root_selected = true;
      continue;
    }
    if (I.scale > tree.min_scale()) {
      stack.push_back(I.child(1));
      stack.push_back(I.child(0));
    }
  }

  for (const auto& J : r.selected) {
    const auto [a, b] = tree.cells(J);
    // extended precision keeps the bad-part integral at rounding level for long J
    std::complex<long double> acc = 0.0L;
    for (std::size_t j = a; j < b; ++j) acc += std::complex<long double>(f.values[j]);
    const cplx mean(static_cast<double>(acc.real() / static_cast<long double>(b - a)),
                    static_cast<double>(acc.imag() / static_cast<long double>(b - a)));
    BadPart part{J, SampledFunction(f.grid)};
    for (std::size_t j = a; j < b; ++j) {
      part.values.values[j] = f.values[j] - mean;
      r.good.values[j] = mean;
    }
    r.bad.push_back(std::move(part));
    r.omega_measure += J.length();
  }
  return r;
}

const char* to_string(GrowthOp op) {
  switch (op) {
    case GrowthOp::maximal: return "shifted_maximal";
    case GrowthOp::sharp_maximal: return "sharp_shifted_maximal";
    case GrowthOp::square: return "shifted_square";
  }
  return "?";
}

SampledFunction adversarial_input(const Grid& grid, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::size_t N = grid.size();
  int logN = 0;
  while ((std::size_t{1} << logN) < N) ++logN;
  const auto uniform = [&](std::size_t lo, std::size_t hi) {  // inclusive
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  SampledFunction f(grid);
  switch (rng() % 4) {
    case 0: {  // translated unit spike
      f.values[uniform(0, N - 1)] = 1.0;
      break;
    }
    case 1: {  // +-1 dyadic comb: blocks of 2^m cells every 2^(m+q) cells
      const std::size_t m = uniform(0, static_cast<std::size_t>(logN - 4));
      const std::size_t q = uniform(0, 3);
      const std::size_t block = std::size_t{1} << m, period = block << q;
      const std::size_t teeth = uniform(1, std::max<std::size_t>(1, std::min<std::size_t>(64, N / period)));
      const std::size_t start = uniform(0, N - 1) / block * block;
      for (std::size_t t = 0; t < teeth; ++t) {
        const double sign = (rng() & 1) ? 1.0 : -1.0;
        for (std::size_t j = 0; j < block; ++j) {
          const std::size_t idx = start + t * period + j;
          if (idx < N) f.values[idx] = sign;
        }
      }
      break;
    }
    case 2: {  // indicator train sum_j 1_{[j 2^m w, j 2^m w + w)}
      const std::size_t w = std::size_t{1} << uniform(0, static_cast<std::size_t>(logN - 5));
      const std::size_t period = w << uniform(1, 4);
      const std::size_t teeth = uniform(1, 8);
      const std::size_t start = uniform(0, N - 1) / w * w;
      for (std::size_t t = 0; t < teeth; ++t)
        for (std::size_t j = 0; j < w; ++j) {
          const std::size_t idx = start + t * period + j;
          if (idx < N) f.values[idx] = 1.0;
        }
      break;
    }
    default: {  // lacunary sum of nested dyadic indicators with decaying heights
      const std::size_t centre = uniform(0, N - 1);
      const std::size_t depth = uniform(2, static_cast<std::size_t>(logN - 2));
      for (std::size_t i = 0; i < depth; ++i) {
        const std::size_t len = std::size_t{1} << i;
        const std::size_t a = centre / len * len;
        const double height = std::ldexp(1.0, -static_cast<int>(i) / 2);
        for (std::size_t j = a; j < std::min(N, a + len); ++j) f.values[j] += height;
      }
      break;
    }
  }
  return f;
}

NormGrowthTable measure_norm_growth(GrowthOp op, double p, const std::vector<std::int64_t>& shifts,
                                    int trials, std::uint64_t seed, const Grid& grid) {
  if (!(p > 1.0) || !std::isfinite(p))
    throw std::invalid_argument("measure_norm_growth: p must lie in (1, infinity)");
  if (trials < 1) throw std::invalid_argument("measure_norm_growth: need at least one trial");
  if (shifts.empty()) throw std::invalid_argument("measure_norm_growth: no shifts given");
  for (std::size_t i = 1; i < shifts.size(); ++i)
    if (shifts[i] <= shifts[i - 1])
      throw std::invalid_argument("measure_norm_growth: shifts must be strictly increasing");

  std::vector<SampledFunction> inputs;
  std::vector<double> in_norms;
  for (int t = 0; t < trials; ++t) {
    inputs.push_back(adversarial_input(grid, seed + static_cast<std::uint64_t>(t)));
    in_norms.push_back(lp_norm(inputs.back(), p));
  }
  NormGrowthTable table;
  table.op = to_string(op);
  table.p = p;
  table.shifts = shifts;
  for (std::int64_t n : shifts) {
    double best = 0.0;
    for (std::size_t t = 0; t < inputs.size(); ++t) {
      SampledFunction out = op == GrowthOp::maximal         ? shifted_maximal(inputs[t], n)
                            : op == GrowthOp::sharp_maximal ? sharp_shifted_maximal(inputs[t], n)
                                                            : shifted_square(inputs[t], n);
      best = std::max(best, lp_norm(out, p) / in_norms[t]);
    }
    table.norms.push_back(best);
  }
  table.fit = fit_growth(table.shifts, table.norms);
  return table;
}

}  // namespace calderlab
