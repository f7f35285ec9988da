#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "calderlab/grid.hpp"
#include "calderlab/growth.hpp"

namespace calderlab {

// Dyadic intervals of length h .. 2^K (2^K <= L) lying inside [-L, L).
// Sample j stands for the cell [x_j, x_j + h).  Requires h to be a power of two.
class DyadicTree {
 public:
  explicit DyadicTree(const Grid& grid);

  int min_scale() const { return k_min_; }
  int max_scale() const { return k_max_; }
  const Grid& grid() const { return grid_; }

  bool contains(const DyadicInterval& I) const;
  // Cell range [first, last) covered by I.
  std::pair<std::size_t, std::size_t> cells(const DyadicInterval& I) const;
  // Index range [lo, hi] of tree intervals at scale k.
  std::pair<std::int64_t, std::int64_t> indices(int k) const;
  std::vector<DyadicInterval> roots() const;

 private:
  Grid grid_;
  int k_min_;
  int k_max_;
};

// sup over tree intervals I containing x (with I_n in the tree) of the mean of |f| on I_n.
SampledFunction sharp_shifted_maximal(const SampledFunction& f, std::int64_t n);

// Same sup with |f| weighted by (1 + dist(y, I_n)/|I|)^-100 over the whole domain.
// reach > 0 limits the weighted window to dist <= reach |I| (the dropped mass is
// at most (1 + reach)^-100 of ||f||_1 / |I|); infinity gives the untruncated sum.
SampledFunction shifted_maximal(const SampledFunction& f, std::int64_t n, double reach = 4.0);

// (sum_{I contains x} |<f, Phi_{I_n}>|^2 / |I|)^1/2 over tree intervals whose
// wave packets are representable (|I| >= 4h).  Only psi-type packets are accepted.
SampledFunction shifted_square(const SampledFunction& f, std::int64_t n,
                               BumpType type = BumpType::psi);

// sum over tree intervals of |<f, Phi_{I_n}>|^2 (the squared L2 norm of S^n f).
double shifted_square_energy(const SampledFunction& f, std::int64_t n);

// sup over all cell intervals [a, b) containing x of the mean of |f|.  O(N^2).
SampledFunction hardy_littlewood_maximal(const SampledFunction& f);

// h * #{j : v_j > level}
double level_set_measure(const SampledFunction& v, double level);

struct BadPart {
  DyadicInterval interval;
  SampledFunction values;
};

struct CZResult {
  double level = 0.0;
  std::vector<DyadicInterval> selected;
  SampledFunction good;
  std::vector<BadPart> bad;
  double omega_measure = 0.0;
  bool root_selected = false;
};

// Top-down descent from the roots; an interval is selected when the mean of
// |f| over it is strictly greater than lambda.
CZResult cz_decompose(const SampledFunction& f, double lambda);

enum class GrowthOp { maximal, sharp_maximal, square };

const char* to_string(GrowthOp op);

// For each shift, the max over `trials` seeded adversarial inputs of
// ||Op^n f||_p / ||f||_p.  Trial t draws from a generator seeded with seed + t.
NormGrowthTable measure_norm_growth(GrowthOp op, double p, const std::vector<std::int64_t>& shifts,
                                    int trials, std::uint64_t seed, const Grid& grid);

// The adversarial input of trial t (spikes, dyadic +-1 combs, indicator
// trains, lacunary sums), exposed for reproducibility checks.
SampledFunction adversarial_input(const Grid& grid, std::uint64_t seed);

}  // namespace calderlab
