#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "calderlab/grid.hpp"
#include "calderlab/symbols.hpp"

namespace calderlab {

struct MultiplierOptions {
  // Frequencies whose unitary coefficient is below cutoff * max|coefficient|
  // are dropped. 0 keeps every lattice point (the exact double sum).
  double spectral_cutoff = 0.0;
};

// Discrete T_m(f, g)(x) = sum m(xi1, xi2) f^(xi1) g^(xi2) exp(2 pi i x (xi1 + xi2)) dxi^2
// over the centered lattice; xi1 + xi2 is folded mod N/(2L), which is exact at grid points.
SampledFunction apply_multiplier(const SymbolDescriptor& m, const SampledFunction& f,
                                 const SampledFunction& g, const MultiplierOptions& opts = {});

enum class AdjointKind { star1, star2 };

// star1: m(-xi1 - xi2, xi2); star2: m(xi1, -xi1 - xi2).
SymbolDescriptor adjoint_symbol(const SymbolDescriptor& m, AdjointKind which);

// Lambda(f, g, h) = int T_m(f, g)(x) h(x) dx, summed over frequency triples
// (xi1, xi2, -xi1 - xi2).  No conjugation.
std::complex<double> trilinear_form(const SymbolDescriptor& m, const SampledFunction& f,
                                    const SampledFunction& g, const SampledFunction& h);

struct TruncationParams {
  double epsilon = 0.0;  // 0 means the grid spacing
};

struct PvResult {
  SampledFunction values;
  double epsilon;
  double outer_radius;
  bool outer_clamped;  // 1/epsilon exceeded the half-width and was clamped to L
};

// -int_{eps < |t| < 1/eps} [(A(x+t) - A(x)) / t] f(x + t) dt / t on the grid
// t = m h, with A the trapezoid antiderivative of a.
PvResult c1_pv_oracle(const SampledFunction& f, const SampledFunction& a,
                      const TruncationParams& trunc = {});

// Spectral -i sgn(xi) multiplier.  pad > 1 embeds f in a pad-times larger
// domain with the same spacing before transforming, which suppresses the
// periodisation of the slowly decaying output.
SampledFunction hilbert_transform(const SampledFunction& f, std::size_t pad = 1);

// apply_multiplier on a zero-padded domain, cropped back to f's grid.
SampledFunction apply_multiplier_padded(const SymbolDescriptor& m, const SampledFunction& f,
                                        const SampledFunction& g, std::size_t pad,
                                        const MultiplierOptions& opts = {});

// C1(f, a) = -i pi T_{c1_sgn}(f, a) through the frequency side.
SampledFunction c1_via_multiplier(const SampledFunction& f, const SampledFunction& a,
                                  std::size_t pad = 8, const MultiplierOptions& opts = {});

struct ComparisonReport {
  std::string op;
  double L;
  std::size_t N;
  double epsilon;
  double rel_l2_error;
  double linf_error;
};

ComparisonReport compare(const std::string& op, const SampledFunction& value,
                         const SampledFunction& reference, double epsilon);
std::string to_json(const ComparisonReport& r);

// --- discrete model operator ---------------------------------------------

struct ModelOperatorSpec {
  std::vector<DyadicInterval> intervals;
  std::int64_t shift1 = 0;
  std::int64_t shift2 = 0;
  BumpType type1 = BumpType::psi;
  BumpType type2 = BumpType::psi;
  BumpType type3 = BumpType::phi;

  int psi_count() const;
};

// Throws on psi_count < 2, duplicates, intervals (or their shifts) outside
// the grid, or scales whose wave packets are not representable.
void validate(const ModelOperatorSpec& spec, const Grid& grid);

// T(f, g) = sum_I |I|^-1/2 <f, Phi1_{I_n1}> <g, Phi2_{I_n2}> Phi3_I,
// with <u, v> = h sum u conj(v).  Per-scale FFT correlation and synthesis.
SampledFunction apply_model_operator(const ModelOperatorSpec& spec, const SampledFunction& f,
                                     const SampledFunction& g);

// Bumps of one interval, as used by the operator (for oracles and tests).
SampledFunction model_bump(BumpType type, const DyadicInterval& I, const Grid& grid);

// Every interval of scales [k_lo, k_hi] that, with both shifts, fits in the grid.
std::vector<DyadicInterval> admissible_intervals(const Grid& grid, int k_lo, int k_hi,
                                                 std::int64_t shift1, std::int64_t shift2);

}  // namespace calderlab
