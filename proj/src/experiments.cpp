#include "calderlab/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "calderlab/operators.hpp"
#include "calderlab/shifted.hpp"
#include "json.hpp"

#ifndef CALDERLAB_VERSION
#define CALDERLAB_VERSION "unknown"
#endif

namespace calderlab {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

const char* library_version() { return CALDERLAB_VERSION; }

bool RunManifest::passed() const {
  if (!error.empty()) return false;
  return std::all_of(assertions.begin(), assertions.end(), [](const Assertion& a) { return a.passed; });
}

namespace {

ordered_json finite_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

ordered_json config_json(const ExperimentConfig& c) {
  ordered_json j = ordered_json::object();
  std::istringstream in(serialize(c));
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    j[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return j;
}

}  // namespace

std::string RunManifest::to_json() const {
  ordered_json j;
  j["experiment"] = calderlab::to_string(config.experiment);
  j["version"] = version;
  j["passed"] = passed();
  j["config"] = config_json(config);
  j["artifacts"] = artifacts;
  j["seconds"] = seconds;
  ordered_json list = ordered_json::array();
  for (const auto& a : assertions) {
    ordered_json e;
    e["name"] = a.name;
    e["passed"] = a.passed;
    e["value"] = finite_or_null(a.value);
    e["threshold"] = finite_or_null(a.threshold);
    if (!a.detail.empty()) e["detail"] = a.detail;
    list.push_back(e);
  }
  j["assertions"] = list;
  if (!error.empty()) j["error"] = error;
  return j.dump(2);
}

void write_symbol_heatmap(std::ostream& os, const SymbolDescriptor& m, double extent, int res) {
  if (res < 2 || !(extent > 0.0)) throw std::invalid_argument("heatmap needs res >= 2 and extent > 0");
  std::vector<double> axis(static_cast<std::size_t>(res)), row(axis.size());
  for (int i = 0; i < res; ++i) axis[static_cast<std::size_t>(i)] = -extent + 2.0 * extent * i / res;
  os << "xi,xi1,value\n";
  for (double xi : axis) {
    m.real_row(xi, axis, row);
    for (std::size_t i = 0; i < axis.size(); ++i)
      os << fmt17(xi) << ',' << fmt17(axis[i]) << ',' << fmt17(row[i]) << '\n';
  }
}

Table growth_plot_table(const NormGrowthTable& t) {
  Table out{{"bracket_n", "measured_norm"}, {}};
  for (std::size_t i = 0; i < t.shifts.size(); ++i)
    out.rows.push_back({shift_bracket(t.shifts[i]), t.norms[i]});
  return out;
}

void emit_plot_data(const Table& table, const std::string& path) {
  if (table.rows.empty()) throw std::invalid_argument("emit_plot_data: empty table");
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path);
  write_table_csv(os, table);
}

namespace {

// Random band-limited function with unit L2 norm: Gaussian coefficients on
// |xi| < nyquist / 2, so sums of two frequencies never fold.
SampledFunction band_limited(const Grid& grid, std::mt19937_64& rng, bool real) {
  std::normal_distribution<double> nd;
  SampledFunction F(grid, Side::frequency);
  const std::size_t N = grid.size();
  for (std::size_t k = N / 4 + 1; k < 3 * N / 4; ++k) F.values[k] = {nd(rng), nd(rng)};
  SampledFunction f = dft(F, Direction::inverse);
  if (real)
    for (auto& v : f.values) v = v.real();
  return cplx(1.0 / lp_norm(f, 2.0)) * f;
}

// Piecewise-constant random function; heights in [0, 4) with random sign.
SampledFunction random_steps(const Grid& grid, std::mt19937_64& rng, bool complex_values) {
  const std::size_t N = grid.size();
  std::uniform_real_distribution<double> height(0.0, 4.0);
  SampledFunction f(grid);
  const int pieces = 1 + static_cast<int>(rng() % 24);
  for (int p = 0; p < pieces; ++p) {
    const std::size_t a = rng() % N;
    const std::size_t len = 1 + rng() % std::max<std::size_t>(1, N / 8);
    const cplx v = complex_values ? cplx(height(rng) - 2.0, height(rng) - 2.0)
                                  : cplx(rng() & 1 ? height(rng) : -height(rng));
    for (std::size_t j = a; j < std::min(N, a + len); ++j) f.values[j] = v;
  }
  return f;
}

class Output {
 public:
  Output(const ExperimentConfig& c, RunManifest& m) : cfg_(c), manifest_(m) {
    fs::create_directories(c.out);
  }

  template <class Fn>
  void file(const std::string& name, Fn&& write) {
    std::ofstream os(fs::path(cfg_.out) / name, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + (fs::path(cfg_.out) / name).string());
    write(os);
    manifest_.artifacts.push_back(name);
  }
  void csv(const std::string& name, const Table& t) {
    if (cfg_.csv) file(name, [&](std::ostream& os) { write_table_csv(os, t); });
  }
  void json(const std::string& name, const std::string& text) {
    if (cfg_.json) file(name, [&](std::ostream& os) { os << text << '\n'; });
  }
  bool want_csv() const { return cfg_.csv; }

 private:
  const ExperimentConfig& cfg_;
  RunManifest& manifest_;
};

void check_le(RunManifest& m, std::string name, double value, double threshold, std::string detail = {}) {
  m.assertions.push_back({std::move(name), value <= threshold, value, threshold, std::move(detail)});
}

// --- symbol_check ----------------------------------------------------------

void symbol_check(const ExperimentConfig& c, Output& out, RunManifest& m) {
  const SymbolDescriptor desc = make_symbol(effective_kind(c), c.a, c.b);
  const bool circ = desc.kind() == SymbolKind::circular;
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> box(-100.0, 100.0);
  Table t{circ ? std::vector<std::string>{"xi1", "xi2", "closed", "oracle", "abs_error"}
               : std::vector<std::string>{"xi", "xi1", "closed", "oracle", "abs_error"},
          {}};
  double worst = 0.0, square_dev = 0.0, swap_dev = 0.0;
  const SymbolDescriptor square = SymbolDescriptor::gen22(1.0, 1.0);
  const SymbolDescriptor sym = SymbolDescriptor::circular(c.a, c.a);
  for (int i = 0; i < c.points; ++i) {
    const double u = box(rng), v = box(rng);
    const FrequencyPoint p = circ ? FrequencyPoint{0.0, u, v} : FrequencyPoint{u, v, std::nullopt};
    const double closed = evaluate(desc, p).real();
    const double oracle = quadrature_oracle(desc, p, c.nodes);
    const double err = std::abs(closed - oracle);
    worst = std::max(worst, err);
    t.rows.push_back({u, v, closed, oracle, err});

    const double c1 = eval_c1(u, v);
    square_dev = std::max(square_dev, std::abs(square.real_value(u, v) - c1 * c1));
    swap_dev = std::max(swap_dev, std::abs(sym.real_value(u, v) - sym.real_value(v, u)));
  }
  out.csv("symbol_check.csv", t);
  if (out.want_csv())
    out.file("symbol_heatmap.csv", [&](std::ostream& os) { write_symbol_heatmap(os, desc); });

  ordered_json j;
  j["kind"] = to_string(effective_kind(c));
  j["formula"] = desc.formula();
  j["points"] = c.points;
  j["nodes"] = c.nodes;
  j["max_abs_error"] = worst;
  j["gen22_square_max_dev"] = square_dev;
  j["circular_swap_max_dev"] = swap_dev;
  out.json("symbol_check.json", j.dump(2));
  check_le(m, "closed_vs_quadrature_max_abs_error", worst, 1e-5);
  check_le(m, "gen22(1,1)_equals_c1_squared", square_dev, 1e-15);
  check_le(m, "circular(a,a)_swap_symmetry", swap_dev, 0.0);
}

// --- coeff_decay -------------------------------------------------------------

SymbolDescriptor windowable_base(const ExperimentConfig& c) {
  return make_symbol(effective_kind(c), c.a, c.b);
}

void coeff_decay(const ExperimentConfig& c, Output& out, RunManifest& m) {
  const WindowedSymbol ws = build_windowed_symbol(c.part, c.k, windowable_base(c));
  const DecayShape shape = c.part == WindowPart::high_high ? DecayShape::tilde : DecayShape::plain;
  const CoeffTable table = compute_coeffs(ws, c.n_max, c.resolution);
  const CoeffTable fine = compute_coeffs(ws, c.n_max, 2 * c.resolution);
  const DecayReport rep = verify_decay(table, shape);
  const DecayReport rep_fine = verify_decay(fine, shape);

  if (out.want_csv()) out.file("coeffs.csv", [&](std::ostream& os) { write_csv(os, table); });
  out.json("decay_report.json", to_json(rep));

  const double drift = std::abs(rep_fine.c_quad - rep.c_quad) / rep.c_quad;
  ordered_json j;
  j["c_quad"] = finite_or_null(rep.c_quad);
  j["c_quad_doubled_resolution"] = finite_or_null(rep_fine.c_quad);
  j["c_quad_relative_drift"] = finite_or_null(drift);
  j["aliasing_flag"] = table.aliasing_flag();
  if (c.part == WindowPart::high_high) {
    const double ratio = off_band_ratio(table, rep.c_quad);
    j["off_band_ratio"] = finite_or_null(ratio);
    check_le(m, "off_band_coeffs_within_10x_product_envelope", ratio, 10.0,
             "|n-n1| > 4, min(<n>,<n1>) >= 8, envelope <n>^-4 <n1>^-4 C_quad");
  } else {
    const bool along_n = c.part == WindowPart::low_high;
    const double e = along_n ? rep.exp_n : rep.exp_n1;
    check_le(m, along_n ? "fitted_exponent_n" : "fitted_exponent_n1", std::isnan(e) ? 0.0 : e, -1.7);
  }
  check_le(m, "c_quad_resolution_doubling_drift", drift, 0.10);
  out.json("coeff_decay.json", j.dump(2));
}

// --- scale_uniformity --------------------------------------------------------

void scale_uniformity(const ExperimentConfig& c, Output& out, RunManifest& m) {
  const SymbolDescriptor base = windowable_base(c);
  const std::vector<int> ks{-2, 0, 3};
  Table t{{"k", "max_deviation_from_k0"}, {}};
  double worst = 0.0;
  for (int k : ks) {
    const double d = verify_scale_uniformity(base, c.part, {k}, c.n_max);
    worst = std::max(worst, d);
    t.rows.push_back({static_cast<double>(k), d});
  }
  out.csv("scale_uniformity.csv", t);
  ordered_json j;
  j["part"] = to_string(c.part);
  j["k_list"] = ks;
  j["n_max"] = c.n_max;
  j["max_deviation"] = worst;
  out.json("scale_uniformity.json", j.dump(2));
  check_le(m, "max_coefficient_deviation_across_scales", worst, 1e-8);
}

// --- operator_compare --------------------------------------------------------

struct SchwartzPair {
  const char* name;
  double (*f)(double);
  double (*a)(double);
};

const std::vector<SchwartzPair>& schwartz_pairs() {
  static const std::vector<SchwartzPair> pairs{
      {"gauss/shifted_gauss", [](double x) { return std::exp(-M_PI * x * x); },
       [](double x) { return std::exp(-M_PI * (x - 0.5) * (x - 0.5)); }},
      {"odd_gauss/modulated", [](double x) { return x * std::exp(-M_PI * x * x); },
       [](double x) { return std::cos(2.0 * x) * std::exp(-2.0 * M_PI * x * x); }},
      {"wide_gauss/mexican_hat", [](double x) { return std::exp(-M_PI * x * x / 4.0); },
       [](double x) { return (1.0 - 2.0 * M_PI * x * x) * std::exp(-M_PI * x * x); }},
      {"shifted_gauss/sine_gauss", [](double x) { return std::exp(-M_PI * (x + 1.0) * (x + 1.0)); },
       [](double x) { return std::sin(3.0 * x) * std::exp(-x * x); }},
      {"cos_gauss/gauss", [](double x) { return std::cos(4.0 * x) * std::exp(-M_PI * x * x); },
       [](double x) { return std::exp(-M_PI * x * x / 2.0); }},
  };
  return pairs;
}

}  // namespace

double hilbert_degeneration_error(const Grid& grid, double epsilon) {
  const auto f = SampledFunction::from_space(grid, [](double x) { return std::exp(-M_PI * x * x); });
  const auto one = SampledFunction::from_space(grid, [](double) { return 1.0; });
  const PvResult pv = c1_pv_oracle(f, one, {epsilon});
  return compare("c1_pv", pv.values, cplx(M_PI) * hilbert_transform(f, 8), pv.epsilon).rel_l2_error;
}

std::vector<double> multiplier_vs_pv_errors(const Grid& grid) {
  std::vector<double> errs;
  MultiplierOptions opts;
  opts.spectral_cutoff = 1e-15;
  for (const auto& pair : schwartz_pairs()) {
    const auto f = SampledFunction::from_space(grid, pair.f);
    const auto a = SampledFunction::from_space(grid, pair.a);
    const PvResult pv = c1_pv_oracle(f, a);
    errs.push_back(compare(pair.name, c1_via_multiplier(f, a, 8, opts), pv.values, pv.epsilon).rel_l2_error);
  }
  return errs;
}

namespace {

void operator_compare(const ExperimentConfig& c, Output& out, RunManifest& m) {
  const Grid grid(c.L, c.N);
  ordered_json reports = ordered_json::array();

  const auto f = SampledFunction::from_space(grid, [](double x) { return std::exp(-M_PI * x * x); });
  const auto one = SampledFunction::from_space(grid, [](double) { return 1.0; });
  const PvResult pv = c1_pv_oracle(f, one, {c.epsilon});
  const SampledFunction ref = cplx(M_PI) * hilbert_transform(f, 8);
  const ComparisonReport hil = compare("c1_pv_vs_pi_hilbert", pv.values, ref, pv.epsilon);
  reports.push_back(ordered_json::parse(to_json(hil)));
  double odd = 0.0;
  for (std::size_t j = 1; j < grid.size(); ++j)
    odd = std::max(odd, std::abs(pv.values[j] + pv.values[grid.size() - j]));
  if (out.want_csv()) {
    Table t{{"x", "c1_pv", "pi_hilbert"}, {}};
    for (std::size_t j = 0; j < grid.size(); ++j)
      t.rows.push_back({grid.x(j), pv.values[j].real(), ref.values[j].real()});
    out.csv("hilbert_degeneration.csv", t);
  }
  check_le(m, "hilbert_degeneration_rel_l2", hil.rel_l2_error, 1e-2);
  check_le(m, "even_input_gives_odd_output", odd, 1e-8);

  const Grid fine(c.L, 2 * c.N);
  const std::vector<double> e1 = multiplier_vs_pv_errors(grid);
  const std::vector<double> e2 = multiplier_vs_pv_errors(fine);
  Table t{{"pair", "rel_l2_N", "rel_l2_2N", "ratio"}, {}};
  double worst = 0.0, worst_ratio = 0.0;
  for (std::size_t i = 0; i < e1.size(); ++i) {
    worst = std::max(worst, e1[i]);
    worst_ratio = std::max(worst_ratio, e2[i] / e1[i]);
    t.rows.push_back({static_cast<double>(i), e1[i], e2[i], e2[i] / e1[i]});
    ordered_json r;
    r["op"] = std::string("c1_multiplier_vs_pv:") + schwartz_pairs()[i].name;
    r["grid"] = {{"L", c.L}, {"N", c.N}};
    r["epsilon"] = grid.spacing();
    r["rel_l2_error"] = e1[i];
    r["rel_l2_error_doubled_N"] = e2[i];
    reports.push_back(r);
  }
  out.csv("multiplier_vs_pv.csv", t);
  out.json("operator_compare.json", reports.dump(2));
  check_le(m, "multiplier_vs_pv_rel_l2", worst, 3e-2);
  check_le(m, "multiplier_vs_pv_error_ratio_on_doubling", worst_ratio, 0.7);
}

// --- duality_check -----------------------------------------------------------

void duality_check(const ExperimentConfig& c, Output& out, RunManifest& m) {
  const Grid grid(c.L, c.N);
  const SymbolDescriptor sym = make_symbol(effective_kind(c), c.a, c.b);
  const SymbolDescriptor adj = adjoint_symbol(sym, AdjointKind::star2);
  std::mt19937_64 rng(c.seed);
  Table t{{"trial", "lambda_re", "lambda_im", "adjoint_re", "adjoint_im", "deviation"}, {}};
  double worst = 0.0;
  const int trials = effective_trials(c);
  for (int i = 0; i < trials; ++i) {
    const SampledFunction f = band_limited(grid, rng, true);
    const SampledFunction a = band_limited(grid, rng, true);
    const SampledFunction g = band_limited(grid, rng, true);
    // unit L2 inputs, so the deviation is already relative to the input scale
    const cplx l1 = trilinear_form(sym, f, a, g);
    const cplx l2 = trilinear_form(adj, f, g, a);
    const double d = std::abs(l1 - l2);
    worst = std::max(worst, d);
    t.rows.push_back({static_cast<double>(i), l1.real(), l1.imag(), l2.real(), l2.imag(), d});
  }
  out.csv("duality.csv", t);
  ordered_json j;
  j["symbol"] = sym.formula();
  j["trials"] = trials;
  j["max_deviation"] = worst;
  out.json("duality.json", j.dump(2));
  check_le(m, "duality_max_deviation", worst, 1e-10);
}

// --- model_growth ------------------------------------------------------------

int packet_floor_scale(const Grid& grid) {
  int e = 0;
  std::frexp(4.0 * grid.spacing(), &e);
  return e - 1;
}

void model_growth(const ExperimentConfig& c, Output& out, RunManifest& m) {
  const Grid grid(c.L, c.N);
  std::mt19937_64 rng(c.seed);
  const int k0 = packet_floor_scale(grid);

  // brute-force triple sum against the FFT evaluation
  ModelOperatorSpec spec;
  spec.shift1 = 3;
  spec.shift2 = -2;
  for (int k = k0; k < k0 + 4; ++k) {
    auto pool = admissible_intervals(grid, k, k, spec.shift1, spec.shift2);
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(std::min<std::size_t>(pool.size(), 16));
    spec.intervals.insert(spec.intervals.end(), pool.begin(), pool.end());
  }
  const SampledFunction f = band_limited(grid, rng, false);
  const SampledFunction g = band_limited(grid, rng, false);
  const SampledFunction h = band_limited(grid, rng, false);
  const cplx fast = inner_product(apply_model_operator(spec, f, g), h);
  cplx brute = 0.0;
  for (const auto& I : spec.intervals) {
    const cplx cf = inner_product(f, model_bump(spec.type1, shift(I, spec.shift1), grid));
    const cplx cg = inner_product(g, model_bump(spec.type2, shift(I, spec.shift2), grid));
    const cplx ch = inner_product(model_bump(spec.type3, I, grid), h);
    brute += cf * cg * ch / std::sqrt(I.length());
  }
  const double brute_dev = std::abs(fast - brute);
  check_le(m, "model_operator_vs_triple_sum", brute_dev, 1e-10,
           std::to_string(spec.intervals.size()) + " intervals over 4 scales");

  // one interval, inputs equal to its own bumps
  const DyadicInterval I{k0 + 1, 3};
  ModelOperatorSpec one{{I}, 5, 1};
  const SampledFunction T = apply_model_operator(one, model_bump(BumpType::psi, shift(I, 5), grid),
                                                 model_bump(BumpType::psi, shift(I, 1), grid));
  const SampledFunction expect = cplx(1.0 / std::sqrt(I.length())) * model_bump(BumpType::phi, I, grid);
  const double norm_dev = lp_norm(T - expect, infinity);
  check_le(m, "single_interval_normalization", norm_dev, 1e-10);

  const NormGrowthTable growth = measure_model_growth(grid, c.shifts, effective_trials(c), c.seed);
  Table t{{"n1", "measured_ratio"}, {}};
  for (std::size_t i = 0; i < growth.shifts.size(); ++i)
    t.rows.push_back({static_cast<double>(growth.shifts[i]), growth.norms[i]});
  out.csv("model_growth.csv", t);
  out.csv("model_growth_plot.csv", growth_plot_table(growth));
  out.json("model_growth.json", to_json(growth));
  check_le(m, "model_growth_power_exponent", growth.fit.power_exponent, 0.2);
}

// --- shifted_norms -----------------------------------------------------------

void shifted_norms(const ExperimentConfig& c, Output& out, RunManifest& m) {
  const Grid grid(c.L, c.N);
  const int trials = effective_trials(c);
  for (GrowthOp op : {GrowthOp::maximal, GrowthOp::square, GrowthOp::sharp_maximal}) {
    const NormGrowthTable t = measure_norm_growth(op, c.p, c.shifts, trials, c.seed, grid);
    const std::string name = to_string(op);
    Table rows{{"n", "measured_norm"}, {}};
    for (std::size_t i = 0; i < t.shifts.size(); ++i)
      rows.rows.push_back({static_cast<double>(t.shifts[i]), t.norms[i]});
    out.csv(name + ".csv", rows);
    out.csv(name + "_plot.csv", growth_plot_table(t));
    out.json(name + ".json", to_json(t));
    if (op != GrowthOp::sharp_maximal)
      check_le(m, name + "_power_exponent", t.fit.power_exponent, 0.25);
  }
  const double cover = covering_constant(20, c.seed, 64);
  ordered_json j;
  j["covering_constant"] = cover;
  j["grid_N"] = 1024;
  j["shifts"] = "1..64";
  out.json("covering.json", j.dump(2));
  check_le(m, "covering_inequality_constant", cover, 4.0);
}

// --- cz_audit ----------------------------------------------------------------

void cz_audit(const ExperimentConfig& c, Output& out, RunManifest& m) {
  const Grid grid(c.L, c.N);
  const DyadicTree tree(grid);
  const double h = grid.spacing();
  std::mt19937_64 rng(c.seed);
  double recon = 0.0, mean_bad = 0.0, good_excess = -infinity, omega_excess = -infinity;
  double support = 0.0;
  int overlaps = 0;
  const int trials = effective_trials(c);
  for (int t = 0; t < trials; ++t) {
    const SampledFunction f = random_steps(grid, rng, t % 2 == 1);
    // lambda above every root average, so no root interval is selected
    double root_avg = 0.0, peak = 0.0, l1 = 0.0;
    for (const auto& R : tree.roots()) {
      const auto [a, b] = tree.cells(R);
      double s = 0.0;
      for (std::size_t j = a; j < b; ++j) s += std::abs(f.values[j]);
      root_avg = std::max(root_avg, s / static_cast<double>(b - a));
    }
    for (const auto& v : f.values) {
      peak = std::max(peak, std::abs(v));
      l1 += std::abs(v);
    }
    l1 *= h;
    if (peak == 0.0) continue;
    const double lo = std::log(std::max(root_avg, 1e-3)), hi = std::log(1.2 * peak);
    const double lambda = std::exp(std::uniform_real_distribution<double>(lo, std::max(lo, hi))(rng));
    const CZResult r = cz_decompose(f, lambda);

    SampledFunction sum = r.good;
    for (const auto& b : r.bad) {
      const auto [a0, b0] = tree.cells(b.interval);
      std::complex<long double> integral = 0.0L;
      for (std::size_t j = 0; j < grid.size(); ++j) {
        sum.values[j] += b.values.values[j];
        if (j >= a0 && j < b0) integral += std::complex<long double>(b.values.values[j]);
        else support = std::max(support, std::abs(b.values.values[j]));
      }
      mean_bad = std::max(mean_bad, h * static_cast<double>(std::abs(integral)));
    }
    recon = std::max(recon, lp_norm(sum - f, infinity));
    good_excess = std::max(good_excess, lp_norm(r.good, infinity) - 2.0 * lambda);
    omega_excess = std::max(omega_excess, r.omega_measure - l1 / lambda);
    std::vector<DyadicInterval> sel = r.selected;
    std::sort(sel.begin(), sel.end(), [](const DyadicInterval& x, const DyadicInterval& y) {
      return x.left() < y.left();
    });
    for (std::size_t i = 1; i < sel.size(); ++i) overlaps += sel[i].left() < sel[i - 1].right();

    if (t == 0) {
      Table iv{{"k", "n_index"}, {}};
      for (const auto& J : r.selected)
        iv.rows.push_back({static_cast<double>(J.scale), static_cast<double>(J.index)});
      if (!iv.rows.empty()) out.csv("cz_intervals.csv", iv);
      SampledFunction bad(grid);
      for (const auto& b : r.bad) bad = bad + b.values;
      if (out.want_csv()) {
        out.file("cz_input.csv", [&](std::ostream& os) { write_function_csv(os, f, true); });
        out.file("cz_good.csv", [&](std::ostream& os) { write_function_csv(os, r.good, true); });
        out.file("cz_bad.csv", [&](std::ostream& os) { write_function_csv(os, bad, true); });
      }
    }
  }
  ordered_json j;
  j["trials"] = trials;
  j["max_reconstruction_error"] = recon;
  j["max_abs_bad_integral"] = mean_bad;
  j["max_bad_outside_support"] = support;
  j["max_good_sup_minus_2lambda"] = finite_or_null(good_excess);
  j["max_omega_minus_l1_over_lambda"] = finite_or_null(omega_excess);
  j["overlapping_pairs"] = overlaps;
  out.json("cz_audit.json", j.dump(2));
  check_le(m, "f_equals_g_plus_sum_b", recon, 1e-12);
  check_le(m, "bad_parts_have_zero_integral", mean_bad, 1e-12);
  check_le(m, "bad_parts_supported_in_J", support, 0.0);
  check_le(m, "good_part_sup_minus_2lambda", good_excess, 1e-12);
  check_le(m, "omega_minus_l1_over_lambda", omega_excess, 0.0);
  check_le(m, "overlapping_selected_intervals", overlaps, 0.0);
}

}  // namespace

NormGrowthTable measure_model_growth(const Grid& grid, const std::vector<std::int64_t>& shifts,
                                     int trials, std::uint64_t seed) {
  if (shifts.empty() || trials < 1) throw std::invalid_argument("measure_model_growth: empty input");
  const std::int64_t widest = *std::max_element(shifts.begin(), shifts.end());
  const int k0 = packet_floor_scale(grid);
  std::vector<DyadicInterval> intervals;
  for (int k = k0; k < k0 + 3; ++k) {
    const auto more = admissible_intervals(grid, k, k, widest, 0);
    intervals.insert(intervals.end(), more.begin(), more.end());
  }
  if (intervals.empty())
    throw std::invalid_argument("measure_model_growth: no interval fits the largest shift on this grid");

  std::vector<std::pair<SampledFunction, SampledFunction>> inputs;
  for (int t = 0; t < trials; ++t) {
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(t));
    SampledFunction f = band_limited(grid, rng, false);
    inputs.emplace_back(std::move(f), band_limited(grid, rng, false));
  }
  NormGrowthTable table;
  table.op = "model_operator";
  table.p = 1.0;
  table.shifts = shifts;
  for (std::int64_t n : shifts) {
    ModelOperatorSpec spec{intervals, n, 0};
    double best = 0.0;
    for (const auto& [f, g] : inputs)
      best = std::max(best, lp_norm(apply_model_operator(spec, f, g), 1.0) /
                                (lp_norm(f, 2.0) * lp_norm(g, 2.0)));
    table.norms.push_back(best);
  }
  table.fit = fit_growth(table.shifts, table.norms);
  return table;
}

double covering_constant(int trials, std::uint64_t seed, int n_max) {
  const Grid grid(8.0, 1024);
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const SampledFunction f = random_steps(grid, rng, false);
    const SampledFunction M = hardy_littlewood_maximal(f);
    double peak = 0.0;
    for (const auto& v : M.values) peak = std::max(peak, v.real());
    for (int n = 1; n <= n_max; ++n) {
      const SampledFunction S = sharp_shifted_maximal(f, n);
      for (double frac : {0.01, 0.05, 0.1, 0.25, 0.5, 0.75, 0.9}) {
        const double lambda = frac * peak;
        const double a = level_set_measure(S, lambda);
        if (a == 0.0) continue;
        const double b = level_set_measure(M, lambda);
        if (b == 0.0) return infinity;
        worst = std::max(worst, a / ((1.0 + std::log2(shift_bracket(n))) * b));
      }
    }
  }
  return worst;
}

RunManifest run(const ExperimentConfig& config) {
  validate(config);

  RunManifest m;
  m.config = config;
  m.version = library_version();
  Output out(config, m);
  const auto t0 = std::chrono::steady_clock::now();
  try {
    switch (config.experiment) {
      case Experiment::symbol_check: symbol_check(config, out, m); break;
      case Experiment::coeff_decay: coeff_decay(config, out, m); break;
      case Experiment::scale_uniformity: scale_uniformity(config, out, m); break;
      case Experiment::operator_compare: operator_compare(config, out, m); break;
      case Experiment::duality_check: duality_check(config, out, m); break;
      case Experiment::model_growth: model_growth(config, out, m); break;
      case Experiment::shifted_norms: shifted_norms(config, out, m); break;
      case Experiment::cz_audit: cz_audit(config, out, m); break;
    }
  } catch (const std::exception& e) {
    m.error = e.what();
  }
  m.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::ofstream os(fs::path(config.out) / "manifest.json", std::ios::binary);
  os << m.to_json() << '\n';
  return m;
}

}  // namespace calderlab
