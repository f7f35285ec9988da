#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "calderlab/growth.hpp"
#include "calderlab/io.hpp"
#include "calderlab/symbols.hpp"
#include "calderlab/whitney.hpp"

namespace calderlab {

enum class Experiment {
  symbol_check,
  coeff_decay,
  scale_uniformity,
  operator_compare,
  duality_check,
  model_growth,
  shifted_norms,
  cz_audit,
};

const char* to_string(Experiment e);
Experiment parse_experiment(const std::string& s);
const std::vector<Experiment>& all_experiments();

// Symbol kinds reachable from the command line.
enum class CliSymbol { c1, c1plus, gen22, circular };
const char* to_string(CliSymbol s);
CliSymbol parse_cli_symbol(const std::string& s);
SymbolDescriptor make_symbol(CliSymbol s, double a, double b);

// A bad value for one named field.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct ExperimentConfig {
  Experiment experiment = Experiment::symbol_check;
  double L = 16.0;
  std::size_t N = 4096;

  std::optional<CliSymbol> kind;  // unset picks the experiment's default
  double a = 1.0;
  double b = 1.0;
  WindowPart part = WindowPart::low_high;
  int k = 0;
  int n_max = 64;
  int resolution = 4096;
  double epsilon = 0.0;  // 0 means the grid spacing
  double p = 2.0;
  std::vector<std::int64_t> shifts{1, 4, 16, 64, 256};
  int trials = 0;  // 0 picks the experiment's default
  std::uint64_t seed = 20240917;
  int points = 10000;
  std::int64_t nodes = 1000000;

  std::string out = "calderlab-out";
  bool csv = true;
  bool json = true;

  bool operator==(const ExperimentConfig&) const = default;
};

// Throws ConfigError naming the first offending field.
void validate(const ExperimentConfig& c);

// Flat key=value text, one key per line, '#' comments.
std::string serialize(const ExperimentConfig& c);
ExperimentConfig parse_config(const std::string& text, ExperimentConfig base = {});
// Sets one field from its text form; the keys are the ones serialize() writes.
void set_field(ExperimentConfig& c, const std::string& key, const std::string& value);
const std::vector<std::string>& config_keys();

int effective_trials(const ExperimentConfig& c);
// c1_indicator (c1plus) for the Whitney experiments, c1 otherwise.
CliSymbol effective_kind(const ExperimentConfig& c);

struct Assertion {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct RunManifest {
  ExperimentConfig config;
  std::vector<std::string> artifacts;
  double seconds = 0.0;
  std::string version;
  std::vector<Assertion> assertions;
  std::string error;  // set when the run aborted

  bool passed() const;
  std::string to_json() const;
};

const char* library_version();

// Runs the experiment, writes its artifacts and manifest.json into
// config.out and returns the manifest.  The manifest is written even when an
// assertion fails or the run throws; config errors are thrown as ConfigError
// before anything is written.
RunManifest run(const ExperimentConfig& config);

// Gridded dump of a real symbol over [-extent, extent)^2 with res^2 samples
// xi_i = -extent + 2 extent i / res (so 0 is on the grid).  Columns xi,xi1,value.
void write_symbol_heatmap(std::ostream& os, const SymbolDescriptor& m, double extent = 8.0,
                          int res = 512);

// (<n>, measured_norm) rows.
Table growth_plot_table(const NormGrowthTable& t);

// Writes the table as CSV to path; throws on an empty table.
void emit_plot_data(const Table& table, const std::string& path);

// Restricted-boundedness ratio ||T(f, g)||_1 / (||f||_2 ||g||_2) of the model
// operator, maximised over seeded random band-limited (f, g), for each shift1
// (shift2 = 0).  One fixed interval collection is used for every shift.
NormGrowthTable measure_model_growth(const Grid& grid, const std::vector<std::int64_t>& shifts,
                                     int trials, std::uint64_t seed);

// Relative L2 error of c1_pv_oracle(exp(-pi x^2), 1, epsilon) against
// pi * spectral Hilbert transform (8x zero padding).
double hilbert_degeneration_error(const Grid& grid, double epsilon = 0.0);

// Relative L2 error of c1_via_multiplier against c1_pv_oracle for the five
// fixed Schwartz pairs used by operator_compare.
std::vector<double> multiplier_vs_pv_errors(const Grid& grid);

// Worst (star) constant |{M~^n f > lambda}| / ((1 + log2 <n>) |{M f > lambda}|)
// over random step functions on an N = 1024 grid, n = 1..n_max.
double covering_constant(int trials, std::uint64_t seed, int n_max = 64);

}  // namespace calderlab
