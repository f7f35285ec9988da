#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "calderlab/experiments.hpp"
#include "calderlab/grid.hpp"

namespace calderlab {

namespace {

constexpr const char* kExperimentNames[] = {"symbol_check",  "coeff_decay",   "scale_uniformity",
                                            "operator_compare", "duality_check", "model_growth",
                                            "shifted_norms", "cz_audit"};

std::string normalize(std::string s) {
  std::replace(s.begin(), s.end(), '-', '_');
  return s;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size() || !std::isfinite(out))
    throw ConfigError(key, "expected a finite number, got '" + v + "'");
  return out;
}

template <class Int>
Int parse_int(const std::string& key, const std::string& v) {
  Int out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size())
    throw ConfigError(key, "expected an integer, got '" + v + "'");
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

}  // namespace

const char* to_string(Experiment e) { return kExperimentNames[static_cast<int>(e)]; }

Experiment parse_experiment(const std::string& s) {
  const std::string n = normalize(s);
  for (Experiment e : all_experiments())
    if (n == to_string(e)) return e;
  throw ConfigError("experiment", "unknown experiment '" + s + "'");
}

const std::vector<Experiment>& all_experiments() {
  static const std::vector<Experiment> all{
      Experiment::symbol_check,  Experiment::coeff_decay,   Experiment::scale_uniformity,
      Experiment::operator_compare, Experiment::duality_check, Experiment::model_growth,
      Experiment::shifted_norms, Experiment::cz_audit};
  return all;
}

const char* to_string(CliSymbol s) {
  switch (s) {
    case CliSymbol::c1: return "c1";
    case CliSymbol::c1plus: return "c1plus";
    case CliSymbol::gen22: return "gen22";
    case CliSymbol::circular: return "circular";
  }
  return "?";
}

CliSymbol parse_cli_symbol(const std::string& s) {
  for (CliSymbol k : {CliSymbol::c1, CliSymbol::c1plus, CliSymbol::gen22, CliSymbol::circular})
    if (s == to_string(k)) return k;
  throw ConfigError("kind", "unknown symbol kind '" + s + "' (c1, c1plus, gen22, circular)");
}

SymbolDescriptor make_symbol(CliSymbol s, double a, double b) {
  switch (s) {
    case CliSymbol::c1: return SymbolDescriptor::c1_sgn();
    case CliSymbol::c1plus: return SymbolDescriptor::c1_indicator();
    case CliSymbol::gen22: return SymbolDescriptor::gen22(a, b);
    case CliSymbol::circular: return SymbolDescriptor::circular(a, b);
  }
  throw ConfigError("kind", "unknown symbol kind");
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{
      "experiment", "L",       "N",      "kind",  "a",      "b",    "part",
      "k",          "nmax",    "resolution", "epsilon", "p", "shifts", "trials",
      "seed",       "points",  "nodes",  "out",   "format"};
  return keys;
}

void set_field(ExperimentConfig& c, const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  if (key == "experiment") c.experiment = parse_experiment(v);
  else if (key == "L") c.L = parse_double(key, v);
  else if (key == "N") c.N = parse_int<std::size_t>(key, v);
  else if (key == "kind") {
    if (v == "default") c.kind.reset();
    else c.kind = parse_cli_symbol(v);
  }
  else if (key == "a") c.a = parse_double(key, v);
  else if (key == "b") c.b = parse_double(key, v);
  else if (key == "part") {
    try {
      c.part = parse_window_part(v);
    } catch (const std::exception& e) {
      throw ConfigError(key, e.what());
    }
  } else if (key == "k") c.k = parse_int<int>(key, v);
  else if (key == "nmax") c.n_max = parse_int<int>(key, v);
  else if (key == "resolution") c.resolution = parse_int<int>(key, v);
  else if (key == "epsilon") c.epsilon = parse_double(key, v);
  else if (key == "p") c.p = parse_double(key, v);
  else if (key == "shifts") {
    c.shifts.clear();
    for (const auto& s : split(v, ','))
      if (!s.empty()) c.shifts.push_back(parse_int<std::int64_t>(key, s));
  } else if (key == "trials") c.trials = parse_int<int>(key, v);
  else if (key == "seed") c.seed = parse_int<std::uint64_t>(key, v);
  else if (key == "points") c.points = parse_int<int>(key, v);
  else if (key == "nodes") c.nodes = parse_int<std::int64_t>(key, v);
  else if (key == "out") c.out = v;
  else if (key == "format") {
    c.csv = c.json = false;
    for (const auto& f : split(v, ',')) {
      if (f == "csv") c.csv = true;
      else if (f == "json") c.json = true;
      else if (!f.empty()) throw ConfigError(key, "unknown format '" + f + "' (csv, json)");
    }
  } else
    throw ConfigError(key, "unknown configuration key");
}

std::string serialize(const ExperimentConfig& c) {
  std::ostringstream os;
  std::string shifts, format;
  for (std::size_t i = 0; i < c.shifts.size(); ++i) shifts += (i ? "," : "") + std::to_string(c.shifts[i]);
  if (c.csv) format = "csv";
  if (c.json) format += format.empty() ? "json" : ",json";
  os << "experiment=" << to_string(c.experiment) << '\n'
     << "L=" << fmt17(c.L) << '\n'
     << "N=" << c.N << '\n'
     << "kind=" << (c.kind ? to_string(*c.kind) : "default") << '\n'
     << "a=" << fmt17(c.a) << '\n'
     << "b=" << fmt17(c.b) << '\n'
     << "part=" << to_string(c.part) << '\n'
     << "k=" << c.k << '\n'
     << "nmax=" << c.n_max << '\n'
     << "resolution=" << c.resolution << '\n'
     << "epsilon=" << fmt17(c.epsilon) << '\n'
     << "p=" << fmt17(c.p) << '\n'
     << "shifts=" << shifts << '\n'
     << "trials=" << c.trials << '\n'
     << "seed=" << c.seed << '\n'
     << "points=" << c.points << '\n'
     << "nodes=" << c.nodes << '\n'
     << "out=" << c.out << '\n'
     << "format=" << format << '\n';
  return os.str();
}

ExperimentConfig parse_config(const std::string& text, ExperimentConfig base) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno), "expected key=value, got '" + line + "'");
    set_field(base, trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return base;
}

int effective_trials(const ExperimentConfig& c) {
  if (c.trials > 0) return c.trials;
  switch (c.experiment) {
    case Experiment::duality_check: return 100;
    case Experiment::model_growth: return 8;
    case Experiment::shifted_norms: return 200;
    case Experiment::cz_audit: return 1000;
    default: return 1;
  }
}

CliSymbol effective_kind(const ExperimentConfig& c) {
  if (c.kind) return *c.kind;
  const bool whitney =
      c.experiment == Experiment::coeff_decay || c.experiment == Experiment::scale_uniformity;
  return whitney ? CliSymbol::c1plus : CliSymbol::c1;
}

void validate(const ExperimentConfig& c) {
  if (!(c.L > 0.0)) throw ConfigError("L", "half-width must be positive");
  if (!is_power_of_two(c.N) || c.N < 8) throw ConfigError("N", "must be a power of two >= 8");
  if (!std::isfinite(c.a) || c.a == 0.0) throw ConfigError("a", "must be finite and nonzero");
  if (!std::isfinite(c.b) || c.b == 0.0) throw ConfigError("b", "must be finite and nonzero");
  if (std::abs(c.k) > 500) throw ConfigError("k", "scale must satisfy |k| <= 500");
  if (c.n_max < 1) throw ConfigError("nmax", "must be >= 1");
  if (c.resolution < 8 * c.n_max || !is_power_of_two(static_cast<std::size_t>(c.resolution)))
    throw ConfigError("resolution", "must be a power of two >= 8 * nmax");
  const double h = 2.0 * c.L / static_cast<double>(c.N);
  if (c.epsilon != 0.0 && !(c.epsilon >= h * (1.0 - 1e-12)))
    throw ConfigError("epsilon", "must be 0 (grid spacing) or at least the grid spacing 2L/N");
  if (!(c.p > 1.0)) throw ConfigError("p", "must lie in (1, infinity)");
  if (c.shifts.empty()) throw ConfigError("shifts", "need at least one shift");
  for (std::size_t i = 1; i < c.shifts.size(); ++i)
    if (c.shifts[i] <= c.shifts[i - 1]) throw ConfigError("shifts", "must be strictly increasing");
  if (c.trials < 0) throw ConfigError("trials", "must be >= 0 (0 picks the default)");
  if (c.points < 1) throw ConfigError("points", "must be >= 1");
  if (c.nodes < 10) throw ConfigError("nodes", "quadrature needs at least 10 nodes");
  if (c.out.empty()) throw ConfigError("out", "output directory must be named");
  if (!c.csv && !c.json) throw ConfigError("format", "choose at least one of csv, json");

  const bool dyadic = c.experiment == Experiment::shifted_norms ||
                      c.experiment == Experiment::cz_audit ||
                      c.experiment == Experiment::model_growth;
  if (dyadic) {
    int e = 0;
    if (std::frexp(h, &e) != 0.5)
      throw ConfigError("N", "dyadic experiments need a power-of-two grid spacing 2L/N");
  }
  if ((c.experiment == Experiment::coeff_decay || c.experiment == Experiment::scale_uniformity) &&
      effective_kind(c) == CliSymbol::circular)
    throw ConfigError("kind", "circular symbols have no Whitney coefficient tables");
  if (c.experiment == Experiment::model_growth)
    for (auto s : c.shifts)
      if (s < 0) throw ConfigError("shifts", "model_growth uses shifts >= 0");
}

}  // namespace calderlab
