#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "calderlab/experiments.hpp"

using namespace calderlab;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

// Flag name -> config key.
const std::vector<std::pair<std::string, std::string>> kFlags{
    {"--L", "L"},           {"--N", "N"},           {"--kind", "kind"},
    {"--a", "a"},           {"--b", "b"},           {"--part", "part"},
    {"--k", "k"},           {"--nmax", "nmax"},     {"--resolution", "resolution"},
    {"--epsilon", "epsilon"}, {"--p", "p"},         {"--shifts", "shifts"},
    {"--trials", "trials"}, {"--seed", "seed"},     {"--points", "points"},
    {"--nodes", "nodes"},   {"--out", "out"},       {"--format", "format"},
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config", "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct ExperimentCommand {
  Experiment experiment;
  CLI::App* app = nullptr;
  std::map<std::string, std::string> values;
  std::string config_file;
};

int print_manifest(const RunManifest& m) {
  for (const auto& a : m.assertions)
    std::cout << (a.passed ? "PASS " : "FAIL ") << a.name << " = " << fmt17(a.value)
              << " (limit " << fmt17(a.threshold) << ")\n";
  if (!m.error.empty()) std::cout << "ERROR " << m.error << '\n';
  std::cout << "manifest: " << (std::filesystem::path(m.config.out) / "manifest.json").string()
            << "  (" << m.seconds << " s)\n";
  return m.passed() ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical experiments for the first Calderon commutator"};
  app.set_version_flag("--version", library_version());
  app.require_subcommand(1);

  std::vector<ExperimentCommand> commands;
  commands.reserve(all_experiments().size());
  for (Experiment e : all_experiments()) {
    ExperimentCommand& cmd = commands.emplace_back();
    cmd.experiment = e;
    cmd.app = app.add_subcommand(to_string(e), std::string("run the ") + to_string(e) + " experiment");
    std::string dashed = to_string(e);
    std::replace(dashed.begin(), dashed.end(), '_', '-');
    if (dashed != to_string(e)) cmd.app->alias(dashed);
    cmd.app->add_option("--config", cmd.config_file, "key=value file; flags override it");
    for (const auto& [flag, key] : kFlags) cmd.app->add_option(flag, cmd.values[key]);
  }

  auto* symbol = app.add_subcommand("symbol", "closed-form symbol values");
  auto* eval = symbol->add_subcommand("eval", "evaluate one symbol at one point");
  symbol->require_subcommand(1);
  std::string eval_kind = "c1";
  double eval_a = 1.0, eval_b = 1.0, xi = 0.0, xi1 = 0.0;
  std::optional<double> xi2;
  eval->add_option("--kind", eval_kind, "c1 | c1plus | gen22 | circular");
  eval->add_option("--a", eval_a);
  eval->add_option("--b", eval_b);
  eval->add_option("--xi", xi);
  eval->add_option("--xi1", xi1);
  eval->add_option("--xi2", xi2);

  auto* heatmap = app.add_subcommand("heatmap", "512x512 symbol dump over [-8, 8)^2");
  std::string heat_kind = "c1", heat_out = "calderlab-out";
  double heat_a = 1.0, heat_b = 1.0;
  int heat_res = 512;
  heatmap->add_option("--kind", heat_kind);
  heatmap->add_option("--a", heat_a);
  heatmap->add_option("--b", heat_b);
  heatmap->add_option("--res", heat_res);
  heatmap->add_option("--out", heat_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (eval->parsed()) {
      const SymbolDescriptor m = make_symbol(parse_cli_symbol(eval_kind), eval_a, eval_b);
      FrequencyPoint p{xi, xi1, xi2};
      if (m.kind() == SymbolKind::circular && !xi2)
        throw ConfigError("xi2", "circular symbols take --xi1 and --xi2");
      std::cout << fmt17(evaluate(m, p).real()) << '\n';
      return kExitPass;
    }
    if (heatmap->parsed()) {
      const SymbolDescriptor m = make_symbol(parse_cli_symbol(heat_kind), heat_a, heat_b);
      std::filesystem::create_directories(heat_out);
      const auto path = std::filesystem::path(heat_out) / "symbol_heatmap.csv";
      std::ofstream os(path, std::ios::binary);
      write_symbol_heatmap(os, m, 8.0, heat_res);
      std::cout << path.string() << '\n';
      return kExitPass;
    }
    for (auto& cmd : commands) {
      if (!cmd.app->parsed()) continue;
      ExperimentConfig cfg;
      if (!cmd.config_file.empty()) cfg = parse_config(read_file(cmd.config_file));
      cfg.experiment = cmd.experiment;
      for (const auto& [flag, key] : kFlags)
        if (cmd.app->count(flag) > 0) set_field(cfg, key, cmd.values[key]);
      return print_manifest(run(cfg));
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFail;
  }
  return kExitConfig;
}
