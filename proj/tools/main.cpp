#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "levycouple/error.hpp"

using namespace levycouple;

int main(int argc, char** argv) {
  CLI::App app{"Mirror-coupling experiments for symmetric pure-jump Levy laws"};
  app.set_version_flag("--version", std::string("levycouple ") + LEVYCOUPLE_VERSION);

  std::string subcommand;
  std::string config_path, out_path, measure_json, eps_family = "fixed";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> workers, n;
  std::optional<double> a, delta, eps, z, horizon, t_max, t;
  std::vector<double> alphas;
  std::optional<std::string> mode;

  app.add_option("subcommand", subcommand, "Experiment to run")
      ->required()
      ->check(CLI::IsMember(cli::subcommand_names()));
  app.add_option("--config", config_path, "JSON experiment config")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "Root seed");
  app.add_option("--out", out_path, "Output CSV path (default: stdout)");
  app.add_option("--workers", workers, "Worker threads (0: available parallelism)");
  app.add_option("--measure", measure_json, R"(Measure as JSON, e.g. {"family":"stable","alpha":1})");
  app.add_option("--a", a, "Single initial gap, replacing a_grid");
  app.add_option("--delta", delta, "Fixed coupling threshold");
  app.add_option("--eps", eps, "Truncation value, read per --eps-family");
  app.add_option("--eps-family", eps_family, "How --eps is read: fixed, ratio (of delta) or budget (on 2 eta(eps))")
      ->check(CLI::IsMember({"fixed", "ratio", "budget"}));
  app.add_option("--n", n, "Replications or samples");
  app.add_option("--alpha", alphas, "Sato exponents for check-condition");
  app.add_option("--T", t, "Observation horizon");
  app.add_option("--t-max", t_max, "Censoring horizon for exit times");
  app.add_option("--z", z, "Start gap for qv-probe");
  app.add_option("--horizon", horizon, "Horizon for qv-probe");
  app.add_option("--mode", mode, "simulate output: terminal or paths");
  CLI11_PARSE(app, argc, argv);

  cli::ExperimentConfig config;
  try {
    if (!config_path.empty()) config = cli::load_config(config_path);
    if (!measure_json.empty()) {
      try {
        config.measure = nlohmann::json::parse(measure_json);
      } catch (const nlohmann::json::parse_error&) {
        throw ConfigError("--measure is not valid JSON");
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kExitConfigError;
  }
  if (seed) config.seed = *seed;
  if (workers) config.workers = *workers;
  if (n) config.n = *n;
  if (a) config.a_grid = {*a};
  if (delta) config.delta_rule = {cli::DeltaRule::Kind::kFixed, *delta};
  if (eps) {
    using K = cli::EpsRule::Kind;
    const K kind = eps_family == "ratio" ? K::kRatio : eps_family == "budget" ? K::kBudget : K::kFixed;
    config.eps_rule = {kind, *eps};
  }
  if (!alphas.empty()) config.sato_alphas = alphas;
  if (t) config.T = *t;
  if (t_max) config.T_max = *t_max;
  if (z) config.probe_z = *z;
  if (horizon) config.probe_horizon = *horizon;
  if (mode) config.simulate_mode = *mode;
  if (!out_path.empty()) config.output = out_path;

  if (config.output.empty()) return cli::run(config, subcommand, std::cout, std::cerr);
  std::ofstream file(config.output, std::ios::binary);
  if (!file) {
    std::cerr << "error: cannot open " << config.output << " for writing\n";
    return cli::kExitConfigError;
  }
  return cli::run(config, subcommand, file, std::cerr);
}
