#ifndef LEVYCOUPLE_CLI_CONFIG_HPP_
#define LEVYCOUPLE_CLI_CONFIG_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "levycouple/levy_measure.hpp"
#include "levycouple/tv_oracle.hpp"

namespace levycouple::cli {

struct DeltaRule {
  enum class Kind { kFixed, kRatio };
  Kind kind = Kind::kRatio;
  double value = 0.1;  // delta itself, or delta / a
};

struct EpsRule {
  enum class Kind { kFixed, kRatio, kBudget };
  Kind kind = Kind::kBudget;
  double value = 1e-4;  // eps itself, eps / delta, or the bound on 2 eta(eps)
};

struct ExperimentConfig {
  nlohmann::json measure = {{"family", "stable"}, {"alpha", 1.0}, {"c", 1.0}};
  std::vector<double> a_grid{0.1};
  DeltaRule delta_rule;
  EpsRule eps_rule;
  double T = 1.0;
  double T_max = 64.0;
  std::size_t n = 10000;
  std::uint64_t seed = 1;
  std::string output;     // empty: standard output
  std::size_t workers = 0;

  std::vector<double> sato_alphas{0.5, 1.0, 1.5};  // check-condition
  std::size_t grid_size = 121;                     // eta
  std::string simulate_mode = "terminal";          // simulate: terminal | paths
  OracleGrid oracle;                               // oracle-tv, bound-check
  double probe_z = 0.999;                          // qv-probe
  double probe_horizon = 0.01;

  /// Throws ConfigError naming the first violated requirement.
  void validate() const;

  /// Canonical form: every field, keys sorted. Output path and worker count
  /// are left out because they do not affect results.
  nlohmann::json to_json() const;
};

/// Reads a config object. Unknown keys are rejected.
ExperimentConfig config_from_json(const nlohmann::json& j);

ExperimentConfig load_config(const std::string& path);

/// Unknown family or missing parameters raise ConfigError; parameters out of
/// range raise InvalidMeasureError from the measure factories.
SymmetricLevyMeasure parse_measure(const nlohmann::json& spec);

struct Resolved {
  double a = 0.0;
  double delta = 0.0;
  double eps = 0.0;
};

/// Applies the delta and eps rules at gap a. The ratio delta rule is floored
/// at 2 eps when eps does not itself depend on delta. Throws ConfigError if
/// the result has delta < 2 eps.
Resolved resolve(const ExperimentConfig& config,
                 const SymmetricLevyMeasure& measure, double a);

/// eps for runs without a gap (simulate, qv-probe): fixed or budget rules only.
double resolve_eps(const ExperimentConfig& config,
                   const SymmetricLevyMeasure& measure);

/// 64-bit FNV-1a of the canonical config, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

}  // namespace levycouple::cli

#endif  // LEVYCOUPLE_CLI_CONFIG_HPP_
