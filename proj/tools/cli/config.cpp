#include "config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "levycouple/error.hpp"
#include "levycouple/simulator.hpp"

namespace levycouple::cli {
namespace {

using nlohmann::json;

double number(const json& j, const std::string& key) {
  if (!j.contains(key)) throw ConfigError("missing field '" + key + "'");
  if (!j.at(key).is_number()) throw ConfigError("field '" + key + "' must be a number");
  return j.at(key).get<double>();
}

double number_or(const json& j, const std::string& key, double fallback) {
  return j.contains(key) ? number(j, key) : fallback;
}

std::size_t count(const json& j, const std::string& key) {
  if (!j.at(key).is_number_unsigned()) {
    throw ConfigError("field '" + key + "' must be a nonnegative integer");
  }
  return j.at(key).get<std::size_t>();
}

std::vector<double> numbers(const json& j, const std::string& key) {
  const json& v = j.at(key);
  if (!v.is_array()) throw ConfigError("field '" + key + "' must be an array");
  std::vector<double> out;
  for (const json& x : v) {
    if (!x.is_number()) throw ConfigError("field '" + key + "' must hold numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

void reject_unknown(const json& j, const std::set<std::string>& known,
                    const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw ConfigError("unknown field '" + key + "' in " + where);
  }
}

// {"<kind>": value} with exactly one key.
std::pair<std::string, double> single_entry(const json& j, const std::string& key) {
  const json& v = j.at(key);
  if (!v.is_object() || v.size() != 1 || !v.begin().value().is_number()) {
    throw ConfigError("field '" + key + "' must be an object like {\"ratio\": 0.1}");
  }
  return {v.begin().key(), v.begin().value().get<double>()};
}

const char* delta_kind_name(DeltaRule::Kind k) {
  return k == DeltaRule::Kind::kFixed ? "fixed" : "ratio";
}

const char* eps_kind_name(EpsRule::Kind k) {
  switch (k) {
    case EpsRule::Kind::kFixed: return "fixed";
    case EpsRule::Kind::kRatio: return "ratio";
    case EpsRule::Kind::kBudget: return "budget";
  }
  return "";
}

}  // namespace

void ExperimentConfig::validate() const {
  if (a_grid.empty()) throw ConfigError("a_grid must not be empty");
  for (double a : a_grid) {
    if (!(a > 0.0 && a < 1.0)) throw ConfigError("a_grid values must lie in (0, 1)");
  }
  if (!(delta_rule.value > 0.0)) throw ConfigError("delta_rule value must be positive");
  if (!(eps_rule.value > 0.0)) throw ConfigError("eps_rule value must be positive");
  if (eps_rule.kind == EpsRule::Kind::kRatio && eps_rule.value > 0.5) {
    throw ConfigError("eps ratio above 1/2 breaks delta >= 2 eps");
  }
  if (!(T > 0.0) || !(T_max > 0.0)) throw ConfigError("T and T_max must be positive");
  if (n == 0) throw ConfigError("n must be positive");
  if (sato_alphas.empty()) throw ConfigError("sato_alphas must not be empty");
  for (double alpha : sato_alphas) {
    if (!(alpha > 0.0 && alpha < 2.0)) throw ConfigError("sato_alphas must lie in (0, 2)");
  }
  if (grid_size < 2) throw ConfigError("grid_size must be at least 2");
  if (simulate_mode != "terminal" && simulate_mode != "paths") {
    throw ConfigError("simulate_mode must be 'terminal' or 'paths'");
  }
  if (!(oracle.half_width > 0.0) || oracle.points < 3 || oracle.points % 2 == 0) {
    throw ConfigError("oracle grid needs a positive half_width and an odd point count >= 3");
  }
  if (!(probe_z > 0.0 && probe_z < 1.0)) throw ConfigError("probe z must lie in (0, 1)");
  if (!(probe_horizon > 0.0)) throw ConfigError("probe horizon must be positive");
}

json ExperimentConfig::to_json() const {
  json j;
  j["measure"] = measure;
  j["a_grid"] = a_grid;
  j["delta_rule"] = {{delta_kind_name(delta_rule.kind), delta_rule.value}};
  j["eps_rule"] = {{eps_kind_name(eps_rule.kind), eps_rule.value}};
  j["T"] = T;
  j["T_max"] = T_max;
  j["n"] = n;
  j["seed"] = seed;
  j["sato_alphas"] = sato_alphas;
  j["grid_size"] = grid_size;
  j["simulate_mode"] = simulate_mode;
  j["oracle"] = {{"half_width", oracle.half_width}, {"points", oracle.points}};
  j["probe"] = {{"z", probe_z}, {"horizon", probe_horizon}};
  return j;
}

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown(j,
                 {"measure", "a_grid", "delta_rule", "eps_rule", "T", "T_max", "n",
                  "seed", "output", "workers", "sato_alphas", "grid_size",
                  "simulate_mode", "oracle", "probe"},
                 "config");
  ExperimentConfig c;
  if (j.contains("measure")) {
    if (!j.at("measure").is_object()) throw ConfigError("measure must be an object");
    c.measure = j.at("measure");
  }
  if (j.contains("a_grid")) c.a_grid = numbers(j, "a_grid");
  if (j.contains("delta_rule")) {
    const auto [kind, value] = single_entry(j, "delta_rule");
    if (kind == "fixed") {
      c.delta_rule.kind = DeltaRule::Kind::kFixed;
    } else if (kind == "ratio") {
      c.delta_rule.kind = DeltaRule::Kind::kRatio;
    } else {
      throw ConfigError("delta_rule kind must be 'fixed' or 'ratio'");
    }
    c.delta_rule.value = value;
  }
  if (j.contains("eps_rule")) {
    const auto [kind, value] = single_entry(j, "eps_rule");
    if (kind == "fixed") {
      c.eps_rule.kind = EpsRule::Kind::kFixed;
    } else if (kind == "ratio") {
      c.eps_rule.kind = EpsRule::Kind::kRatio;
    } else if (kind == "budget") {
      c.eps_rule.kind = EpsRule::Kind::kBudget;
    } else {
      throw ConfigError("eps_rule kind must be 'fixed', 'ratio' or 'budget'");
    }
    c.eps_rule.value = value;
  }
  c.T = number_or(j, "T", c.T);
  c.T_max = number_or(j, "T_max", c.T_max);
  if (j.contains("n")) c.n = count(j, "n");
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) throw ConfigError("seed must be a nonnegative integer");
    c.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("output")) {
    if (!j.at("output").is_string()) throw ConfigError("output must be a string");
    c.output = j.at("output").get<std::string>();
  }
  if (j.contains("workers")) c.workers = count(j, "workers");
  if (j.contains("sato_alphas")) c.sato_alphas = numbers(j, "sato_alphas");
  if (j.contains("grid_size")) c.grid_size = count(j, "grid_size");
  if (j.contains("simulate_mode")) {
    if (!j.at("simulate_mode").is_string()) throw ConfigError("simulate_mode must be a string");
    c.simulate_mode = j.at("simulate_mode").get<std::string>();
  }
  if (j.contains("oracle")) {
    const json& o = j.at("oracle");
    if (!o.is_object()) throw ConfigError("oracle must be an object");
    reject_unknown(o, {"half_width", "points"}, "oracle");
    c.oracle.half_width = number_or(o, "half_width", c.oracle.half_width);
    if (o.contains("points")) c.oracle.points = count(o, "points");
  }
  if (j.contains("probe")) {
    const json& p = j.at("probe");
    if (!p.is_object()) throw ConfigError("probe must be an object");
    reject_unknown(p, {"z", "horizon"}, "probe");
    c.probe_z = number_or(p, "z", c.probe_z);
    c.probe_horizon = number_or(p, "horizon", c.probe_horizon);
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path + " is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

SymmetricLevyMeasure parse_measure(const json& spec) {
  if (!spec.is_object() || !spec.contains("family") || !spec.at("family").is_string()) {
    throw ConfigError("measure needs a string field 'family'");
  }
  const std::string family = spec.at("family").get<std::string>();
  if (family == "stable") {
    reject_unknown(spec, {"family", "alpha", "c"}, "stable measure");
    return SymmetricLevyMeasure::stable(number(spec, "alpha"), number_or(spec, "c", 1.0));
  }
  if (family == "power_log") {
    reject_unknown(spec, {"family", "eps"}, "power_log measure");
    return SymmetricLevyMeasure::power_log(number(spec, "eps"));
  }
  if (family == "truncated_stable") {
    reject_unknown(spec, {"family", "alpha", "c", "cutoff"}, "truncated_stable measure");
    return SymmetricLevyMeasure::truncated_stable(
        number(spec, "alpha"), number_or(spec, "c", 1.0), number(spec, "cutoff"));
  }
  if (family == "tabulated") {
    reject_unknown(spec, {"family", "r", "tail", "eta_at_first"}, "tabulated measure");
    if (!spec.contains("r") || !spec.contains("tail")) {
      throw ConfigError("tabulated measure needs arrays 'r' and 'tail'");
    }
    const std::vector<double> r = numbers(spec, "r");
    const std::vector<double> tail = numbers(spec, "tail");
    if (r.size() != tail.size()) throw ConfigError("tabulated r and tail differ in length");
    std::vector<std::pair<double, double>> rows;
    for (std::size_t i = 0; i < r.size(); ++i) rows.emplace_back(r[i], tail[i]);
    return SymmetricLevyMeasure::tabulated(std::move(rows),
                                           number_or(spec, "eta_at_first", 0.0));
  }
  throw ConfigError("unknown measure family '" + family + "'");
}

Resolved resolve(const ExperimentConfig& config, const SymmetricLevyMeasure& measure,
                 double a) {
  Resolved r;
  r.a = a;
  const bool fixed_delta = config.delta_rule.kind == DeltaRule::Kind::kFixed;
  r.delta = fixed_delta ? config.delta_rule.value : config.delta_rule.value * a;
  if (config.eps_rule.kind == EpsRule::Kind::kRatio) {
    r.eps = config.eps_rule.value * r.delta;
  } else {
    r.eps = resolve_eps(config, measure);
    if (!fixed_delta) r.delta = std::max(r.delta, 2.0 * r.eps);
  }
  if (!(r.delta >= 2.0 * r.eps)) {
    throw ConfigError("resolved delta must be at least 2 eps");
  }
  return r;
}

double resolve_eps(const ExperimentConfig& config, const SymmetricLevyMeasure& measure) {
  switch (config.eps_rule.kind) {
    case EpsRule::Kind::kFixed:
      return config.eps_rule.value;
    case EpsRule::Kind::kBudget:
      return eps_for_budget(measure, config.eps_rule.value, 1.0);
    case EpsRule::Kind::kRatio:
      break;
  }
  throw ConfigError("the ratio eps rule needs a delta; use fixed or budget here");
}

std::string config_hash(const ExperimentConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : config.to_json().dump()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace levycouple::cli
