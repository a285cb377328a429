#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include "csv.hpp"
#include "levycouple/analysis.hpp"
#include "levycouple/coupling.hpp"
#include "levycouple/error.hpp"
#include "levycouple/parallel.hpp"
#include "levycouple/simulator.hpp"
#include "levycouple/tv_oracle.hpp"

#ifndef LEVYCOUPLE_VERSION
#define LEVYCOUPLE_VERSION "unknown"
#endif

namespace levycouple::cli {
namespace {

struct Context {
  const ExperimentConfig& config;
  SymmetricLevyMeasure measure;
  std::string provenance;
  std::ostream& out;
  std::ostream& err;
};

std::string join(const std::vector<std::string>& parts) {
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? "|" : "") + parts[i];
  return s;
}

int check_condition(Context& ctx) {
  const ConditionVerdict v = condition_integral(ctx.measure);
  std::vector<std::string> alphas, holds, liminf;
  for (double alpha : ctx.config.sato_alphas) {
    const SatoVerdict s = sato_condition(ctx.measure, alpha);
    alphas.push_back(cell(alpha));
    holds.push_back(cell(s.holds));
    liminf.push_back(cell(s.liminf_estimate));
  }
  CsvWriter csv(ctx.out, ctx.provenance,
                {"measure", "status", "value", "error_bound", "local_exponent",
                 "sato_alpha", "sato_holds", "sato_liminf"});
  csv.row(ctx.measure.id(), to_string(v.status), v.value, v.error_bound,
          v.local_exponent_at_0, join(alphas), join(holds), join(liminf));
  return kExitOk;
}

int eta_table(Context& ctx) {
  std::optional<GTable> table;
  if (condition_integral(ctx.measure).status == ConditionStatus::kFinite) {
    table = build_g(ctx.measure, 2001);
  }
  const double lo = std::max(kGTableMinX, ctx.measure.lower_bound());
  const std::size_t m = ctx.config.grid_size;
  CsvWriter csv(ctx.out, ctx.provenance, {"r", "eta", "tail_mass", "g", "gprime"});
  for (std::size_t i = 0; i < m; ++i) {
    const double frac = static_cast<double>(i) / static_cast<double>(m - 1);
    const double r = i + 1 == m ? 1.0 : lo * std::pow(1.0 / lo, frac);
    std::optional<double> g, gp;
    if (table && r >= table->x_min()) {
      g = table->g(r);
      gp = table->gprime(r);
    }
    csv.row(r, ctx.measure.eta(r), ctx.measure.tail_mass(r), g, gp);
  }
  return kExitOk;
}

int simulate(Context& ctx) {
  const ExperimentConfig& c = ctx.config;
  const double eps = resolve_eps(c, ctx.measure);
  if (c.simulate_mode == "terminal") {
    std::vector<double> values(c.n);
    parallel_for(c.n, c.workers, [&](std::size_t i) {
      RngStream stream = derive_stream(c.seed, i, StreamPurpose::kJumps);
      values[i] = sample_terminal_value(ctx.measure, eps, c.T, stream);
    });
    CsvWriter csv(ctx.out, ctx.provenance, {"replication", "x_T"});
    for (std::size_t i = 0; i < c.n; ++i) csv.row(i, values[i]);
    return kExitOk;
  }
  CsvWriter csv(ctx.out, ctx.provenance, {"replication", "t", "x"});
  for (std::size_t i = 0; i < c.n; ++i) {
    RngStream stream = derive_stream(c.seed, i, StreamPurpose::kJumps);
    for (const JumpEvent& e : sample_path(ctx.measure, eps, c.T, stream).events) {
      csv.row(i, e.t, e.x);
    }
  }
  return kExitOk;
}

int report_violations(const CouplingSummary& s, std::ostream& err) {
  if (s.violations == 0) return kExitOk;
  err << "error: " << s.violations
      << " replication(s) violated a coupling invariant; first: " << s.first_violation
      << '\n';
  return kExitInvariantViolation;
}

int couple(Context& ctx) {
  const ExperimentConfig& c = ctx.config;
  if (c.a_grid.size() != 1) {
    throw ConfigError("couple takes a single gap a; use sweep for a grid");
  }
  const Resolved r = resolve(c, ctx.measure, c.a_grid.front());
  const CouplingSetup setup{r.a, r.delta, r.eps, c.T, c.T_max};
  const CouplingSummary s =
      run_replications(ctx.measure, setup, c.n, c.seed, c.workers, true);
  CsvWriter csv(ctx.out, ctx.provenance,
                {"replication", "coupled", "tau_delta", "tau_bar", "z_at_tau_bar", "max_z"});
  Accumulator z_exit, max_z;
  for (std::size_t i = 0; i < s.outcomes.size(); ++i) {
    const ReplicationOutcome& o = s.outcomes[i];
    csv.row(i, o.coupled_by_T, o.result.tau_delta, o.result.tau_bar,
            o.result.z_at_tau_bar, o.result.max_z);
    if (o.result.z_at_tau_bar) z_exit.add(*o.result.z_at_tau_bar);
    max_z.add(o.result.max_z);
  }
  // Column means; censored exit times count as T_max.
  std::optional<double> z_exit_mean;
  if (z_exit.count() > 0) z_exit_mean = z_exit.mean();
  csv.row("summary", 1.0 - s.p_uncoupled.mean, std::optional<double>(),
          s.exit_time.mean, z_exit_mean, max_z.mean());
  return report_violations(s, ctx.err);
}

int sweep(Context& ctx) {
  const ExperimentConfig& c = ctx.config;
  CsvWriter csv(ctx.out, ctx.provenance,
                {"a", "p_uncoupled", "p_uncoupled_stderr", "e_tau_bar",
                 "e_tau_bar_stderr", "censor_fraction", "delta", "eps", "upper_exit",
                 "upper_exit_stderr", "stopped_z", "stopped_z_stderr", "violations"});
  int code = kExitOk;
  for (double a : c.a_grid) {
    const Resolved r = resolve(c, ctx.measure, a);
    const CouplingSetup setup{r.a, r.delta, r.eps, c.T, c.T_max};
    const CouplingSummary s = run_replications(ctx.measure, setup, c.n, c.seed, c.workers);
    csv.row(a, s.p_uncoupled.mean, s.p_uncoupled.std_error, s.exit_time.mean,
            s.exit_time.std_error, s.censor_fraction, r.delta, r.eps, s.upper_exit.mean,
            s.upper_exit.std_error, s.stopped_z.mean, s.stopped_z.std_error, s.violations);
    code = std::max(code, report_violations(s, ctx.err));
  }
  return code;
}

int oracle_tv(Context& ctx) {
  const OracleGrid& g = ctx.config.oracle;
  const DensityInverter inverter(ctx.measure);
  CsvWriter csv(ctx.out, ctx.provenance, {"a", "tv", "error_bound"});
  for (double a : ctx.config.a_grid) {
    const TvEstimate tv = tv_distance(inverter, a, -g.half_width, g.half_width, g.points);
    csv.row(a, tv.tv, tv.error_bound);
  }
  return kExitOk;
}

int bound_check(Context& ctx) {
  const ExperimentConfig& c = ctx.config;
  CsvWriter csv(ctx.out, ctx.provenance,
                {"a", "tv", "p_uncoupled", "stderr", "slack", "delta", "eps",
                 "delta_allowance", "tv_half", "slack_half"});
  for (double a : c.a_grid) {
    const Resolved r = resolve(c, ctx.measure, a);
    const BoundCheck b = coupling_bound_check(ctx.measure, a, r.delta, r.eps, c.n,
                                              c.seed, c.workers, c.oracle);
    csv.row(a, b.tv.tv, b.p_uncoupled.mean, b.p_uncoupled.std_error, b.slack, r.delta,
            r.eps, b.delta_allowance, b.tv_half, b.slack_half);
  }
  return kExitOk;
}

int qv_probe(Context& ctx) {
  const ExperimentConfig& c = ctx.config;
  const double eps = resolve_eps(c, ctx.measure);
  const QvProbeResult q =
      qv_rate_probe(ctx.measure, c.probe_z, eps, c.probe_horizon, c.n, c.seed, c.workers);
  const char* verdict = q.contains_a ? (q.contains_b ? "both" : "a")
                                     : (q.contains_b ? "b" : "neither");
  CsvWriter csv(ctx.out, ctx.provenance,
                {"z", "eps", "horizon", "n", "empirical_rate", "stderr", "ci_low",
                 "ci_high", "candidate_a", "candidate_b", "contains_a", "contains_b",
                 "verdict", "multi_event_fraction"});
  csv.row(c.probe_z, eps, c.probe_horizon, c.n, q.empirical_rate.mean,
          q.empirical_rate.std_error, q.empirical_rate.ci_low, q.empirical_rate.ci_high,
          q.candidate_a, q.candidate_b, q.contains_a, q.contains_b, verdict,
          q.multi_event_fraction);
  return kExitOk;
}

using Command = std::function<int(Context&)>;

const std::map<std::string, Command>& commands() {
  static const std::map<std::string, Command> table{
      {"check-condition", check_condition}, {"eta", eta_table},
      {"simulate", simulate},               {"couple", couple},
      {"sweep", sweep},                     {"oracle-tv", oracle_tv},
      {"bound-check", bound_check},         {"qv-probe", qv_probe},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& subcommand_names() {
  static const std::vector<std::string> names{
      "check-condition", "eta", "simulate", "couple",
      "sweep", "oracle-tv", "bound-check", "qv-probe"};
  return names;
}

int run(const ExperimentConfig& config, const std::string& subcommand,
        std::ostream& out, std::ostream& err) {
  const auto it = commands().find(subcommand);
  if (it == commands().end()) {
    err << "error: unknown subcommand '" << subcommand << "'\n";
    return kExitConfigError;
  }
  try {
    config.validate();
    Context ctx{config, parse_measure(config.measure),
                std::string("levycouple ") + LEVYCOUPLE_VERSION +
                    " config_hash=" + config_hash(config) +
                    " seed=" + std::to_string(config.seed) + " subcommand=" + subcommand,
                out, err};
    return it->second(ctx);
  } catch (const InvariantViolation& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvariantViolation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  }
}

}  // namespace levycouple::cli
