#include "levycouple/coupling.hpp"

#include <algorithm>
#include <sstream>

#include "levycouple/error.hpp"
#include "levycouple/parallel.hpp"

namespace levycouple {
namespace {

void check_gap(double a) {
  if (!(a > 0.0 && a < 1.0)) {
    throw ConfigError("initial gap a must lie in (0, 1)");
  }
}

std::string describe(const char* what, double t, double z, double dz) {
  std::ostringstream os;
  os.precision(17);
  os << what << " at t=" << t << " (Z-=" << z << ", dZ=" << dz << ")";
  return os.str();
}

// eta of nu restricted to |x| > eps.
double truncated_eta(const SymmetricLevyMeasure& m, double r, double eps) {
  return m.eta(r) - m.eta(std::min(r, eps));
}

}  // namespace

CouplingEngine::CouplingEngine(double a, double delta) : delta_(delta) {
  check_gap(a);
  if (!(delta > 0.0)) throw ConfigError("coupling threshold delta must be positive");
  result_.a = a;
  result_.z_final = a;
  result_.max_z = a;
  if (a <= delta) {
    result_.coupled = true;
    result_.tau_delta = 0.0;
    record_exit(0.0);
  }
}

void CouplingEngine::record_exit(double t) {
  result_.tau_bar = t;
  result_.z_at_tau_bar = result_.z_final;
  if (!(result_.z_final < 2.0)) {
    result_.flags.exit_below_two = false;
    result_.violation = describe("exit value not below 2", t, result_.z_final, 0.0);
  }
}

void CouplingEngine::advance(const JumpPath& segment, double time_offset,
                             RngStream& coins) {
  for (const JumpEvent& e : segment.events) {
    if (result_.coupled || aborted()) return;
    const double z = result_.z_final;
    if (copies_jump(z, e.x)) continue;
    ++result_.mirrored_events;
    const double dz = mirrored_increment(e.x, coins.coin());
    if (dz == 0.0) continue;
    const double t = time_offset + e.t;
    if (!(std::abs(dz) <= z)) {
      result_.flags.jump_bounded = false;
      result_.violation = describe("|dZ| exceeds Z-", t, z, dz);
      return;
    }
    const double next = z + dz;
    if (!(next >= 0.0)) {
      result_.flags.z_nonnegative = false;
      result_.violation = describe("Z became negative", t, z, dz);
      return;
    }
    if (dz < 0.0) result_.mirrored_qv_neg += dz * dz;
    result_.z_final = next;
    result_.max_z = std::max(result_.max_z, next);
    if (!result_.tau_bar && (next <= delta_ || next >= 1.0)) record_exit(t);
    if (next <= delta_) {
      result_.coupled = true;
      result_.tau_delta = t;
    }
  }
}

CouplingResult run_coupling(const JumpPath& path, RngStream& coins, double a,
                            double delta) {
  check_gap(a);
  if (!(delta >= 2.0 * path.eps)) {
    throw ConfigError("delta must be at least 2 eps");
  }
  CouplingEngine engine(a, delta);
  engine.advance(path, 0.0, coins);
  return engine.result();
}

void CouplingSetup::validate() const {
  check_gap(a);
  if (!(eps > 0.0)) throw ConfigError("truncation level eps must be positive");
  if (!(delta > 0.0)) throw ConfigError("coupling threshold delta must be positive");
  if (!(delta >= 2.0 * eps)) throw ConfigError("delta must be at least 2 eps");
  if (!(T >= 0.0) || !(T_max >= 0.0)) {
    throw ConfigError("horizons T and T_max must be nonnegative");
  }
}

ReplicationOutcome simulate_replication(const SymmetricLevyMeasure& measure,
                                        const CouplingSetup& setup,
                                        std::uint64_t seed,
                                        std::uint64_t replication) {
  CouplingEngine engine(setup.a, setup.delta);
  ReplicationOutcome out;
  bool snapped = false;
  auto snapshot = [&] {
    const CouplingResult& r = engine.result();
    out.coupled_by_T = r.tau_delta && *r.tau_delta <= setup.T;
    out.max_z_by_T = r.max_z;
    out.z_stopped_at_T =
        (r.tau_bar && *r.tau_bar <= setup.T) ? *r.z_at_tau_bar : r.z_final;
    snapped = true;
  };

  const double end = std::max(setup.T, setup.T_max);
  const bool moves = jump_rate(measure, setup.eps) > 0.0;
  if (setup.T == 0.0) snapshot();
  RngStream coins = derive_stream(seed, replication, StreamPurpose::kCoins);
  double start = 0.0;
  std::uint64_t k = 0;
  while (moves && start < end) {
    double stop = std::min(std::floor(start) + 1.0, end);
    if (start < setup.T && stop > setup.T) stop = setup.T;
    RngStream jumps = derive_stream(seed, replication, StreamPurpose::kJumps, k++);
    const JumpPath path = sample_path(measure, setup.eps, stop - start, jumps);
    engine.advance(path, start, coins);
    start = stop;
    if (!snapped && start >= setup.T) snapshot();
    if (engine.aborted() || engine.coupled()) break;
    if (start >= setup.T && engine.exited()) break;
  }
  if (!snapped) snapshot();
  out.result = engine.result();
  return out;
}

CouplingSummary run_replications(const SymmetricLevyMeasure& measure,
                                 const CouplingSetup& setup, std::size_t n,
                                 std::uint64_t seed, std::size_t workers,
                                 bool keep_outcomes) {
  setup.validate();
  if (n == 0) throw DomainError("replication count must be positive");
  std::vector<ReplicationOutcome> outcomes(n);
  parallel_for(n, workers, [&](std::size_t i) {
    outcomes[i] = simulate_replication(measure, setup, seed, i);
  });

  CouplingSummary s;
  s.n = n;
  std::size_t uncoupled = 0, censored = 0, upper = 0;
  Accumulator exit_time, stopped;
  for (const ReplicationOutcome& o : outcomes) {
    if (!o.coupled_by_T) ++uncoupled;
    if (!o.result.tau_bar) ++censored;
    if (o.max_z_by_T >= 1.0) ++upper;
    exit_time.add(o.result.tau_bar.value_or(setup.T_max));
    stopped.add(o.z_stopped_at_T);
    if (!o.result.flags.ok()) {
      if (s.violations == 0) s.first_violation = o.result.violation;
      ++s.violations;
    }
  }
  s.p_uncoupled = proportion(uncoupled, n);
  s.upper_exit = proportion(upper, n);
  s.censor_fraction = static_cast<double>(censored) / static_cast<double>(n);
  if (n >= 2) {
    s.exit_time = exit_time.estimate();
    s.stopped_z = stopped.estimate();
  } else {
    s.exit_time = {exit_time.mean(), 0.0, 1, exit_time.mean(), exit_time.mean()};
    s.stopped_z = {stopped.mean(), 0.0, 1, stopped.mean(), stopped.mean()};
  }
  if (keep_outcomes) s.outcomes = std::move(outcomes);
  return s;
}

namespace {

void throw_on_violation(const CouplingSummary& s) {
  if (s.violations > 0) {
    throw InvariantViolation(std::to_string(s.violations) +
                             " replication(s) violated a coupling invariant: " +
                             s.first_violation);
  }
}

}  // namespace

MCEstimate estimate_uncoupled_probability(const SymmetricLevyMeasure& measure,
                                          double a, double delta, double eps,
                                          double T, std::size_t n,
                                          std::uint64_t seed,
                                          std::size_t workers) {
  if (n == 0) throw DomainError("replication count must be positive");
  const CouplingSetup setup{a, delta, eps, T, T};
  const CouplingSummary s = run_replications(measure, setup, n, seed, workers);
  throw_on_violation(s);
  return s.p_uncoupled;
}

ExitTimeEstimate estimate_exit_time(const SymmetricLevyMeasure& measure,
                                    double a, double delta, double eps,
                                    double T_max, std::size_t n,
                                    std::uint64_t seed, std::size_t workers) {
  if (!(T_max > 0.0)) throw ConfigError("censoring horizon T_max must be positive");
  const CouplingSetup setup{a, delta, eps, 0.0, T_max};
  const CouplingSummary s = run_replications(measure, setup, n, seed, workers);
  throw_on_violation(s);
  return {s.exit_time, s.censor_fraction};
}

MCEstimate martingale_check(const SymmetricLevyMeasure& measure, double a,
                            double delta, double eps, double t, std::size_t n,
                            std::uint64_t seed, std::size_t workers) {
  if (n < 2) throw InsufficientDataError("martingale_check needs n >= 2");
  const CouplingSetup setup{a, delta, eps, t, t};
  const CouplingSummary s = run_replications(measure, setup, n, seed, workers);
  throw_on_violation(s);
  return s.stopped_z;
}

QvProbeResult qv_rate_probe(const SymmetricLevyMeasure& measure, double z,
                            double eps, double horizon, std::size_t n,
                            std::uint64_t seed, std::size_t workers) {
  if (!(z > 0.0 && z < 1.0)) throw ConfigError("probe start z must lie in (0, 1)");
  if (!(eps > 0.0 && eps <= z / 8.0)) {
    throw ConfigError("probe requires 0 < eps <= z/8");
  }
  if (!(horizon > 0.0)) throw ConfigError("probe horizon must be positive");
  if (n < 2) throw InsufficientDataError("qv_rate_probe needs n >= 2");

  std::vector<double> rates(n);
  std::vector<char> multi(n, 0);
  parallel_for(n, workers, [&](std::size_t i) {
    RngStream jumps = derive_stream(seed, i, StreamPurpose::kProbe);
    RngStream coins = derive_stream(seed, i, StreamPurpose::kCoins);
    const JumpPath path = sample_path(measure, eps, horizon, jumps);
    double gap = z, accumulated = 0.0;
    std::size_t moves = 0;
    for (const JumpEvent& e : path.events) {
      if (copies_jump(gap, e.x)) continue;
      const double dz = mirrored_increment(e.x, coins.coin());
      if (dz == 0.0) continue;
      if (dz < 0.0) accumulated += dz * dz;
      gap += dz;
      ++moves;
    }
    rates[i] = accumulated / horizon;
    multi[i] = moves > 1 ? 1 : 0;
  });

  QvProbeResult r;
  r.empirical_rate = aggregate(rates);
  r.candidate_a = 2.0 * truncated_eta(measure, z / 2.0, eps);
  r.candidate_b = truncated_eta(measure, z, eps) / 2.0;
  std::size_t multi_count = 0;
  for (char m : multi) multi_count += static_cast<std::size_t>(m);
  r.multi_event_fraction = static_cast<double>(multi_count) / static_cast<double>(n);
  r.contains_a = r.empirical_rate.contains(r.candidate_a);
  r.contains_b = r.empirical_rate.contains(r.candidate_b);
  return r;
}

}  // namespace levycouple
