#ifndef LEVYCOUPLE_COUPLING_HPP_
#define LEVYCOUPLE_COUPLING_HPP_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "levycouple/levy_measure.hpp"
#include "levycouple/rng.hpp"
#include "levycouple/simulator.hpp"
#include "levycouple/stats.hpp"

namespace levycouple {

/// Copy rule for the mirror coupling: the second process repeats a jump of
/// the first whenever the jump is larger than half the current gap z;
/// otherwise it takes the jump with an independent fair sign. A jump of
/// exactly z/2 goes to the mirror branch.
inline bool copies_jump(double z, double dx) { return z / 2 < std::abs(dx); }

/// Gap increment (sigma - 1) dx for a mirrored jump with coin sigma.
inline double mirrored_increment(double dx, bool sign_flipped) {
  return sign_flipped ? -2.0 * dx : 0.0;
}

struct InvariantFlags {
  bool z_nonnegative = true;   // Z >= 0 after every event
  bool jump_bounded = true;    // |dZ| <= Z- on every event
  bool exit_below_two = true;  // Z at the exit time < 2

  bool ok() const { return z_nonnegative && jump_bounded && exit_below_two; }
  bool operator==(const InvariantFlags&) const = default;
};

/// Outcome of one coupling run. Times are absent when censored.
struct CouplingResult {
  double a = 0.0;
  bool coupled = false;               // Z <= delta reached
  std::optional<double> tau_delta;    // first time Z <= delta
  std::optional<double> tau_bar;      // first time Z <= delta or Z >= 1
  std::optional<double> z_at_tau_bar;
  double z_final = 0.0;               // Z at the end of the processed span
  double max_z = 0.0;
  double mirrored_qv_neg = 0.0;       // sum of dZ^2 over events with dZ < 0
  std::size_t mirrored_events = 0;
  InvariantFlags flags;
  std::string violation;              // first failed check, if any

  bool operator==(const CouplingResult&) const = default;
};

/// Event-driven state of the gap process Z = Y - X. Paths may be fed in
/// consecutive segments; Z is frozen once it drops to delta or below, and
/// processing stops at the first invariant violation.
class CouplingEngine {
 public:
  /// Requires 0 < a < 1 and delta > 0.
  CouplingEngine(double a, double delta);

  /// Processes the events of `segment`, shifting their times by
  /// `time_offset`. Coins are drawn lazily, one per mirrored event.
  void advance(const JumpPath& segment, double time_offset, RngStream& coins);

  double z() const { return result_.z_final; }
  bool coupled() const { return result_.coupled; }
  bool exited() const { return result_.tau_bar.has_value(); }
  bool aborted() const { return !result_.flags.ok(); }
  const CouplingResult& result() const { return result_; }

 private:
  void record_exit(double t);

  double delta_;
  CouplingResult result_;
};

/// Runs the coupling on a single path. Requires delta >= 2 path.eps and
/// 0 < a < 1 (ConfigError otherwise).
CouplingResult run_coupling(const JumpPath& path, RngStream& coins, double a,
                            double delta);

/// Parameters of one Monte Carlo experiment. Each replication is simulated
/// on unit-length path segments (plus a break at T) out to
/// max(T, T_max), stopping early once nothing observable can change.
struct CouplingSetup {
  double a = 0.0;
  double delta = 0.0;
  double eps = 0.0;
  double T = 1.0;       // observation time for coupling / maximal checks
  double T_max = 64.0;  // censoring horizon for the exit time

  /// Throws ConfigError on a precondition violation.
  void validate() const;
};

struct ReplicationOutcome {
  CouplingResult result;
  bool coupled_by_T = false;
  double max_z_by_T = 0.0;
  double z_stopped_at_T = 0.0;  // Z at T ^ tau_bar
};

/// One replication with streams derived from (seed, replication).
ReplicationOutcome simulate_replication(const SymmetricLevyMeasure& measure,
                                        const CouplingSetup& setup,
                                        std::uint64_t seed,
                                        std::uint64_t replication);

struct CouplingSummary {
  std::size_t n = 0;
  MCEstimate p_uncoupled;     // P(tau_delta > T)
  MCEstimate exit_time;       // E min(tau_bar, T_max)
  double censor_fraction = 0.0;
  MCEstimate stopped_z;       // E Z_{T ^ tau_bar}
  MCEstimate upper_exit;      // P(max_{t <= T} Z_t >= 1)
  std::size_t violations = 0;
  std::string first_violation;
  std::vector<ReplicationOutcome> outcomes;  // filled when requested
};

/// Runs n >= 1 replications. Results are independent of `workers`.
CouplingSummary run_replications(const SymmetricLevyMeasure& measure,
                                 const CouplingSetup& setup, std::size_t n,
                                 std::uint64_t seed, std::size_t workers = 0,
                                 bool keep_outcomes = false);

/// P(tau_delta > T) with binomial standard error.
MCEstimate estimate_uncoupled_probability(const SymmetricLevyMeasure& measure,
                                          double a, double delta, double eps,
                                          double T, std::size_t n,
                                          std::uint64_t seed,
                                          std::size_t workers = 0);

struct ExitTimeEstimate {
  MCEstimate mean;  // of min(tau_bar, T_max)
  double censor_fraction = 0.0;
};

ExitTimeEstimate estimate_exit_time(const SymmetricLevyMeasure& measure,
                                    double a, double delta, double eps,
                                    double T_max, std::size_t n,
                                    std::uint64_t seed, std::size_t workers = 0);

/// Mean of Z_{t ^ tau_bar}; equals a up to Monte Carlo error and the delta
/// absorption bias.
MCEstimate martingale_check(const SymmetricLevyMeasure& measure, double a,
                            double delta, double eps, double t, std::size_t n,
                            std::uint64_t seed, std::size_t workers = 0);

/// Empirical rate of sum (dZ)^2 1{dZ < 0} started from Z = z, next to the
/// two candidate compensator rates, both evaluated on the eps-truncated
/// measure (eta_eps(r) = eta(r) - eta(min(r, eps))):
///   candidate_a = 2 eta_eps(z/2)  (mirrored jumps are at most z/2, dZ = -2 dX)
///   candidate_b = eta_eps(z) / 2
struct QvProbeResult {
  MCEstimate empirical_rate;
  double candidate_a = 0.0;
  double candidate_b = 0.0;
  double multi_event_fraction = 0.0;  // replications with > 1 move of Z
  bool contains_a = false;
  bool contains_b = false;
};

QvProbeResult qv_rate_probe(const SymmetricLevyMeasure& measure, double z,
                            double eps, double horizon, std::size_t n,
                            std::uint64_t seed, std::size_t workers = 0);

}  // namespace levycouple

#endif  // LEVYCOUPLE_COUPLING_HPP_
