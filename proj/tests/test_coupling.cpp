#include <cmath>

#include <gtest/gtest.h>

#include "levycouple/coupling.hpp"
#include "levycouple/error.hpp"

using namespace levycouple;

TEST(CouplingRule, CopyAndMirror) {
  EXPECT_TRUE(copies_jump(0.4, 0.3));
  EXPECT_TRUE(copies_jump(0.4, -0.3));
  EXPECT_FALSE(copies_jump(0.4, 0.2));  // exactly z/2 is mirrored
  EXPECT_FALSE(copies_jump(0.4, -0.1));
  EXPECT_EQ(mirrored_increment(0.1, true), -0.2);
  EXPECT_EQ(mirrored_increment(-0.1, true), 0.2);
  EXPECT_EQ(mirrored_increment(0.1, false), 0.0);
}

TEST(CouplingEngine, HandBuiltPath) {
  // Z = 0.5: jump 0.3 is copied, jump 0.2 mirrored, etc. Coins replayed
  // from an identical stream.
  JumpPath path{1.0, 0.01, {{0.1, 0.3}, {0.2, 0.2}, {0.3, -0.05}, {0.4, 0.1}, {0.9, 0.02}}};
  RngStream coins(77), replay(77);
  const CouplingResult r = run_coupling(path, coins, 0.5, 0.02);

  double z = 0.5, qv = 0.0;
  std::size_t mirrored = 0;
  std::optional<double> tau;
  for (const auto& e : path.events) {
    if (z <= 0.02) break;
    if (z / 2 < std::abs(e.x)) continue;
    ++mirrored;
    if (replay.coin()) {
      const double dz = -2.0 * e.x;
      if (dz < 0) qv += dz * dz;
      z += dz;
      if (z <= 0.02) tau = e.t;
    }
  }
  EXPECT_DOUBLE_EQ(r.z_final, z);
  EXPECT_DOUBLE_EQ(r.mirrored_qv_neg, qv);
  EXPECT_EQ(r.mirrored_events, mirrored);
  EXPECT_EQ(r.tau_delta, tau);
  EXPECT_TRUE(r.flags.ok());
}

TEST(CouplingEngine, CoupledAtStartWhenGapBelowDelta) {
  JumpPath path{1.0, 0.01, {{0.5, 0.01}}};
  RngStream coins(1);
  const CouplingResult r = run_coupling(path, coins, 0.03, 0.05);
  EXPECT_TRUE(r.coupled);
  EXPECT_EQ(r.tau_delta, 0.0);
  EXPECT_EQ(r.tau_bar, 0.0);
  EXPECT_EQ(r.mirrored_events, 0u);
}

TEST(CouplingEngine, Preconditions) {
  JumpPath path{1.0, 0.01, {}};
  RngStream coins(1);
  EXPECT_THROW(run_coupling(path, coins, 1.0, 0.05), ConfigError);
  EXPECT_THROW(run_coupling(path, coins, 0.0, 0.05), ConfigError);
  EXPECT_THROW(run_coupling(path, coins, 0.5, 0.015), ConfigError);
  EXPECT_THROW((CouplingSetup{0.5, 0.01, 0.01, 1.0, 64.0}.validate()), ConfigError);
}

TEST(CouplingEngine, PathwiseInvariantsHold) {
  const auto m = SymmetricLevyMeasure::stable(1.0, 1.0);
  const CouplingSetup setup{0.3, 0.03, 0.005, 1.0, 64.0};
  const CouplingSummary s = run_replications(m, setup, 5000, 21, 1, true);
  EXPECT_EQ(s.violations, 0u);
  for (const auto& o : s.outcomes) {
    if (o.result.z_at_tau_bar) {
      EXPECT_LT(*o.result.z_at_tau_bar, 2.0);
      EXPECT_TRUE(*o.result.z_at_tau_bar <= 0.03 || *o.result.z_at_tau_bar >= 1.0);
    }
    EXPECT_GE(o.result.z_final, 0.0);
    if (o.result.tau_delta && o.result.tau_bar) {
      EXPECT_LE(*o.result.tau_bar, *o.result.tau_delta);
    }
  }
}

TEST(Replications, IndependentOfWorkerCount) {
  const auto m = SymmetricLevyMeasure::power_log(0.5);
  const CouplingSetup setup{0.2, 0.02, 0.01, 1.0, 8.0};
  const CouplingSummary one = run_replications(m, setup, 300, 5, 1, true);
  const CouplingSummary four = run_replications(m, setup, 300, 5, 4, true);
  ASSERT_EQ(one.outcomes.size(), four.outcomes.size());
  for (std::size_t i = 0; i < one.outcomes.size(); ++i) {
    EXPECT_EQ(one.outcomes[i].result, four.outcomes[i].result);
  }
  EXPECT_EQ(one.p_uncoupled.mean, four.p_uncoupled.mean);
  EXPECT_EQ(one.exit_time.mean, four.exit_time.mean);
}

TEST(Replications, ZeroRateMeasureNeverCouples) {
  const auto m = SymmetricLevyMeasure::truncated_stable(1.0, 1.0, 0.01);
  const MCEstimate p = estimate_uncoupled_probability(m, 0.5, 0.05, 0.02, 1.0, 50, 3);
  EXPECT_EQ(p.mean, 1.0);
}

TEST(Replications, MartingaleIdentity) {
  const auto m = SymmetricLevyMeasure::stable(1.0, 1.0);
  const double a = 0.3, delta = 0.03;
  const MCEstimate z = martingale_check(m, a, delta, 0.015, 1.0, 20000, 8);
  EXPECT_NEAR(z.mean, a, 4.0 * z.std_error + delta);
}

TEST(Replications, ExitTimeAndMaximalInequality) {
  const auto m = SymmetricLevyMeasure::stable(1.0, 1.0);
  const CouplingSetup setup{0.2, 0.02, 0.01, 1.0, 64.0};
  const CouplingSummary s = run_replications(m, setup, 10000, 12);
  EXPECT_LE(s.upper_exit.mean, 0.2 + 3.0 * s.upper_exit.std_error);
  EXPECT_GT(s.exit_time.mean, 0.0);
  EXPECT_LE(s.censor_fraction, 0.01);
  EXPECT_LE(s.p_uncoupled.mean,
            s.exit_time.mean + 0.2 + 3.0 * (s.p_uncoupled.std_error + s.exit_time.std_error) +
                s.censor_fraction);
  const ExitTimeEstimate e = estimate_exit_time(m, 0.2, 0.02, 0.01, 64.0, 2000, 12);
  EXPECT_NEAR(e.mean.mean, s.exit_time.mean, 4.0 * (e.mean.std_error + s.exit_time.std_error));
}

TEST(QvProbe, PreconditionsAndZeroRate) {
  const auto m = SymmetricLevyMeasure::stable(1.0, 1.0);
  EXPECT_THROW(qv_rate_probe(m, 0.5, 0.1, 0.01, 100, 1), ConfigError);
  EXPECT_THROW(qv_rate_probe(m, 1.0, 0.01, 0.01, 100, 1), ConfigError);
  EXPECT_THROW(qv_rate_probe(m, 0.5, 0.01, 0.01, 1, 1), InsufficientDataError);
  const auto none = SymmetricLevyMeasure::truncated_stable(1.0, 1.0, 0.005);
  const QvProbeResult q = qv_rate_probe(none, 0.5, 0.01, 0.01, 100, 1);
  EXPECT_EQ(q.empirical_rate.mean, 0.0);
  EXPECT_EQ(q.candidate_a, 0.0);
  EXPECT_EQ(q.candidate_b, 0.0);
}

TEST(QvProbe, CandidatesOnTruncatedMeasure) {
  const auto m = SymmetricLevyMeasure::stable(1.0, 1.0);
  const QvProbeResult q = qv_rate_probe(m, 0.8, 0.01, 0.01, 2000, 2);
  EXPECT_NEAR(q.candidate_a, 2.0 * (0.4 - 0.01), 1e-15);
  EXPECT_NEAR(q.candidate_b, (0.8 - 0.01) / 2.0, 1e-15);
  EXPECT_EQ(q.contains_a, q.empirical_rate.contains(q.candidate_a));
}
