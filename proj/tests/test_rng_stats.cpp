#include <atomic>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "levycouple/error.hpp"
#include "levycouple/parallel.hpp"
#include "levycouple/rng.hpp"
#include "levycouple/stats.hpp"

using namespace levycouple;

TEST(Rng, DerivedSeedsAreDistinctAndStable) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t rep = 0; rep < 200; ++rep) {
    for (auto purpose : {StreamPurpose::kJumps, StreamPurpose::kCoins, StreamPurpose::kProbe}) {
      for (std::uint64_t seg = 0; seg < 4; ++seg) {
        seen.insert(derive_seed(7, rep, purpose, seg));
      }
    }
  }
  EXPECT_EQ(seen.size(), 200u * 3u * 4u);
  EXPECT_EQ(derive_seed(7, 3, StreamPurpose::kCoins), derive_seed(7, 3, StreamPurpose::kCoins));
  EXPECT_NE(derive_seed(7, 3, StreamPurpose::kCoins), derive_seed(8, 3, StreamPurpose::kCoins));
}

TEST(Rng, SameSeedSameSequence) {
  RngStream a(123), b(123);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next(), b.next());
}

TEST(Rng, UniformIsOpenAndCoinIsFair) {
  RngStream s(derive_seed(1, 0, StreamPurpose::kJumps));
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = s.uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / n, 0.5, 4.0 * std::sqrt(1.0 / 12.0 / n));
  int heads = 0;
  for (int i = 0; i < n; ++i) heads += s.coin() ? 1 : 0;
  EXPECT_NEAR(static_cast<double>(heads) / n, 0.5, 4.0 * 0.5 / std::sqrt(n));
}

TEST(Rng, UniformEndpointsFromExtremeWords) {
  // The smallest and largest 52-bit words map strictly inside (0, 1).
  EXPECT_EQ((0.0 + 0.5) * 0x1.0p-52, 0x1.0p-53);
  EXPECT_LT((static_cast<double>((~0ULL) >> 12) + 0.5) * 0x1.0p-52, 1.0);
}

TEST(Accumulator, MatchesTwoPassFormulas) {
  const std::vector<double> xs{1.0, 2.0, 3.0, 4.0};
  const MCEstimate e = aggregate(xs);
  EXPECT_DOUBLE_EQ(e.mean, 2.5);
  EXPECT_NEAR(e.std_error, std::sqrt((5.0 / 3.0) / 4.0), 1e-15);
  EXPECT_EQ(e.n, 4u);
  EXPECT_NEAR(e.ci_high - e.mean, 1.96 * e.std_error, 1e-15);
}

TEST(Accumulator, MergeIsOrderIndependent) {
  std::vector<double> xs(1000);
  RngStream s(5);
  for (double& x : xs) x = std::log(s.uniform());
  Accumulator whole, left, right;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    whole.add(xs[i]);
    (i < 377 ? left : right).add(xs[i]);
  }
  Accumulator ab = left, ba = right;
  ab.merge(right);
  ba.merge(left);
  EXPECT_NEAR(ab.mean(), whole.mean(), 1e-13);
  EXPECT_NEAR(ba.variance(), whole.variance(), 1e-12);
  EXPECT_EQ(ab.count(), 1000u);
}

TEST(Accumulator, NeedsTwoValues) {
  Accumulator a;
  a.add(1.0);
  EXPECT_THROW(a.estimate(), InsufficientDataError);
  EXPECT_THROW(aggregate(std::vector<double>{}), InsufficientDataError);
}

TEST(Proportion, NormalAndWilsonIntervals) {
  const MCEstimate half = proportion(500, 1000);
  EXPECT_DOUBLE_EQ(half.mean, 0.5);
  EXPECT_NEAR(half.std_error, std::sqrt(0.25 / 1000), 1e-15);
  EXPECT_NEAR(half.ci_low, 0.5 - 1.96 * half.std_error, 1e-15);

  const MCEstimate none = proportion(0, 100);
  EXPECT_EQ(none.mean, 0.0);
  EXPECT_EQ(none.ci_low, 0.0);
  const double z2n = 1.96 * 1.96 / 100.0;
  EXPECT_NEAR(none.ci_high, z2n / (1.0 + z2n), 1e-12);
  EXPECT_THROW(proportion(3, 2), DomainError);
  EXPECT_THROW(proportion(0, 0), InsufficientDataError);
}

TEST(Ks, KnownStatistics) {
  const auto uniform_cdf = [](double x) { return std::clamp(x, 0.0, 1.0); };
  EXPECT_DOUBLE_EQ(ks_statistic(std::vector<double>{0.5}, uniform_cdf), 0.5);
  std::vector<double> mid(100);
  for (std::size_t i = 0; i < mid.size(); ++i) mid[i] = (static_cast<double>(i) + 0.5) / 100.0;
  EXPECT_NEAR(ks_statistic(mid, uniform_cdf), 0.005, 1e-15);
  EXPECT_NEAR(ks_critical_value_1pct(10000), 0.0163, 1e-12);
  EXPECT_THROW(ks_statistic(std::vector<double>{}, uniform_cdf), DomainError);
}

TEST(ParallelFor, VisitsEveryIndexOnce) {
  for (std::size_t workers : {1u, 3u, 8u}) {
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(hits.size(), workers, [&](std::size_t i) { hits[i]++; });
    for (auto& h : hits) EXPECT_EQ(h.load(), 1);
  }
}

TEST(ParallelFor, RethrowsFirstError) {
  EXPECT_THROW(parallel_for(100, 4,
                            [](std::size_t i) {
                              if (i == 17) throw std::runtime_error("boom");
                            }),
               std::runtime_error);
}
