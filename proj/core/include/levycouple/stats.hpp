#ifndef LEVYCOUPLE_STATS_HPP_
#define LEVYCOUPLE_STATS_HPP_

#include <cstddef>
#include <functional>
#include <span>

namespace levycouple {

/// Monte Carlo mean with its standard error and a 95% interval.
struct MCEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
  double ci_low = 0.0;
  double ci_high = 0.0;

  bool contains(double value) const { return ci_low <= value && value <= ci_high; }
};

/// Mergeable single-pass mean/variance accumulator (Welford updates, Chan
/// merge). Merging partial accumulators in any grouping agrees with a
/// sequential pass up to rounding.
class Accumulator {
 public:
  void add(double value);
  void merge(const Accumulator& other);

  std::size_t count() const { return n_; }
  double mean() const { return mean_; }
  /// Unbiased sample variance; 0 when fewer than two values.
  double variance() const;

  /// Requires at least two values.
  MCEstimate estimate() const;

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

/// Mean, standard error (sample stdev / sqrt(n)) and normal 95% interval.
/// Throws InsufficientDataError for fewer than two values.
MCEstimate aggregate(std::span<const double> values);

/// Binomial proportion successes / n with standard error sqrt(p(1-p)/n).
/// The interval is the normal one, or Wilson's when n * p < 10.
MCEstimate proportion(std::size_t successes, std::size_t n);

/// Two-sided Kolmogorov-Smirnov statistic sup |F_n - F| for sorted samples.
double ks_statistic(std::span<const double> sorted_samples,
                    const std::function<double(double)>& cdf);

/// Asymptotic 1% critical value of the one-sample KS statistic, 1.63/sqrt(n).
double ks_critical_value_1pct(std::size_t n);

}  // namespace levycouple

#endif  // LEVYCOUPLE_STATS_HPP_
