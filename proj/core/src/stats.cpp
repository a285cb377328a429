#include "levycouple/stats.hpp"

#include <algorithm>
#include <cmath>

#include "levycouple/error.hpp"

namespace levycouple {
namespace {

constexpr double kZ95 = 1.96;

}  // namespace

void Accumulator::add(double value) {
  ++n_;
  const double delta = value - mean_;
  mean_ += delta / static_cast<double>(n_);
  m2_ += delta * (value - mean_);
}

void Accumulator::merge(const Accumulator& other) {
  if (other.n_ == 0) return;
  if (n_ == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(n_);
  const double nb = static_cast<double>(other.n_);
  const double total = na + nb;
  const double delta = other.mean_ - mean_;
  mean_ = (na * mean_ + nb * other.mean_) / total;
  m2_ += other.m2_ + delta * delta * na * nb / total;
  n_ += other.n_;
}

double Accumulator::variance() const {
  if (n_ < 2) return 0.0;
  return m2_ / static_cast<double>(n_ - 1);
}

MCEstimate Accumulator::estimate() const {
  if (n_ < 2) throw InsufficientDataError("aggregate needs at least two values");
  MCEstimate e;
  e.n = n_;
  e.mean = mean_;
  e.std_error = std::sqrt(variance() / static_cast<double>(n_));
  e.ci_low = e.mean - kZ95 * e.std_error;
  e.ci_high = e.mean + kZ95 * e.std_error;
  return e;
}

MCEstimate aggregate(std::span<const double> values) {
  Accumulator acc;
  for (double v : values) acc.add(v);
  return acc.estimate();
}

MCEstimate proportion(std::size_t successes, std::size_t n) {
  if (n == 0) throw InsufficientDataError("proportion needs n >= 1");
  if (successes > n) throw DomainError("successes exceed trials");
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(successes) / nn;
  MCEstimate e;
  e.n = n;
  e.mean = p;
  e.std_error = std::sqrt(p * (1.0 - p) / nn);
  if (nn * p < 10.0) {
    const double z2 = kZ95 * kZ95;
    const double denom = 1.0 + z2 / nn;
    const double centre = (p + z2 / (2.0 * nn)) / denom;
    const double half =
        kZ95 * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
    e.ci_low = std::max(0.0, centre - half);
    e.ci_high = std::min(1.0, centre + half);
  } else {
    e.ci_low = p - kZ95 * e.std_error;
    e.ci_high = p + kZ95 * e.std_error;
  }
  return e;
}

double ks_statistic(std::span<const double> sorted_samples,
                    const std::function<double(double)>& cdf) {
  if (sorted_samples.empty()) throw DomainError("ks_statistic on empty sample");
  const double n = static_cast<double>(sorted_samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted_samples.size(); ++i) {
    const double f = cdf(sorted_samples[i]);
    const double above = static_cast<double>(i + 1) / n - f;
    const double below = f - static_cast<double>(i) / n;
    d = std::max({d, above, below});
  }
  return d;
}

double ks_critical_value_1pct(std::size_t n) {
  return 1.63 / std::sqrt(static_cast<double>(n));
}

}  // namespace levycouple
