#include "levycouple/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "levycouple/error.hpp"

namespace levycouple {
namespace {

void check_args(double eps, double horizon) {
  if (!(eps > 0.0)) throw DomainError("truncation level eps must be positive");
  if (!(horizon > 0.0)) throw DomainError("horizon must be positive");
}

long long draw_count(const SymmetricLevyMeasure& measure, double eps,
                     double horizon, RngStream& stream) {
  const double mean = jump_rate(measure, eps) * horizon;
  if (!(mean > 0.0)) return 0;
  if (!std::isfinite(mean)) throw DomainError("infinite jump rate above eps");
  std::poisson_distribution<long long> poisson(mean);
  return poisson(stream.engine());
}

double draw_jump(const SymmetricLevyMeasure& measure, double eps,
                 RngStream& stream) {
  const double u = stream.uniform();
  const bool negative = stream.coin();
  return measure.sample_jump(eps, u, negative);
}

}  // namespace

double jump_rate(const SymmetricLevyMeasure& measure, double eps) {
  if (eps >= measure.support_bound()) return 0.0;
  return 2.0 * measure.tail_mass(eps);
}

double truncation_variance(const SymmetricLevyMeasure& measure, double eps,
                           double horizon) {
  return 2.0 * measure.eta(eps) * horizon;
}

double eps_for_budget(const SymmetricLevyMeasure& measure, double budget,
                      double horizon) {
  if (!(budget > 0.0)) throw DomainError("variance budget must be positive");
  const double floor = std::max(measure.lower_bound(), 1e-300);
  double hi = std::min(1.0, measure.support_bound());
  if (truncation_variance(measure, hi, horizon) <= budget) return hi;
  double lo = hi;
  while (truncation_variance(measure, lo, horizon) > budget) {
    lo *= 0.5;
    if (lo < floor) throw DomainError("no truncation level meets the variance budget");
  }
  hi = lo * 2.0;
  while (hi - lo > 1e-9 * lo) {
    const double mid = 0.5 * (lo + hi);
    (truncation_variance(measure, mid, horizon) <= budget ? lo : hi) = mid;
  }
  return lo;
}

JumpPath sample_path(const SymmetricLevyMeasure& measure, double eps,
                     double horizon, RngStream& stream) {
  check_args(eps, horizon);
  JumpPath path{horizon, eps, {}};
  const long long k = draw_count(measure, eps, horizon, stream);
  if (k == 0) return path;
  std::vector<double> times(static_cast<std::size_t>(k));
  for (double& t : times) t = stream.uniform() * horizon;
  std::sort(times.begin(), times.end());
  path.events.reserve(times.size());
  for (double t : times) path.events.push_back({t, draw_jump(measure, eps, stream)});
  return path;
}

double terminal_value(const JumpPath& path) {
  double sum = 0.0;
  for (const auto& e : path.events) sum += e.x;
  return sum;
}

double sample_terminal_value(const SymmetricLevyMeasure& measure, double eps,
                             double horizon, RngStream& stream) {
  check_args(eps, horizon);
  const long long k = draw_count(measure, eps, horizon, stream);
  if (k == 0) return 0.0;
  stream.discard(static_cast<unsigned long long>(k));
  // Events are stored in draw order, so this matches terminal_value bit for bit.
  double sum = 0.0;
  for (long long i = 0; i < k; ++i) sum += draw_jump(measure, eps, stream);
  return sum;
}

}  // namespace levycouple
