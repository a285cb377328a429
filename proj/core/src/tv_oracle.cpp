#include "levycouple/tv_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <variant>

#include "levycouple/coupling.hpp"
#include "levycouple/error.hpp"
#include "quadrature.hpp"

namespace levycouple {
namespace {

constexpr double kPi = std::numbers::pi;
// Below y = u x = kSeriesCut the integrand is replaced by -(ux)^2/2 n(x);
// the neglected quartic term is ~kSeriesCut^2/12 relative to that piece.
constexpr double kSeriesCut = 1e-4;
// Half-periods of cos integrated directly before switching to the
// oscillatory tail.
constexpr int kDirectHalfPeriods = 4;
constexpr int kTailHalfPeriods = 40;
constexpr double kPhiFloor = 1e-12;

void require_oracle_family(const SymmetricLevyMeasure& m) {
  const auto& fam = m.family();
  if (!std::holds_alternative<StableFamily>(fam) &&
      !std::holds_alternative<TruncatedStableFamily>(fam)) {
    throw OracleUnavailableError("Fourier oracle supports only stable and "
                                 "truncated-stable measures, not " + m.id());
  }
}

// Repeated averaging of successive partial sums of an alternating series.
double accelerate(std::vector<double> partial) {
  while (partial.size() > 1) {
    for (std::size_t i = 0; i + 1 < partial.size(); ++i) {
      partial[i] = 0.5 * (partial[i] + partial[i + 1]);
    }
    partial.pop_back();
  }
  return partial.front();
}

// Trapezoid rule for int |d| using every `stride`-th node. Cells where d
// changes sign use the exact integral of |linear interpolant|, so the kink
// does not spoil the h^2 error and Richardson extrapolation stays valid.
double abs_trapezoid(const std::vector<double>& d, std::size_t stride, double dx) {
  const double h = dx * static_cast<double>(stride);
  double total = 0.0;
  for (std::size_t i = stride; i < d.size(); i += stride) {
    const double p = d[i - stride], q = d[i];
    if ((p < 0.0) != (q < 0.0) && p != 0.0 && q != 0.0) {
      total += h * (p * p + q * q) / (2.0 * (std::abs(p) + std::abs(q)));
    } else {
      total += 0.5 * h * (std::abs(p) + std::abs(q));
    }
  }
  return total;
}

double sinc(double s) { return std::abs(s) < 1e-8 ? 1.0 - s * s / 6.0 : std::sin(s) / s; }

}  // namespace

double char_exponent(const SymmetricLevyMeasure& measure, double u) {
  require_oracle_family(measure);
  u = std::abs(u);
  if (u == 0.0) return 0.0;

  // Work in y = u x with weight m(y) = n(y/u)/u.
  const double y_sup = u * measure.support_bound();
  auto m = [&](double y) { return measure.density(y / u) / u; };

  const double y_series = std::min(kSeriesCut, y_sup);
  double total = -0.5 * u * u * measure.eta(y_series / u);
  if (y_sup <= y_series) return 2.0 * total;

  const double y_direct = std::min(y_sup, (kDirectHalfPeriods + 0.5) * kPi);
  total += detail::geometric_panels(
      [&](double y) { return (std::cos(y) - 1.0) * m(y); }, y_series, y_direct,
      std::log(10.0) / 16.0);
  if (y_sup <= y_direct) return 2.0 * total;

  // Remaining mass term exactly, oscillatory part over half-periods.
  total -= measure.tail_mass(y_direct / u);
  auto half_period = [&](double lo, double hi) {
    return detail::gauss15([&](double y) { return std::cos(y) * m(y); }, lo, hi);
  };
  if (std::isfinite(y_sup)) {
    for (double lo = y_direct; lo < y_sup; lo += kPi) {
      total += half_period(lo, std::min(lo + kPi, y_sup));
    }
    return 2.0 * total;
  }
  std::vector<double> partial;
  double running = 0.0;
  for (int k = 0; k < kTailHalfPeriods; ++k) {
    const double lo = y_direct + k * kPi;
    running += half_period(lo, lo + kPi);
    partial.push_back(running);
  }
  total += accelerate(std::vector<double>(partial.end() - 20, partial.end()));
  return 2.0 * total;
}

double char_fn(const SymmetricLevyMeasure& measure, double u) {
  return std::exp(char_exponent(measure, u));
}

DensityInverter::DensityInverter(const SymmetricLevyMeasure& measure,
                                 std::size_t u_panels) {
  require_oracle_family(measure);
  if (u_panels < 16) throw DomainError("DensityInverter needs at least 16 panels");
  double hi = 1.0;
  while (char_fn(measure, hi) >= kPhiFloor) {
    hi *= 2.0;
    if (hi > 1e6) {
      throw OracleUnavailableError("characteristic function does not decay; "
                                   "law may not have a density");
    }
  }
  double lo = hi / 2.0;
  for (int it = 0; it < 40; ++it) {
    const double mid = 0.5 * (lo + hi);
    (char_fn(measure, mid) >= kPhiFloor ? lo : hi) = mid;
  }
  u_max_ = hi;
  if (!(char_fn(measure, u_max_) <= std::pow(u_max_, -1.01))) {
    throw OracleUnavailableError("characteristic function decays too slowly");
  }
  step_ = u_max_ / static_cast<double>(u_panels);
  phi_.resize(u_panels + 1);
  for (std::size_t k = 0; k <= u_panels; ++k) {
    phi_[k] = char_fn(measure, step_ * static_cast<double>(k));
  }
}

double DensityInverter::density(double x) const {
  // f(x) = (h/pi) sinc^2(xh/2) [phi_0/2 + sum_k phi_k cos(k h x)], the exact
  // inverse transform of the piecewise-linear interpolant of phi.
  const double theta = step_ * x;
  const double c = std::cos(theta);
  double b1 = 0.0, b2 = 0.0;
  for (std::size_t k = phi_.size() - 1; k >= 1; --k) {
    const double b0 = phi_[k] + 2.0 * c * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  const double sum = 0.5 * phi_[0] + b1 * c - b2;
  const double s = sinc(0.5 * theta);
  return step_ / kPi * s * s * sum;
}

double DensityInverter::l2_norm_squared() const {
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < phi_.size(); ++k) {
    const double p = phi_[k], q = phi_[k + 1];
    total += step_ * (p * p + p * q + q * q) / 3.0;
  }
  return total / kPi;
}

double DensityGrid::cdf(double at) const {
  const double outside = 0.5 * (1.0 - mass);
  if (at <= x.front()) return outside;
  if (at >= x.back()) return outside + mass;
  const double dx = x[1] - x[0];
  const std::size_t i = std::min(
      static_cast<std::size_t>((at - x.front()) / dx), x.size() - 2);
  const double w = (at - x[i]) / dx;
  return outside + cumulative[i] + w * (cumulative[i + 1] - cumulative[i]);
}

DensityGrid invert_density(const SymmetricLevyMeasure& measure, double x_lo,
                           double x_hi, std::size_t grid_size) {
  if (!(x_hi > x_lo) || grid_size < 2) {
    throw DomainError("invert_density needs x_lo < x_hi and two grid points");
  }
  const DensityInverter inverter(measure);
  DensityGrid grid;
  grid.x.resize(grid_size);
  grid.f.resize(grid_size);
  grid.cumulative.assign(grid_size, 0.0);
  const double dx = (x_hi - x_lo) / static_cast<double>(grid_size - 1);
  for (std::size_t i = 0; i < grid_size; ++i) {
    grid.x[i] = x_lo + dx * static_cast<double>(i);
    grid.f[i] = inverter.density(grid.x[i]);
  }
  for (std::size_t i = 1; i < grid_size; ++i) {
    grid.cumulative[i] = grid.cumulative[i - 1] + 0.5 * dx * (grid.f[i - 1] + grid.f[i]);
  }
  grid.mass = grid.cumulative.back();
  return grid;
}

TvEstimate tv_distance(const DensityInverter& inverter, double a, double x_lo,
                       double x_hi, std::size_t grid_size) {
  if (!(x_hi > x_lo) || grid_size < 3 || grid_size % 2 == 0) {
    throw DomainError("tv_distance needs x_lo < x_hi and an odd grid of >= 3 points");
  }
  a = std::abs(a);
  if (a == 0.0) return {};
  const double dx = (x_hi - x_lo) / static_cast<double>(grid_size - 1);
  std::vector<double> diff(grid_size);
  for (std::size_t i = 0; i < grid_size; ++i) {
    const double x = x_lo + dx * static_cast<double>(i);
    diff[i] = inverter.density(x - a) - inverter.density(x);
  }
  const double fine = abs_trapezoid(diff, 1, dx);
  const double coarse = abs_trapezoid(diff, 2, dx);
  const double tail = a * (inverter.density(x_hi - a) + inverter.density(x_lo));
  TvEstimate est;
  est.tv = fine + (fine - coarse) / 3.0;
  est.error_bound = tail + std::abs(fine - coarse) / 3.0;
  return est;
}

TvEstimate tv_distance(const SymmetricLevyMeasure& measure, double a,
                       double x_lo, double x_hi, std::size_t grid_size) {
  if (a == 0.0) return {};
  return tv_distance(DensityInverter(measure), a, x_lo, x_hi, grid_size);
}

BoundCheck coupling_bound_check(const SymmetricLevyMeasure& measure, double a,
                                double delta, double eps, std::size_t n,
                                std::uint64_t seed, std::size_t workers,
                                OracleGrid grid) {
  BoundCheck check;
  check.a = a;
  if (a == 0.0) {
    check.p_uncoupled = {0.0, 0.0, n, 0.0, 0.0};
    return check;
  }
  const DensityInverter inverter(measure);
  const double w = grid.half_width;
  check.tv = tv_distance(inverter, a, -w, w, grid.points);
  check.delta_allowance = tv_distance(inverter, delta, -w, w, grid.points).tv;
  check.p_uncoupled =
      estimate_uncoupled_probability(measure, a, delta, eps, 1.0, n, seed, workers);
  check.slack = 2.0 * (check.p_uncoupled.mean + 3.0 * check.p_uncoupled.std_error) +
                check.delta_allowance - check.tv.tv;
  check.tv_half = 0.5 * check.tv.tv;
  check.slack_half = 0.5 * check.slack;
  return check;
}

}  // namespace levycouple
