#include "levycouple/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "levycouple/error.hpp"
#include "quadrature.hpp"

namespace levycouple {
namespace {

const double kLn10 = std::log(10.0);
constexpr int kPanelsPerDecade = 64;
constexpr int kMaxDecades = 140;

// h(t) = r^2 / eta(r) with r = exp(-t); the integrand of the condition
// integral after the substitution r = exp(-t).
double log_integrand(const SymmetricLevyMeasure& m, double t) {
  const double r = std::exp(-t);
  const double e = m.eta(r);
  if (!(e > 0.0)) {
    std::ostringstream os;
    os << "eta vanishes at r = " << r << "; the condition integral is undefined";
    throw InvalidMeasureError(os.str());
  }
  return r * r / e;
}

// Least-squares slope of ys against xs.
double ls_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxx > 0 ? sxy / sxx : 0.0;
}

// p in r/eta(r) ~ r^{-p}, fitted on panel boundaries of [t_lo, t_hi].
double fit_local_power(const SymmetricLevyMeasure& m, double t_lo, double t_hi) {
  const double w = kLn10 / kPanelsPerDecade;
  std::vector<double> xs, ys;
  for (double t = t_lo; t <= t_hi + 1e-9; t += w) {
    const double r = std::exp(-t);
    xs.push_back(std::log(r));
    ys.push_back(std::log(r / m.eta(r)));
  }
  return -ls_slope(xs, ys);
}

struct ShiftedPowerFit {
  double gamma = 0.0;
  double shift = 0.0;
  double tail = std::numeric_limits<double>::infinity();
  double tail_unshifted = std::numeric_limits<double>::infinity();
};

// Fits h(t) = C (t + t0)^{-gamma} through t_c/4, t_c/2, t_c and extrapolates
// int_{t_c}^inf h. The model ratio
//   [log(tb+t0) - log(ta+t0)] / [log(tc+t0) - log(tb+t0)]
// falls monotonically from +inf to 1/2 as t0 runs over (-ta, inf).
ShiftedPowerFit fit_shifted_power(const SymmetricLevyMeasure& m, double tc) {
  const double ta = tc / 4, tb = tc / 2;
  const double la = std::log(log_integrand(m, ta));
  const double lb = std::log(log_integrand(m, tb));
  const double lc = std::log(log_integrand(m, tc));
  const double hc = std::exp(lc);
  ShiftedPowerFit fit;
  if (!(lb - lc > 0.0)) return fit;  // not decaying: gamma = 0

  auto model_ratio = [&](double t0) {
    return (std::log(tb + t0) - std::log(ta + t0)) /
           (std::log(tc + t0) - std::log(tb + t0));
  };
  const double observed = (la - lb) / (lb - lc);
  double t0 = 0.0;
  if (observed > 0.5) {
    double lo = -ta * (1 - 1e-12), hi = 1.0;
    while (model_ratio(hi) > observed && hi < 1e12) hi *= 2;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (model_ratio(mid) > observed ? lo : hi) = mid;
    }
    t0 = 0.5 * (lo + hi);
  }
  fit.shift = t0;
  fit.gamma = (lb - lc) / (std::log(tc + t0) - std::log(tb + t0));
  const double gamma0 = (lb - lc) / std::log(tc / tb);
  if (fit.gamma > 1.0) fit.tail = hc * (tc + t0) / (fit.gamma - 1.0);
  if (gamma0 > 1.0) fit.tail_unshifted = hc * tc / (gamma0 - 1.0);
  return fit;
}

std::size_t bracket(const std::vector<double>& grid, double x) {
  auto it = std::upper_bound(grid.begin(), grid.end(), x);
  std::size_t i = static_cast<std::size_t>(it - grid.begin());
  i = i == 0 ? 0 : i - 1;
  return std::min(i, grid.size() - 2);
}

double hermite(double x, double x0, double x1, double f0, double d0, double f1,
               double d1) {
  const double h = x1 - x0;
  const double s = (x - x0) / h;
  const double s2 = s * s, s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * f0 + (s3 - 2 * s2 + s) * h * d0 +
         (-2 * s3 + 3 * s2) * f1 + (s3 - s2) * h * d1;
}

}  // namespace

std::string to_string(ConditionStatus status) {
  switch (status) {
    case ConditionStatus::kFinite:
      return "Finite";
    case ConditionStatus::kDivergent:
      return "Divergent";
    case ConditionStatus::kInconclusive:
      return "Inconclusive";
  }
  return "Inconclusive";
}

ConditionVerdict condition_integral(const SymmetricLevyMeasure& measure) {
  const double w = kLn10 / kPanelsPerDecade;
  double t_stop = kMaxDecades * kLn10;
  const bool grid_limited = measure.lower_bound() > 0.0;
  if (grid_limited) t_stop = std::min(t_stop, -std::log(measure.lower_bound()));

  ConditionVerdict v;
  std::ostringstream diag;
  double sum = 0.0;
  std::vector<double> decades;
  double t = 0.0;
  bool converged = false;
  while (t < t_stop - 1e-12) {
    double decade = 0.0;
    for (int k = 0; k < kPanelsPerDecade && t < t_stop - 1e-12; ++k) {
      const double t1 = std::min(t + w, t_stop);
      decade += detail::gauss10([&](double s) { return log_integrand(measure, s); },
                                t, t1);
      t = t1;
    }
    decades.push_back(decade);
    sum += decade;
    const std::size_t j = decades.size();
    if (j >= 3 && decade <= 1e-16 * sum && decade <= decades[j - 2]) {
      converged = true;
      break;
    }
  }
  const double t_end = t;
  const double p = fit_local_power(measure, std::max(0.0, t_end - 2 * kLn10), t_end);
  v.local_exponent_at_0 = p;
  diag << "decades=" << decades.size() << ";fitted_power=" << p;

  if (grid_limited) {
    diag << ";tabulated grid stops at r=" << measure.lower_bound()
         << ", endpoint not resolved;partial_integral=" << sum;
    v.status = ConditionStatus::kInconclusive;
    v.diagnostics = diag.str();
    return v;
  }

  const double last = decades.back();
  const double prev = decades.size() >= 2 ? decades[decades.size() - 2] : last;

  if (converged) {
    const double q = prev > 0 ? last / prev : 0.0;
    const double tail = q < 1.0 ? last * q / (1.0 - q) : last;
    if (p < 1.0 - kExponentMargin) {
      v.status = ConditionStatus::kFinite;
      v.value = sum + tail;
      v.error_bound = tail + 1e-13 * sum;
    } else {
      v.status = ConditionStatus::kInconclusive;
      diag << ";partial sums settled but the fitted power is not below 1";
    }
    v.diagnostics = diag.str();
    return v;
  }

  if (p > 1.0 + kExponentMargin) {
    v.status = ConditionStatus::kDivergent;
  } else if (p < 1.0 - kExponentMargin) {
    const double q = std::pow(10.0, -(1.0 - p));
    const double tail = last * q / (1.0 - q);
    v.status = ConditionStatus::kFinite;
    v.value = sum + tail;
    v.error_bound = tail;
    diag << ";geometric_tail=" << tail;
  } else {
    const ShiftedPowerFit fit = fit_shifted_power(measure, t_end);
    diag << ";log_scale_gamma=" << fit.gamma << ";log_scale_shift=" << fit.shift;
    if (fit.gamma > 1.0 + kExponentMargin) {
      v.status = ConditionStatus::kFinite;
      v.value = sum + fit.tail;
      const double alt = std::isfinite(fit.tail_unshifted) ? fit.tail_unshifted : 0.0;
      v.error_bound = std::abs(fit.tail - alt) + 1e-12 * sum;
      diag << ";log_scale_tail=" << fit.tail;
    } else if (fit.gamma < 1.0 - kExponentMargin) {
      v.status = ConditionStatus::kDivergent;
      // The r-power is 1 to within the margin; the log correction decides.
      v.local_exponent_at_0 = std::max(p, 1.0);
    } else {
      v.status = ConditionStatus::kInconclusive;
    }
  }
  v.diagnostics = diag.str();
  return v;
}

SatoVerdict sato_condition(const SymmetricLevyMeasure& measure, double alpha) {
  if (!(alpha > 0.0 && alpha < 2.0)) {
    throw DomainError("sato_condition requires alpha in (0, 2)");
  }
  int k_max = 100;
  if (measure.lower_bound() > 0.0) {
    k_max = std::min(k_max, static_cast<int>(std::floor(-std::log2(measure.lower_bound()))));
  }
  if (k_max < 2) throw DomainError("measure not resolved near 0 for sato_condition");
  const double r_min = std::ldexp(1.0, -k_max);
  std::vector<double> xs, ys;
  double running_min = std::numeric_limits<double>::infinity();
  for (int k = k_max; k >= 1; --k) {
    const double r = std::ldexp(1.0, -k);
    if (r > 100.0 * r_min) break;
    const double e = measure.eta(r);
    const double log_ratio = std::log(e) - (2.0 - alpha) * std::log(r);
    running_min = std::min(running_min, std::exp(log_ratio));
    xs.push_back(-std::log(r));
    ys.push_back(log_ratio);
  }
  SatoVerdict v;
  v.liminf_estimate = running_min;
  v.trend = ls_slope(xs, ys);
  v.holds = running_min > kSatoFloor && v.trend >= -1e-9;
  return v;
}

GTable build_g(const SymmetricLevyMeasure& measure, std::size_t grid_size) {
  if (grid_size < 2) throw DomainError("build_g needs at least two grid points");
  const ConditionVerdict verdict = condition_integral(measure);
  if (verdict.status != ConditionStatus::kFinite) {
    throw DomainError("condition integral is " + to_string(verdict.status) +
                      "; g(0) is not finite");
  }
  GTable table;
  const std::size_t n = grid_size;
  table.grid_.resize(n);
  const double log_min = std::log(kGTableMinX);
  for (std::size_t i = 0; i < n; ++i) {
    const double frac = static_cast<double>(i) / static_cast<double>(n - 1);
    table.grid_[i] = std::exp(log_min * (1.0 - frac));
  }
  table.grid_.front() = kGTableMinX;
  table.grid_.back() = 1.0;
  table.g_.assign(n, 0.0);
  table.gprime_.assign(n, 0.0);
  table.curvature_.assign(n, 0.0);

  const double panel = kLn10 / kPanelsPerDecade;
  table.curvature_[n - 1] = 1.0 / measure.eta(1.0);
  for (std::size_t i = n - 1; i-- > 0;) {
    const double a = table.grid_[i], b = table.grid_[i + 1];
    // g(a) - g(b) = (b - a) (-g'(b)) + int_a^b (r - a) / eta(r) dr.
    table.g_[i] = table.g_[i + 1] - (b - a) * table.gprime_[i + 1] +
                  detail::geometric_panels(
                      [&](double r) { return (r - a) / measure.eta(r); }, a, b, panel);
    table.gprime_[i] = table.gprime_[i + 1] -
                       detail::geometric_panels(
                           [&](double r) { return 1.0 / measure.eta(r); }, a, b, panel);
    table.curvature_[i] = 1.0 / measure.eta(a);
  }
  table.g_zero_ = *verdict.value;
  const double x0 = table.grid_.front();
  table.tail_power_ = -(std::log(10 * x0 / measure.eta(10 * x0)) -
                        std::log(x0 / measure.eta(x0))) / kLn10;
  return table;
}

double GTable::g(double x) const {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("g evaluated outside [0, 1]");
  if (x == 0.0) return g_zero_;
  const double x0 = grid_.front();
  if (x < x0) {
    // g(x) = int_x^1 r/eta dr + x g'(x), with r/eta ~ r^{-p} below the grid.
    const double p = tail_power_;
    const double scale = x0 * x0 * curvature_.front();
    const double inner = scale * (1.0 - std::pow(x / x0, 1.0 - p)) / (1.0 - p);
    return g_.front() + inner + x * gprime(x) - x0 * gprime_.front();
  }
  const std::size_t i = bracket(grid_, x);
  return hermite(x, grid_[i], grid_[i + 1], g_[i], gprime_[i], g_[i + 1],
                 gprime_[i + 1]);
}

double GTable::gprime(double x) const {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("g' evaluated outside [0, 1]");
  const double x0 = grid_.front();
  if (x < x0) {
    // 1/eta ~ curvature(x0) (r/x0)^{-(p+1)} below the grid.
    const double c = curvature_.front() * x0;
    const double p = tail_power_;
    if (x == 0.0) {
      return p >= 0.0 ? -std::numeric_limits<double>::infinity()
                      : gprime_.front() - c / (-p);
    }
    const double inner = std::abs(p) < 1e-12 ? c * std::log(x0 / x)
                                             : c * (std::pow(x0 / x, p) - 1.0) / p;
    return gprime_.front() - inner;
  }
  const std::size_t i = bracket(grid_, x);
  return hermite(x, grid_[i], grid_[i + 1], gprime_[i], curvature_[i],
                 gprime_[i + 1], curvature_[i + 1]);
}

double convexity_gap(const GTable& table, double x, double y,
                     const SymmetricLevyMeasure& measure) {
  const double lo = table.x_min();
  if (!(x >= lo && x <= 1.0 && y >= lo && y <= 1.0)) {
    throw DomainError("convexity_gap arguments must lie on the g grid");
  }
  const double d = y - x;
  double gap = table.g(y) - table.g(x) - table.gprime(x) * d;
  if (y < x) gap -= 0.5 * d * d / measure.eta(x);
  return gap;
}

}  // namespace levycouple
