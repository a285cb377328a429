#include "levycouple/levy_measure.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "levycouple/error.hpp"
#include "quadrature.hpp"

namespace levycouple {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string fmt(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// PowerLog in the variable L = 1 + log(1/x):
//   N = 2 (L^{2+e} - 1) / (2+e) - (L^{1+e} - 1),  dN/dL = L^e (2L - 1 - e).
double power_log_tail_of_L(double L, double e) {
  return 2.0 * (std::pow(L, 2.0 + e) - 1.0) / (2.0 + e) -
         (std::pow(L, 1.0 + e) - 1.0);
}

// Solves N(L) = v on [1, inf) with Newton steps kept inside a shrinking
// bracket; falls back to bisection whenever Newton leaves it.
double power_log_solve_L(double v, double e) {
  double lo = 1.0;
  double hi = 2.0;
  while (power_log_tail_of_L(hi, e) < v) {
    lo = hi;
    hi *= 2.0;
  }
  double L = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double g = power_log_tail_of_L(L, e) - v;
    if (g > 0.0) {
      hi = L;
    } else {
      lo = L;
    }
    const double slope = std::pow(L, e) * (2.0 * L - 1.0 - e);
    double next = slope > 0.0 ? L - g / slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    // |dx/x| = |dL|, so an absolute tolerance on L is a relative one on x.
    if (std::abs(next - L) <= 1e-13 * std::max(1.0, L) || hi - lo <= 1e-13) {
      return next;
    }
    L = next;
  }
  return L;
}

void validate_tabulated(const TabulatedFamily& t) {
  if (t.r.size() < 2) {
    throw InvalidMeasureError("tabulated measure needs at least two grid points");
  }
  for (std::size_t i = 0; i < t.r.size(); ++i) {
    if (!(t.r[i] > 0.0) || !std::isfinite(t.r[i])) {
      throw InvalidMeasureError("tabulated radii must be positive and finite");
    }
    if (i > 0 && !(t.r[i] > t.r[i - 1])) {
      throw InvalidMeasureError("tabulated radii must be strictly increasing");
    }
    if (i > 0 && t.tail[i] > t.tail[i - 1]) {
      throw InvalidMeasureError("tabulated tail must be nonincreasing");
    }
    const bool last = i + 1 == t.r.size();
    if (last ? t.tail[i] != 0.0 : !(t.tail[i] > 0.0)) {
      throw InvalidMeasureError(
          "tabulated tail must be positive on the grid and end at 0");
    }
  }
  if (!(t.eta_at_first >= 0.0)) {
    throw InvalidMeasureError("eta_at_first must be nonnegative");
  }
}

// Index i of the segment [r_i, r_{i+1}] containing x (clamped to the last).
std::size_t segment_of(const TabulatedFamily& t, double x) {
  auto it = std::upper_bound(t.r.begin(), t.r.end(), x);
  std::size_t i = static_cast<std::size_t>(it - t.r.begin());
  i = i == 0 ? 0 : i - 1;
  return std::min(i, t.r.size() - 2);
}

bool is_final_segment(const TabulatedFamily& t, std::size_t i) {
  return i + 2 == t.r.size();
}

double log_slope(const TabulatedFamily& t, std::size_t i) {
  return std::log(t.tail[i + 1] / t.tail[i]) / std::log(t.r[i + 1] / t.r[i]);
}

double tabulated_tail(const TabulatedFamily& t, double x) {
  const std::size_t i = segment_of(t, x);
  if (is_final_segment(t, i)) {
    return t.tail[i] * (t.r[i + 1] - x) / (t.r[i + 1] - t.r[i]);
  }
  return t.tail[i] * std::pow(x / t.r[i], log_slope(t, i));
}

double tabulated_density(const TabulatedFamily& t, double x) {
  const std::size_t i = segment_of(t, x);
  if (is_final_segment(t, i)) return t.tail[i] / (t.r[i + 1] - t.r[i]);
  const double s = log_slope(t, i);
  return -s * t.tail[i] * std::pow(x / t.r[i], s) / x;
}

double tabulated_segment_eta(const TabulatedFamily& t, double from, double to) {
  if (to <= from) return 0.0;
  return detail::adaptive(
      [&](double x) { return x * x * tabulated_density(t, x); }, from, to);
}

}  // namespace

SymmetricLevyMeasure SymmetricLevyMeasure::stable(double alpha, double c) {
  if (!(alpha > 0.0 && alpha < 2.0)) {
    throw InvalidMeasureError("stable alpha must lie in (0, 2)");
  }
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw InvalidMeasureError("stable scale c must be positive");
  }
  return SymmetricLevyMeasure(StableFamily{alpha, c}, kInf);
}

SymmetricLevyMeasure SymmetricLevyMeasure::power_log(double eps) {
  if (!(eps > 0.0 && eps <= 1.0)) {
    throw InvalidMeasureError(
        "power-log eps must lie in (0, 1] (density turns negative above 1)");
  }
  return SymmetricLevyMeasure(PowerLogFamily{eps}, 1.0);
}

SymmetricLevyMeasure SymmetricLevyMeasure::truncated_stable(double alpha,
                                                            double c,
                                                            double cutoff) {
  if (!(alpha >= 0.0 && alpha < 2.0)) {
    throw InvalidMeasureError("truncated-stable alpha must lie in [0, 2)");
  }
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw InvalidMeasureError("truncated-stable scale c must be positive");
  }
  if (!(cutoff > 0.0) || !std::isfinite(cutoff)) {
    throw InvalidMeasureError("truncated-stable cutoff must be positive");
  }
  return SymmetricLevyMeasure(TruncatedStableFamily{alpha, c, cutoff}, cutoff);
}

SymmetricLevyMeasure SymmetricLevyMeasure::tabulated(
    std::vector<std::pair<double, double>> r_tail, double eta_at_first) {
  TabulatedFamily t;
  t.eta_at_first = eta_at_first;
  for (const auto& [r, n] : r_tail) {
    t.r.push_back(r);
    t.tail.push_back(n);
  }
  validate_tabulated(t);
  t.eta_nodes.resize(t.r.size());
  t.eta_nodes[0] = eta_at_first;
  for (std::size_t i = 0; i + 1 < t.r.size(); ++i) {
    t.eta_nodes[i + 1] =
        t.eta_nodes[i] + tabulated_segment_eta(t, t.r[i], t.r[i + 1]);
  }
  const double bound = t.r.back();
  return SymmetricLevyMeasure(std::move(t), bound);
}

double SymmetricLevyMeasure::lower_bound() const {
  if (const auto* t = std::get_if<TabulatedFamily>(&family_)) return t->r.front();
  return 0.0;
}

double SymmetricLevyMeasure::density(double x) const {
  if (!(x > 0.0)) throw DomainError("density requires x > 0");
  if (x > support_bound_) return 0.0;
  return std::visit(
      Overloaded{
          [&](const StableFamily& f) { return f.c * std::pow(x, -1.0 - f.alpha); },
          [&](const PowerLogFamily& f) {
            const double L = 1.0 - std::log(x);
            return std::pow(L, f.eps) * (2.0 * L - 1.0 - f.eps) / x;
          },
          [&](const TruncatedStableFamily& f) {
            return f.c * std::pow(x, -1.0 - f.alpha);
          },
          [&](const TabulatedFamily& f) {
            if (x < f.r.front()) throw DomainError("density below tabulated grid");
            return tabulated_density(f, x);
          }},
      family_);
}

double SymmetricLevyMeasure::tail_mass(double r) const {
  if (!(r > 0.0)) throw DomainError("tail_mass requires r > 0");
  if (r >= support_bound_) return 0.0;
  return std::visit(
      Overloaded{
          [&](const StableFamily& f) { return f.c * std::pow(r, -f.alpha) / f.alpha; },
          [&](const PowerLogFamily& f) {
            return power_log_tail_of_L(1.0 - std::log(r), f.eps);
          },
          [&](const TruncatedStableFamily& f) {
            if (f.alpha == 0.0) return f.c * std::log(f.cutoff / r);
            return f.c * (std::pow(r, -f.alpha) - std::pow(f.cutoff, -f.alpha)) /
                   f.alpha;
          },
          [&](const TabulatedFamily& f) {
            if (r < f.r.front()) {
              throw DomainError("tail_mass below tabulated grid (no extrapolation)");
            }
            return tabulated_tail(f, r);
          }},
      family_);
}

double SymmetricLevyMeasure::eta(double r) const {
  if (!(r >= 0.0)) throw DomainError("eta requires r >= 0");
  if (r == 0.0) return 0.0;
  return std::visit(
      Overloaded{
          [&](const StableFamily& f) {
            return f.c * std::pow(r, 2.0 - f.alpha) / (2.0 - f.alpha);
          },
          [&](const PowerLogFamily& f) {
            if (r >= 1.0) return 1.0;
            const double L = 1.0 - std::log(r);
            return r * r * std::pow(L, 1.0 + f.eps);
          },
          [&](const TruncatedStableFamily& f) {
            const double x = std::min(r, f.cutoff);
            return f.c * std::pow(x, 2.0 - f.alpha) / (2.0 - f.alpha);
          },
          [&](const TabulatedFamily& f) {
            if (r < f.r.front()) {
              throw DomainError("eta below tabulated grid (no extrapolation)");
            }
            if (r >= f.r.back()) return f.eta_nodes.back();
            const std::size_t i = segment_of(f, r);
            return f.eta_nodes[i] + tabulated_segment_eta(f, f.r[i], r);
          }},
      family_);
}

double SymmetricLevyMeasure::inverse_tail(double v) const {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError("inverse_tail requires a positive finite mass");
  }
  return std::visit(
      Overloaded{
          [&](const StableFamily& f) {
            return std::pow(f.c / (f.alpha * v), 1.0 / f.alpha);
          },
          [&](const PowerLogFamily& f) {
            return std::exp(1.0 - power_log_solve_L(v, f.eps));
          },
          [&](const TruncatedStableFamily& f) {
            if (f.alpha == 0.0) return f.cutoff * std::exp(-v / f.c);
            return std::pow(f.alpha * v / f.c + std::pow(f.cutoff, -f.alpha),
                            -1.0 / f.alpha);
          },
          [&](const TabulatedFamily& f) {
            if (v > f.tail.front()) {
              throw DomainError("inverse_tail mass exceeds the tabulated range");
            }
            // First segment whose lower tail value is >= v > upper value.
            std::size_t i = 0;
            while (i + 2 < f.r.size() && f.tail[i + 1] >= v) ++i;
            if (is_final_segment(f, i)) {
              return f.r[i + 1] - v / f.tail[i] * (f.r[i + 1] - f.r[i]);
            }
            const double s = log_slope(f, i);
            if (s == 0.0) return f.r[i];
            return f.r[i] * std::pow(v / f.tail[i], 1.0 / s);
          }},
      family_);
}

double SymmetricLevyMeasure::sample_jump(double eps, double u,
                                         bool negative) const {
  if (!(u > 0.0 && u < 1.0)) throw DomainError("sample_jump requires u in (0, 1)");
  if (!(eps > 0.0)) throw DomainError("sample_jump requires eps > 0");
  if (eps >= support_bound_) {
    throw NoMassError("no Levy mass above the truncation level");
  }
  double magnitude = 0.0;
  if (const auto* f = std::get_if<StableFamily>(&family_)) {
    magnitude = eps * std::pow(u, -1.0 / f->alpha);
  } else if (const auto* t = std::get_if<TruncatedStableFamily>(&family_);
             t != nullptr && t->alpha == 0.0) {
    magnitude = t->cutoff * std::pow(eps / t->cutoff, u);
  } else {
    const double total = tail_mass(eps);
    if (!(total > 0.0)) throw NoMassError("no Levy mass above the truncation level");
    magnitude = inverse_tail(u * total);
  }
  magnitude = std::clamp(magnitude, eps, support_bound_);
  return negative ? -magnitude : magnitude;
}

std::string SymmetricLevyMeasure::id() const {
  return std::visit(
      Overloaded{
          [](const StableFamily& f) {
            return "stable:alpha=" + fmt(f.alpha) + ";c=" + fmt(f.c);
          },
          [](const PowerLogFamily& f) { return "powerlog:eps=" + fmt(f.eps); },
          [](const TruncatedStableFamily& f) {
            return "truncated_stable:alpha=" + fmt(f.alpha) + ";c=" + fmt(f.c) +
                   ";cutoff=" + fmt(f.cutoff);
          },
          [](const TabulatedFamily& f) {
            return "tabulated:points=" + std::to_string(f.r.size()) +
                   ";r_min=" + fmt(f.r.front()) + ";r_max=" + fmt(f.r.back());
          }},
      family_);
}

}  // namespace levycouple
