#ifndef LEVYCOUPLE_ANALYSIS_HPP_
#define LEVYCOUPLE_ANALYSIS_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "levycouple/levy_measure.hpp"

namespace levycouple {

enum class ConditionStatus { kFinite, kDivergent, kInconclusive };

std::string to_string(ConditionStatus status);

/// Numerical verdict on int_0^1 r / eta(r) dr.
///
/// The integral is evaluated in t = log(1/r), where it reads
/// int_0^inf h(t) dt with h = r^2 / eta(r), on panels of 1/64 decade out to
/// r = 1e-140. The endpoint is classified from the local power p of
/// r/eta(r) ~ r^{-p} fitted over the last two decades visited. When p sits
/// within `kExponentMargin` of 1 the decision falls to a shifted power fit
/// h(t) ~ C (t + t0)^{-gamma} in the log variable, which separates
/// log-corrected families such as eta = r^2 (1 + log 1/r)^{1+eps}.
struct ConditionVerdict {
  ConditionStatus status = ConditionStatus::kInconclusive;
  std::optional<double> value;  // set iff status == kFinite
  double error_bound = 0.0;
  double local_exponent_at_0 = 0.0;
  std::string diagnostics;
};

inline constexpr double kExponentMargin = 0.05;

ConditionVerdict condition_integral(const SymmetricLevyMeasure& measure);

/// lim inf_{r->0} eta(r) / r^{2-alpha} > 0, judged on r = 2^-k, k = 1..100.
struct SatoVerdict {
  bool holds = false;
  double liminf_estimate = 0.0;  // running minimum over the finest two decades
  double trend = 0.0;            // slope of log ratio against log(1/r) there
};

inline constexpr double kSatoFloor = 1e-8;

SatoVerdict sato_condition(const SymmetricLevyMeasure& measure, double alpha);

/// Tabulated potential g(x) = int_x^1 int_y^1 1/eta(r) dr dy and its
/// derivative g'(x) = -int_x^1 1/eta(r) dr on a geometric grid in (0, 1].
/// Equivalently g(x) = int_x^1 (r - x)/eta(r) dr, so g(0+) = int_0^1 r/eta.
///
/// Between nodes g and g' are cubic Hermite interpolants built from the
/// exact nodal values of (g, g') and (g', 1/eta) respectively. Below the
/// first node both are continued with the local power of r/eta fitted at
/// the bottom of the grid; g(0+) is the condition integral itself.
class GTable {
 public:
  const std::vector<double>& grid() const { return grid_; }
  const std::vector<double>& g_values() const { return g_; }
  const std::vector<double>& gprime_values() const { return gprime_; }
  const std::vector<double>& curvature_values() const { return curvature_; }

  double x_min() const { return grid_.front(); }
  double g_at_zero() const { return g_zero_; }

  /// g(x) for x in [0, 1].
  double g(double x) const;
  /// g'(x) for x in (0, 1]; -infinity at 0 when 1/eta is not integrable.
  double gprime(double x) const;

 private:
  friend GTable build_g(const SymmetricLevyMeasure&, std::size_t);

  std::vector<double> grid_;
  std::vector<double> g_;
  std::vector<double> gprime_;
  std::vector<double> curvature_;  // 1 / eta at the nodes
  double g_zero_ = 0.0;
  double tail_power_ = 0.0;  // p in r/eta ~ r^{-p} below the grid
};

inline constexpr double kGTableMinX = 1e-12;

/// Requires a Finite condition verdict; throws DomainError otherwise.
GTable build_g(const SymmetricLevyMeasure& measure, std::size_t grid_size);

/// Slack in g(y) - g(x) >= g'(x)(y-x) + (1/2)(1/eta(x))(y-x)^2 1{y<x}.
/// x and y must lie within the table's grid.
double convexity_gap(const GTable& table, double x, double y,
                     const SymmetricLevyMeasure& measure);

}  // namespace levycouple

#endif  // LEVYCOUPLE_ANALYSIS_HPP_
