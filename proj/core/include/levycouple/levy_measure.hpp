#ifndef LEVYCOUPLE_LEVY_MEASURE_HPP_
#define LEVYCOUPLE_LEVY_MEASURE_HPP_

#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace levycouple {

/// One-sided density c * x^(-1-alpha) on (0, inf), alpha in (0, 2).
struct StableFamily {
  double alpha;
  double c;
};

/// The log-corrected family with eta(r) = r^2 (1 + log(1/r))^(1+eps) on
/// (0, 1] and no mass beyond 1. eps must lie in (0, 1] for the density
/// eta'(x) / x^2 to stay nonnegative on the whole support.
struct PowerLogFamily {
  double eps;
};

/// c * x^(-1-alpha) on (0, cutoff]. alpha = 0 is admitted and gives the
/// log-uniform density c / x, for which eta(r) = c r^2 / 2 exactly.
struct TruncatedStableFamily {
  double alpha;
  double c;
  double cutoff;
};

/// Tail N(r) given on a grid, interpolated piecewise-linearly in
/// (log r, log N). The last tail value must be 0, and the final segment
/// interpolates linearly in N. Queries below the first grid point are
/// domain errors; eta_at_first is the mass x^2 nu(dx) carried below it.
struct TabulatedFamily {
  std::vector<double> r;
  std::vector<double> tail;
  double eta_at_first = 0.0;
  // Cumulative eta at each grid node; filled in by the factory.
  std::vector<double> eta_nodes;
};

/// A symmetric Levy measure nu on R \ {0}. All quantities are one-sided:
/// tail_mass(r) = nu((r, inf)) and eta(r) = int_{0 < x <= r} x^2 nu(dx).
/// Two-sided versions are twice these.
class SymmetricLevyMeasure {
 public:
  using Family = std::variant<StableFamily, PowerLogFamily,
                              TruncatedStableFamily, TabulatedFamily>;

  static SymmetricLevyMeasure stable(double alpha, double c);
  static SymmetricLevyMeasure power_log(double eps);
  static SymmetricLevyMeasure truncated_stable(double alpha, double c,
                                               double cutoff);
  static SymmetricLevyMeasure tabulated(
      std::vector<std::pair<double, double>> r_tail, double eta_at_first = 0.0);

  const Family& family() const { return family_; }

  /// Largest jump magnitude carrying mass (infinity for Stable).
  double support_bound() const { return support_bound_; }

  /// Smallest radius at which tail_mass/eta are defined (0 except for the
  /// tabulated family).
  double lower_bound() const;

  /// One-sided Levy density n(x) for x > 0.
  double density(double x) const;

  /// N(r) = nu((r, inf)). Requires r > 0.
  double tail_mass(double r) const;

  /// eta(r) = int_{0 <= x <= r} x^2 nu(dx). Requires r >= 0.
  double eta(double r) const;

  /// Smallest x with N(x) = v, for 0 < v <= N(lower_bound()).
  double inverse_tail(double v) const;

  /// Signed jump with |x| > eps drawn by inverse transform on the tail:
  /// |x| = N^{-1}(u N(eps)). `negative` selects the sign.
  double sample_jump(double eps, double u, bool negative) const;

  /// Stable text identifier, e.g. "stable:alpha=1;c=1".
  std::string id() const;

 private:
  explicit SymmetricLevyMeasure(Family family, double support_bound)
      : family_(std::move(family)), support_bound_(support_bound) {}

  Family family_;
  double support_bound_;
};

// Free-function spellings of the core operations.
inline double eta(const SymmetricLevyMeasure& m, double r) { return m.eta(r); }
inline double tail_mass(const SymmetricLevyMeasure& m, double r) {
  return m.tail_mass(r);
}
inline double sample_jump(const SymmetricLevyMeasure& m, double eps, double u,
                          bool negative) {
  return m.sample_jump(eps, u, negative);
}

}  // namespace levycouple

#endif  // LEVYCOUPLE_LEVY_MEASURE_HPP_
