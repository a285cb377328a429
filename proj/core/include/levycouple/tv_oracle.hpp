#ifndef LEVYCOUPLE_TV_ORACLE_HPP_
#define LEVYCOUPLE_TV_ORACLE_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "levycouple/levy_measure.hpp"
#include "levycouple/stats.hpp"

namespace levycouple {

// Ground truth for the law mu of X_1 by Fourier inversion. Supported for the
// Stable and TruncatedStable families only; other families raise
// OracleUnavailableError rather than extrapolate.
//
// Total variation convention: ||mu_a - mu||_TV = int |f(x - a) - f(x)| dx,
// the total mass of the signed measure. Under it the coupling inequality
// reads ||mu_a - mu||_TV <= 2 P(X1 != Y1).

/// log phi(u) = 2 int_0^inf (cos(ux) - 1) nu(dx).
double char_exponent(const SymmetricLevyMeasure& measure, double u);

/// phi(u) = exp(char_exponent(u)), real and in (0, 1] by symmetry.
double char_fn(const SymmetricLevyMeasure& measure, double u);

/// Density of X_1 from a tabulated phi on [0, u_max] (phi(u_max) < 1e-12).
/// phi is taken piecewise linear on a uniform u grid and that interpolant is
/// transformed exactly (linear Filon rule), so there is no aliasing in x.
class DensityInverter {
 public:
  explicit DensityInverter(const SymmetricLevyMeasure& measure,
                           std::size_t u_panels = 8192);

  double density(double x) const;
  double u_max() const { return u_max_; }
  /// (1/2pi) int phi^2 du over R, from the same interpolant.
  double l2_norm_squared() const;

 private:
  double step_ = 0.0;
  double u_max_ = 0.0;
  std::vector<double> phi_;
};

struct DensityGrid {
  std::vector<double> x;
  std::vector<double> f;
  double mass = 0.0;  // trapezoid integral of f over the grid

  /// CDF by cumulative trapezoid, offset by half the mass outside the grid
  /// (the law is symmetric); linear between nodes, flat outside.
  double cdf(double at) const;

  std::vector<double> cumulative;  // trapezoid integral from x.front()
};

/// Density on a uniform grid of `grid_size` points over [x_lo, x_hi].
DensityGrid invert_density(const SymmetricLevyMeasure& measure, double x_lo,
                           double x_hi, std::size_t grid_size);

struct TvEstimate {
  double tv = 0.0;
  double error_bound = 0.0;  // tail remainder plus discretisation estimate
};

/// int |f(x - a) - f(x)| dx over [x_lo, x_hi] on an odd number of uniform
/// points: trapezoid at steps h and 2h, Richardson-extrapolated. The tails
/// beyond the range add at most |a| (f(x_hi - |a|) + f(x_lo)) for a unimodal
/// density; that plus the extrapolation correction is the error bound.
TvEstimate tv_distance(const SymmetricLevyMeasure& measure, double a,
                       double x_lo, double x_hi, std::size_t grid_size);

/// Same, reusing an existing inverter.
TvEstimate tv_distance(const DensityInverter& inverter, double a, double x_lo,
                       double x_hi, std::size_t grid_size);

struct BoundCheck {
  double a = 0.0;
  TvEstimate tv;               // mass convention
  MCEstimate p_uncoupled;      // P(tau_delta > 1)
  double delta_allowance = 0.0;  // ||mu_delta - mu||_TV
  /// 2 (p + 3 se) + allowance - tv. Nonnegative when the bound holds.
  double slack = 0.0;
  /// The same comparison under the half-mass convention (everything / 2).
  double tv_half = 0.0;
  double slack_half = 0.0;
};

struct OracleGrid {
  double half_width = 2000.0;
  std::size_t points = 16001;
};

/// Compares the oracle distance with the coupling probability at T = 1.
BoundCheck coupling_bound_check(const SymmetricLevyMeasure& measure, double a,
                                double delta, double eps, std::size_t n,
                                std::uint64_t seed, std::size_t workers = 0,
                                OracleGrid grid = {});

}  // namespace levycouple

#endif  // LEVYCOUPLE_TV_ORACLE_HPP_
