// Internal quadrature helpers shared by the analysis, measure and oracle code.
#ifndef LEVYCOUPLE_SRC_QUADRATURE_HPP_
#define LEVYCOUPLE_SRC_QUADRATURE_HPP_

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>

namespace levycouple::detail {

// Fixed 10-point Gauss-Legendre rule on [a, b].
template <class F>
double gauss10(F&& f, double a, double b) {
  return boost::math::quadrature::gauss<double, 10>::integrate(f, a, b);
}

// Fixed 15-point Gauss-Legendre rule on [a, b].
template <class F>
double gauss15(F&& f, double a, double b) {
  return boost::math::quadrature::gauss<double, 15>::integrate(f, a, b);
}

// Adaptive Gauss-Kronrod (G15/K31) on [a, b].
template <class F>
double adaptive(F&& f, double a, double b, double rel_tol = 1e-12,
                double* error = nullptr) {
  double err = 0.0;
  const double value =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
          f, a, b, 15, rel_tol, &err);
  if (error != nullptr) *error = err;
  return value;
}

// int_a^b f(r) dr with 0 < a < b, evaluated in log r on panels no wider than
// `panel` (natural-log units) with a 10-point rule per panel.
template <class F>
double geometric_panels(F&& f, double a, double b, double panel) {
  const double la = std::log(a);
  const double lb = std::log(b);
  const int count = std::max(1, static_cast<int>(std::ceil((lb - la) / panel)));
  const double w = (lb - la) / count;
  double total = 0.0;
  for (int k = 0; k < count; ++k) {
    const double s0 = la + k * w;
    total += gauss10(
        [&](double s) {
          const double r = std::exp(s);
          return f(r) * r;
        },
        s0, s0 + w);
  }
  return total;
}

}  // namespace levycouple::detail

#endif  // LEVYCOUPLE_SRC_QUADRATURE_HPP_
