#ifndef LEVYCOUPLE_SIMULATOR_HPP_
#define LEVYCOUPLE_SIMULATOR_HPP_

#include <vector>

#include "levycouple/levy_measure.hpp"
#include "levycouple/rng.hpp"

namespace levycouple {

struct JumpEvent {
  double t;  // in (0, horizon]
  double x;  // signed jump, |x| > eps
};

/// Jumps of the eps-truncated pure-jump Levy process on [0, horizon],
/// sorted by time.
struct JumpPath {
  double horizon = 0.0;
  double eps = 0.0;
  std::vector<JumpEvent> events;
};

/// Two-sided jump rate 2 N(eps) of the truncated process.
double jump_rate(const SymmetricLevyMeasure& measure, double eps);

/// Variance 2 eta(eps) T of the discarded small jumps over [0, T].
double truncation_variance(const SymmetricLevyMeasure& measure, double eps,
                           double horizon);

/// Largest eps (to 1e-9 relative) with 2 eta(eps) T <= budget.
double eps_for_budget(const SymmetricLevyMeasure& measure, double budget,
                      double horizon = 1.0);

/// Compound-Poisson skeleton: K ~ Poisson(2 N(eps) T), K sorted uniform
/// times, K jumps by inverse transform with independent fair signs. Draw
/// order on the stream: K, then the K times, then (u, sign) per jump.
/// A measure with no mass above eps gives an empty path and consumes nothing.
JumpPath sample_path(const SymmetricLevyMeasure& measure, double eps,
                     double horizon, RngStream& stream);

/// X_T of a path: the sum of its jumps. No compensator is needed because
/// both nu and the truncation are symmetric.
double terminal_value(const JumpPath& path);

/// Same value as terminal_value(sample_path(...)) for the same stream state,
/// without materialising or sorting the event times.
double sample_terminal_value(const SymmetricLevyMeasure& measure, double eps,
                             double horizon, RngStream& stream);

}  // namespace levycouple

#endif  // LEVYCOUPLE_SIMULATOR_HPP_
