#ifndef LEVYCOUPLE_PARALLEL_HPP_
#define LEVYCOUPLE_PARALLEL_HPP_

#include <cstddef>
#include <functional>

namespace levycouple {

/// Worker count used when a caller passes 0.
std::size_t default_workers();

/// Runs body(i) for i in [0, count) on `workers` threads (0 = default).
/// Indices are handed out dynamically; callers write results into slot i so
/// the outcome does not depend on scheduling. The first exception thrown by
/// any body is rethrown after all workers stop.
void parallel_for(std::size_t count, std::size_t workers,
                  const std::function<void(std::size_t)>& body);

}  // namespace levycouple

#endif  // LEVYCOUPLE_PARALLEL_HPP_
