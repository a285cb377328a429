#ifndef LEVYCOUPLE_RNG_HPP_
#define LEVYCOUPLE_RNG_HPP_

#include <cstdint>
#include <random>

namespace levycouple {

/// Sub-stream selector. Jump draws and mirror coins come from different
/// streams so a path can be replayed with fresh coins.
enum class StreamPurpose : std::uint64_t {
  kJumps = 1,
  kCoins = 2,
  kProbe = 3,
};

/// A deterministic random stream. Uniform and coin conversions are done here
/// rather than through <random> distributions so their output does not depend
/// on the standard library implementation.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform on the open interval (0, 1) with 52 bits of resolution.
  double uniform() {
    return (static_cast<double>(engine_() >> 12) + 0.5) * 0x1.0p-52;
  }

  /// Fair coin; true with probability 1/2.
  bool coin() { return (engine_() >> 63) != 0; }

  void discard(unsigned long long count) { engine_.discard(count); }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finaliser.
std::uint64_t mix64(std::uint64_t x);

/// Seed for the stream identified by (root seed, replication, purpose,
/// segment). Distinct tuples give unrelated seeds.
std::uint64_t derive_seed(std::uint64_t root_seed, std::uint64_t replication,
                          StreamPurpose purpose, std::uint64_t segment = 0);

inline RngStream derive_stream(std::uint64_t root_seed,
                               std::uint64_t replication, StreamPurpose purpose,
                               std::uint64_t segment = 0) {
  return RngStream(derive_seed(root_seed, replication, purpose, segment));
}

}  // namespace levycouple

#endif  // LEVYCOUPLE_RNG_HPP_
