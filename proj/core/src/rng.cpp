#include "levycouple/rng.hpp"

namespace levycouple {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t root_seed, std::uint64_t replication,
                          StreamPurpose purpose, std::uint64_t segment) {
  std::uint64_t h = mix64(root_seed);
  h = mix64(h ^ replication);
  h = mix64(h ^ static_cast<std::uint64_t>(purpose));
  h = mix64(h ^ segment);
  return h;
}

}  // namespace levycouple
