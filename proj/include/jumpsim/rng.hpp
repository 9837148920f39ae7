#pragma once

// Seeded randomness with a reproducibility contract: every stream is a pure
// function of a 64-bit seed, and per-trajectory seeds are derived from
// (base_seed, trajectory_index) so results do not depend on execution order.

#include <cstdint>
#include <random>

namespace jumpsim {

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base_seed,
                                 std::uint64_t index) {
  return mix64(base_seed + 0x9e3779b97f4a7c15ULL * (index + 1));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1); 53-bit mantissa straight from the engine so draws are
  // identical across standard-library implementations.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    // Modulo bias is < 2^-40 for the n used here (qubit counts, indices).
    return engine_() % n;
  }

  std::uint64_t sub_seed() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace jumpsim
