#ifndef SR_RNG_HPP
#define SR_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace sr {

// mt19937_64 with bit-level derivation of variates so that sequences are
// identical across standard library implementations.
class DetRng {
 public:
  explicit DetRng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1) with 53-bit resolution.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Exponential with the given rate (events per unit time).
  double exponential(double rate) {
    return -std::log1p(-uniform01()) / rate;
  }

  bool bernoulli(double p) { return uniform01() < p; }

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace sr

#endif  // SR_RNG_HPP
