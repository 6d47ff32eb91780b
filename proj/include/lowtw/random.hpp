#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace lowtw {

// Seeded stream of uniform reals. The conversion from raw 64-bit output is
// done by hand so sequences are identical across standard libraries.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed = 0) : seed_(seed), engine_(mix(seed)) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t next_u64() { return engine_(); }
  // uniform on [0, 1)
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  std::size_t index(std::size_t n);

  // Independent stream keyed by (seed, tag); does not depend on how many
  // values this stream has already produced.
  RandomSource fork(std::uint64_t tag) const { return RandomSource(mix(seed_ ^ mix(tag + 0x632be59bd9b4e019ULL))); }

  static std::uint64_t mix(std::uint64_t x);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace lowtw
