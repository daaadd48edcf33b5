#pragma once

#include <cstdint>
#include <random>

namespace csmri {

/// Seeded generator whose output is identical on every platform:
/// std::mt19937_64 (sequence fixed by the C++ standard) with our own
/// bounded-integer and real mappings, since the standard distributions
/// are implementation-defined.
class PortableRng {
 public:
  explicit PortableRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, bound) by rejection sampling. bound > 0.
  std::uint64_t below(std::uint64_t bound);

  /// Uniform double in [0, 1) from the top 53 bits.
  double uniform();

 private:
  std::mt19937_64 engine_;
};

}  // namespace csmri
