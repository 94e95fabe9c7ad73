#pragma once

#include <cstdint>
#include <random>

namespace qmachine {

/// Seeded random stream. Every sampler in the library draws from one of
/// these explicitly, so a run is reproducible from its seed alone.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);

  /// Independent stream for chunk `index` of a run seeded with `seed`.
  /// Parallel work splits on these so results do not depend on thread count.
  static RandomStream substream(std::uint64_t seed, std::uint64_t index);

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01();
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi);
  bool coin();

 private:
  std::mt19937_64 engine_;
};

}  // namespace qmachine
