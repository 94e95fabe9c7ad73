#include "qmachine/random.hpp"

namespace qmachine {

namespace {

std::mt19937_64 seeded_engine(std::uint64_t seed, std::uint64_t index, bool has_index) {
  auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v & 0xffffffffu); };
  auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
  if (has_index) {
    std::seed_seq seq{lo(seed), hi(seed), lo(index), hi(index), 0x51u};
    return std::mt19937_64(seq);
  }
  std::seed_seq seq{lo(seed), hi(seed)};
  return std::mt19937_64(seq);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed) : engine_(seeded_engine(seed, 0, false)) {}

RandomStream RandomStream::substream(std::uint64_t seed, std::uint64_t index) {
  RandomStream s(0);
  s.engine_ = seeded_engine(seed, index, true);
  return s;
}

double RandomStream::uniform01() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform01();
}

bool RandomStream::coin() { return (engine_() >> 63) != 0; }

}  // namespace qmachine
