#ifndef UNIDYM_RNG_HPP
#define UNIDYM_RNG_HPP

#include <cstdint>

namespace unidym {

/// Counter-based generator: the value at (stream, index) is a SplitMix64
/// finaliser of the seed, stream and index, so any draw can be reproduced
/// without replaying the sequence before it.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
      : seed_(seed), stream_(stream) {}

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t at(std::uint64_t index) const noexcept {
    return mix(mix(seed_ ^ mix(stream_)) + index * 0xd1b54a32d192ed03ULL);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform_at(std::uint64_t index) const noexcept {
    return static_cast<double>(at(index) >> 11) * 0x1.0p-53;
  }

  /// Sequential draws advance an internal counter.
  std::uint64_t next() noexcept { return at(counter_++); }
  double uniform() noexcept { return uniform_at(counter_++); }
  double uniform(double a, double b) noexcept { return a + (b - a) * uniform(); }
  /// Integer in [lo, hi].
  long integer(long lo, long hi) noexcept {
    return lo + static_cast<long>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  /// An independent generator for a sub-task.
  CounterRng substream(std::uint64_t id) const noexcept { return CounterRng(seed_, mix(stream_ + 1) ^ id); }

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
};

}  // namespace unidym

#endif  // UNIDYM_RNG_HPP
