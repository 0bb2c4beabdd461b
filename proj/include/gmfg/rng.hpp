#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>

namespace gmfg {

/// SplitMix64 generator. Small state, cheap to construct, and splittable:
/// child streams are derived by hashing the parent seed with integer keys,
/// so every stochastic routine can key its draws by (episode, agent, t, ...)
/// and stay reproducible regardless of evaluation order or worker count.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    return mix(z);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Index drawn from a probability vector. Falls back to the last index with
  /// positive mass when float round-off leaves the cumulative sum short of u.
  std::size_t categorical(std::span<const double> probs) {
    const double u = uniform();
    double acc = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
      if (probs[i] <= 0.0) continue;
      acc += probs[i];
      last_positive = i;
      if (u < acc) return i;
    }
    return last_positive;
  }

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// Deterministic child seed for the stream identified by `keys`.
inline std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) {
  std::uint64_t h = Rng::mix(seed ^ 0x6A09E667F3BCC909ULL);
  for (std::uint64_t k : keys) {
    h = Rng::mix(h + 0x9E3779B97F4A7C15ULL + Rng::mix(k));
  }
  return h;
}

inline Rng substream(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) {
  return Rng(derive_seed(seed, keys));
}

}  // namespace gmfg
