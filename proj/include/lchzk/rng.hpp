#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace lchzk {

// splitmix64 finalizer, used to derive independent worker seeds from a
// master seed.  Worker i of a sampling loop uses mix_seed(seed, i).
inline uint64_t mix_seed(uint64_t seed, uint64_t index) {
  uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic random source.  The engine is std::mt19937_64, whose output
// sequence is fixed by the standard; all derived draws below avoid
// std::*_distribution (implementation defined) so that a seed reproduces the
// same bytes on every platform.
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  uint64_t next_u64() { return eng_(); }

  // Uniform in [0, bound), unbiased via masked rejection.
  uint64_t below(uint64_t bound) {
    if (bound <= 1) return 0;
    uint64_t mask = ~uint64_t{0} >> __builtin_clzll((bound - 1) | 1);
    for (;;) {
      uint64_t v = eng_() & mask;
      if (v < bound) return v;
    }
  }

  int bit() { return static_cast<int>(eng_() >> 63); }

  // Uniform double in [0,1) with 53 random bits.
  double real01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  std::vector<uint8_t> bytes(size_t count) {
    std::vector<uint8_t> out(count);
    for (auto& b : out) b = static_cast<uint8_t>(eng_() >> 56);
    return out;
  }

  // Fisher-Yates shuffle.
  template <class T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace lchzk
