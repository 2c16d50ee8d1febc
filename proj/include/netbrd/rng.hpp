#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace netbrd {

// Thin deterministic wrapper over mt19937_64. All uniform mappings are done by
// hand so that streams are bit-identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }

  // Uniform on [0, 1) with 53 random bits.
  double u01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * u01(); }

  // Uniform integer in [0, n), rejection-sampled.
  std::size_t below(std::size_t n) {
    const std::uint64_t span = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = span - span % n;
    std::uint64_t v = gen_();
    while (v >= limit) v = gen_();
    return static_cast<std::size_t>(v % n);
  }

  bool coin() { return (gen_() >> 63) != 0; }

  int rademacher() { return coin() ? 1 : -1; }

  template <class It>
  void shuffle(It first, It last) {
    const auto n = static_cast<std::size_t>(last - first);
    for (std::size_t i = n; i > 1; --i) {
      std::swap(first[i - 1], first[below(i)]);
    }
  }

 private:
  std::mt19937_64 gen_;
};

// splitmix64 step; used to derive independent per-trial streams from a master seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace netbrd
