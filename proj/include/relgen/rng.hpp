#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "relgen/hash.hpp"

namespace relgen {

// Deterministic random source. The engine is mt19937_64, whose raw output
// sequence is pinned by the standard; all derived draws (bounded ints, reals,
// shuffles) are implemented here rather than via std distributions, which are
// free to differ between standard libraries. Identical seeds therefore yield
// identical streams on any conforming toolchain.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  // Derives an independent child stream from a label and index. Children are
  // a pure function of (parent seed, key, index); drawing from the parent
  // does not affect them.
  SeededRng split(std::string_view key, std::uint64_t index = 0) const {
    std::uint64_t h = fnv1a64_u64(seed_);
    h = fnv1a64(key, h);
    h = fnv1a64_u64(index, h);
    return SeededRng(mix64(h));
  }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, bound). Rejection sampling keeps the draw unbiased.
  std::uint64_t uniform_u64(std::uint64_t bound) {
    if (bound == 0) return 0;
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

  // Uniform integer in [lo, hi], inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(uniform_u64(span));
  }

  // Uniform real in [0, 1) with 53 random bits.
  double uniform_real() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform_real(double lo, double hi) {
    return lo + (hi - lo) * uniform_real();
  }

  bool coin() { return (next_u64() >> 63) != 0; }

  template <typename T>
  const T& pick(const std::vector<T>& items) {
    return items[uniform_u64(items.size())];
  }

  // Fisher-Yates; spelled out so the permutation stream is ours, not the
  // standard library's.
  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const std::size_t j = uniform_u64(i);
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace relgen
