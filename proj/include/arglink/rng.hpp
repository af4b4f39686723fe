#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "arglink/tensor.hpp"

namespace arglink {

/// Deterministic xoshiro256++ generator seeded through splitmix64.
/// The same seed yields the same stream on every platform; none of the
/// distribution helpers go through implementation-defined std:: facilities.
class Rng {
 public:
  static constexpr const char* kAlgorithm = "xoshiro256++/splitmix64";

  explicit Rng(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& word : state_) word = splitmix64(x);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1) with 53 random mantissa bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t uniform_below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("uniform_below: bound must be positive");
    // Rejection sampling keeps the draw exactly uniform.
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

  /// Uniform integer in [lo, hi], both inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    if (lo > hi) throw std::invalid_argument("uniform_int: empty range");
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(uniform_below(span));
  }

  bool bernoulli(double p) { return uniform() < p; }

  /// Fisher-Yates shuffle driven by this generator.
  template <class T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(uniform_below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

  std::vector<std::size_t> permutation(std::size_t n) {
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), std::size_t{0});
    shuffle(p);
    return p;
  }

 private:
  static std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  static std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

  std::uint64_t state_[4];
};

enum class InitScheme { uniform_scaled, zeros };

/// Parameter initialization: U(-s, s) with s = sqrt(6 / (fan_in + fan_out))
/// for weights, zeros for biases. Rank-1 tensors use fan_in = fan_out = n.
inline Tensor init_param(const std::vector<std::size_t>& shape, InitScheme scheme, Rng& rng) {
  for (std::size_t d : shape) {
    if (d == 0) throw std::invalid_argument("init_param: dimensions must be positive");
  }
  if (shape.empty()) throw std::invalid_argument("init_param: empty shape");
  Tensor t(shape);
  if (scheme == InitScheme::zeros) return t;
  const double fan_out = static_cast<double>(shape[0]);
  const double fan_in = static_cast<double>(shape.size() > 1 ? shape[1] : shape[0]);
  const double s = std::sqrt(6.0 / (fan_in + fan_out));
  for (double& v : t.data()) v = rng.uniform(-s, s);
  return t;
}

}  // namespace arglink
