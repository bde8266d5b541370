#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string_view>

namespace teachsim {

// splitmix64 finalizer (Vigna). Used only for seed derivation, not as a
// generator.
constexpr std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

constexpr std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h;
}

// Stream-seed derivation: master seed and a stream label are folded with
// FNV-1a, the stream index is spaced by the 64-bit golden gamma, and the
// result is passed through two splitmix64 rounds. Each (label, index) pair
// gets a statistically independent seed, reproducibly on every platform.
constexpr std::uint64_t mix_seed(std::uint64_t master, std::string_view label,
                                 std::uint64_t index) {
  std::uint64_t s =
      (master ^ fnv1a64(label)) + 0x9E3779B97F4A7C15ull * (index + 1);
  return splitmix64_mix(splitmix64_mix(s));
}

// Deterministic RNG. Wraps std::mt19937_64 (whose output sequence the
// standard pins down exactly) and implements all derived draws by hand so
// that results are identical across standard libraries and platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Uniform integer on [lo, hi] inclusive via 128-bit multiply-shift.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    if (lo > hi) throw std::invalid_argument("uniform_int: empty range");
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(gen_());  // full range
    const auto wide =
        static_cast<unsigned __int128>(gen_()) * static_cast<unsigned __int128>(span);
    return lo + static_cast<std::int64_t>(wide >> 64);
  }

  bool bernoulli(double p) { return uniform01() < p; }

  // Index draw proportional to non-negative weights.
  std::size_t categorical(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) {
      if (!(w >= 0.0)) throw std::invalid_argument("categorical: negative weight");
      total += w;
    }
    if (total <= 0.0) throw std::invalid_argument("categorical: zero total weight");
    double u = uniform01() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
      acc += weights[i];
      if (u < acc) return i;
    }
    return weights.size() - 1;
  }

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(i) - 1));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace teachsim
