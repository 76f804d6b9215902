#pragma once

#include <cstdint>

namespace hdlp {

/// SplitMix64 finalizer; a bijective avalanche mix on 64 bits.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed for sub-stream `index` of `base`. Used for per-replication,
/// per-draw and per-node streams so results never depend on scheduling.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept {
  return mix64(base ^ mix64(index ^ 0x632be59bd9b4e019ULL));
}

double uniform_at(std::uint64_t key, std::uint64_t counter) noexcept;
double gaussian_at(std::uint64_t key, std::uint64_t counter) noexcept;

/// Counter-based generator: the i-th variate of a stream is a pure function
/// of (key, i). Gaussians come from the inverse normal CDF of the uniform.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) noexcept : key_(key) {}

  double uniform() noexcept { return uniform_at(key_, counter_++); }
  double gaussian() noexcept { return gaussian_at(key_, counter_++); }
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) noexcept;

  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace hdlp
