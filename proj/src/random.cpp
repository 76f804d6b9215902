#include "hdlp/random.hpp"

#include "hdlp/stats.hpp"

namespace hdlp {

double uniform_at(std::uint64_t key, std::uint64_t counter) noexcept {
  const std::uint64_t bits = mix64(key ^ mix64(counter + 0x7f4a7c159e3779b9ULL));
  // 53 random bits centred in their cell: strictly inside (0, 1).
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

double gaussian_at(std::uint64_t key, std::uint64_t counter) noexcept {
  return normal_quantile_fast(uniform_at(key, counter));
}

std::uint64_t CounterRng::below(std::uint64_t n) noexcept {
  const auto u = uniform();
  auto k = static_cast<std::uint64_t>(u * static_cast<double>(n));
  return k < n ? k : n - 1;
}

}  // namespace hdlp
