#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace pmq {

using Rng = std::mt19937_64;

/// splitmix64 finalizer; used to derive independent seed streams.
constexpr std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for item `index` of stream `stream` under `base`. Pure function of its
/// arguments, so trial order never changes the values drawn.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream,
                                    std::uint64_t index) {
  return mix_seed(mix_seed(base ^ mix_seed(stream)) + index);
}

/// Uniform integer in [0, bound). The standard distributions are
/// implementation-defined; this one is not, which keeps reports byte-stable
/// across standard libraries.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  if (bound <= 1) return 0;
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

/// Floyd's sampling: `count` distinct values from [0, universe), each subset
/// equally likely. Returned in ascending order.
std::vector<std::uint64_t> sample_distinct(Rng& rng, std::uint64_t universe,
                                           std::uint64_t count);

}  // namespace pmq
