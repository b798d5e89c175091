#include "pmq/random.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace pmq {

std::vector<std::uint64_t> sample_distinct(Rng& rng, std::uint64_t universe,
                                           std::uint64_t count) {
  if (count > universe) {
    throw std::invalid_argument("sample_distinct: count exceeds universe");
  }
  std::unordered_set<std::uint64_t> chosen;
  chosen.reserve(count);
  std::vector<std::uint64_t> out;
  out.reserve(count);
  for (std::uint64_t j = universe - count; j < universe; ++j) {
    const std::uint64_t t = uniform_below(rng, j + 1);
    const std::uint64_t pick = chosen.contains(t) ? j : t;
    chosen.insert(pick);
    out.push_back(pick);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace pmq
