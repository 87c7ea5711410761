#include "twosource/splitmix.hpp"

#include <set>
#include <stdexcept>

namespace twosource {

// Floyd's sampling: k draws, no O(n) scratch, so n may be 2^32 or more.
std::vector<std::uint64_t> sample_subset(SplitMix64& rng, std::uint64_t n, std::uint64_t k) {
  if (k > n) throw std::invalid_argument("sample_subset: k > n");
  std::set<std::uint64_t> chosen;
  for (std::uint64_t j = n - k; j < n; ++j) {
    const auto t = rng.below(j + 1);
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  return {chosen.begin(), chosen.end()};
}

}  // namespace twosource
