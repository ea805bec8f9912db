#include "plurality/opinions.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "plurality/error.hpp"
#include "plurality/rng.hpp"

namespace plurality {

Opinion plurality_of(const OpinionCounts& counts) {
  require(!counts.empty(), "no opinions");
  auto best = std::max_element(counts.begin(), counts.end());
  auto ties = std::count(counts.begin(), counts.end(), *best);
  require(ties == 1, "no strict plurality: the largest count is shared");
  return static_cast<Opinion>(best - counts.begin());
}

double initial_bias(const OpinionCounts& counts) {
  require(!counts.empty(), "no opinions");
  OpinionCounts sorted = counts;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  const auto n = std::accumulate(sorted.begin(), sorted.end(), std::uint64_t{0});
  require(n > 0, "no nodes");
  const std::uint64_t second = sorted.size() > 1 ? sorted[1] : 0;
  return static_cast<double>(sorted[0] - second) / static_cast<double>(n);
}

OpinionCounts counts_from_alpha(std::size_t n, std::size_t k, double alpha) {
  require(k >= 1 && k <= n, "need 1 <= k <= n");
  require(alpha > 0.0 && alpha <= 1.0, "α must lie in (0, 1]");
  if (k == 1) return {n};
  auto gap = static_cast<std::uint64_t>(std::llround(alpha * static_cast<double>(n)));
  gap = std::clamp<std::uint64_t>(gap, 1, n);
  const std::uint64_t rest = n - gap;
  OpinionCounts counts(k, rest / k);
  for (std::size_t i = 0; i < rest % k; ++i) ++counts[i];
  counts[0] += gap;
  return counts;
}

std::vector<Opinion> assign_opinions(const OpinionCounts& counts, std::uint64_t seed) {
  std::vector<Opinion> out;
  for (std::size_t i = 0; i < counts.size(); ++i)
    out.insert(out.end(), counts[i], static_cast<Opinion>(i));
  Rng rng(derive_seed(seed, {stream::assignment}));
  std::shuffle(out.begin(), out.end(), rng);
  return out;
}

OpinionCounts count_opinions(const std::vector<Opinion>& assignment, std::size_t k) {
  OpinionCounts counts(k, 0);
  for (Opinion o : assignment) {
    require(o < k, "opinion label out of range");
    ++counts[o];
  }
  return counts;
}

}  // namespace plurality
