#include "jaspa/waterfill.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "jaspa/errors.hpp"

namespace jaspa {

WaterFillResult water_fill(std::span<const double> gain_sq, std::span<const double> noise_plus_interference,
                           double budget) {
  const std::size_t n = gain_sq.size();
  if (n == 0) throw DomainError("water_fill: empty channel vector");
  if (noise_plus_interference.size() != n) throw DomainError("water_fill: length mismatch");
  if (!(budget > 0.0) || !std::isfinite(budget)) throw DomainError("water_fill: budget must be > 0");

  std::vector<double> floor(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double g = gain_sq[k];
    const double x = noise_plus_interference[k];
    if (!(g > 0.0) || !(x > 0.0) || !std::isfinite(g) || !std::isfinite(x))
      throw DomainError("water_fill: gains and noise-plus-interference must be finite and > 0");
    floor[k] = x / g;
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return floor[a] < floor[b]; });

  // The prefix test is monotone in m, so the active set is the longest prefix
  // whose water level sits strictly above its highest floor.
  std::size_t active = 1;
  double prefix_sum = floor[order[0]];
  for (std::size_t m = 2; m <= n; ++m) {
    const double fm = floor[order[m - 1]];
    if (budget + prefix_sum - static_cast<double>(m - 1) * fm <= 0.0) break;
    prefix_sum += fm;
    active = m;
  }

  WaterFillResult result;
  result.water_level = (budget + prefix_sum) / static_cast<double>(active);
  result.powers.assign(n, 0.0);
  for (std::size_t m = 0; m < active; ++m) {
    const std::size_t k = order[m];
    result.powers[k] = std::max(result.water_level - floor[k], 0.0);
  }
  for (std::size_t k = 0; k < n; ++k)
    if (result.powers[k] > 0.0) result.active_set.push_back(k);
  return result;
}

}  // namespace jaspa
