#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace jaspa {

struct WaterFillResult {
  std::vector<double> powers;
  double water_level = 0.0;
  std::vector<std::size_t> active_set;  // positions with positive power, ascending
};

/// Single-user water-filling: maximizes sum_k log(1 + g_k p_k / x_k) subject to
/// p >= 0 and sum p <= budget, where x_k is noise plus interference.
///
/// The water level is found exactly by sorting the floors f_k = x_k / g_k and
/// taking the largest prefix m with budget + sum_{j<m} (f_j - f_m) > 0; the
/// budget is always exhausted. Throws DomainError on empty or non-positive input.
WaterFillResult water_fill(std::span<const double> gain_sq, std::span<const double> noise_plus_interference,
                           double budget);

}  // namespace jaspa
