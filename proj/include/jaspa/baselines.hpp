#pragma once

#include <cstddef>
#include <vector>

#include "jaspa/game.hpp"
#include "jaspa/inner_power.hpp"
#include "jaspa/scenario.hpp"

namespace jaspa {

struct AssociationScore {
  AssociationProfile association;
  double sum_rate = 0.0;   // T(a): equilibrium throughput
  double potential = 0.0;  // maximal potential P-bar(a)
  double residual_inf = 0.0;
  std::size_t inner_iterations = 0;
  bool converged = false;
};

struct ExhaustiveResult {
  AssociationProfile best;        // argmax of T(a)
  double best_sum_rate = 0.0;     // T*
  AssociationProfile max_potential;
  double max_potential_value = 0.0;
  PowerProfile max_potential_powers;
  std::vector<AssociationScore> table;  // lexicographic association order
};

inline constexpr std::size_t kEnumerationCap = 100000;

/// Solves the inner power game for every one of the W^N associations.
/// Throws ResourceError when W^N exceeds `cap`.
ExhaustiveResult exhaustive_search(const NetworkScenario& s, const InnerConfig& inner = {},
                                   std::size_t cap = kEnumerationCap);

/// Each MU joins the geometrically nearest AP; ties go to the lower index.
AssociationProfile closest_ap(const NetworkScenario& s);

/// Throughput of the single-AP game in which every MU reaches all channels,
/// each channel keeping its gains toward the AP that owns it.
double virtual_ap_bound(const NetworkScenario& s, const InnerConfig& inner = {});

/// The pooled single-AP scenario used by `virtual_ap_bound`.
NetworkScenario pooled_scenario(const NetworkScenario& s);

}  // namespace jaspa
