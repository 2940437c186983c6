#include "jaspa/baselines.hpp"

#include <cmath>

#include "jaspa/errors.hpp"

namespace jaspa {

ExhaustiveResult exhaustive_search(const NetworkScenario& s, const InnerConfig& inner, std::size_t cap) {
  std::size_t count = 1;
  for (std::size_t i = 0; i < s.num_mus; ++i) {
    if (count > cap / s.num_aps)
      throw ResourceError("exhaustive search needs W^N > " + std::to_string(cap) +
                          " profiles; sample associations instead");
    count *= s.num_aps;
  }
  if (count > cap) throw ResourceError("exhaustive search over " + std::to_string(count) + " profiles exceeds cap");

  ExhaustiveResult out;
  AssociationProfile a;
  a.ap.assign(s.num_mus, 0);
  bool first = true;
  for (std::size_t n = 0; n < count; ++n) {
    // a is the base-W digits of n, MU 0 most significant
    std::size_t rest = n;
    for (std::size_t i = s.num_mus; i-- > 0;) {
      a[i] = rest % s.num_aps;
      rest /= s.num_aps;
    }
    InnerLoopResult eq = solve_inner(s, a, inner);
    AssociationScore score{a,
                           sum_rate(s, a, eq.powers),
                           system_potential(s, a, eq.powers),
                           eq.trace.back().residual_inf,
                           eq.iterations,
                           eq.converged};
    if (first || score.sum_rate > out.best_sum_rate) {
      out.best = a;
      out.best_sum_rate = score.sum_rate;
    }
    if (first || score.potential > out.max_potential_value) {
      out.max_potential = a;
      out.max_potential_value = score.potential;
      out.max_potential_powers = std::move(eq.powers);
    }
    first = false;
    out.table.push_back(std::move(score));
  }
  return out;
}

AssociationProfile closest_ap(const NetworkScenario& s) {
  AssociationProfile a;
  a.ap.resize(s.num_mus);
  for (std::size_t i = 0; i < s.num_mus; ++i) {
    double best = 0.0;
    for (std::size_t w = 0; w < s.num_aps; ++w) {
      const double d = std::hypot(s.mu_positions[i][0] - s.ap_positions[w][0],
                                  s.mu_positions[i][1] - s.ap_positions[w][1]);
      if (w == 0 || d < best) {
        best = d;
        a[i] = w;
      }
    }
  }
  return a;
}

NetworkScenario pooled_scenario(const NetworkScenario& s) {
  NetworkScenario v;
  v.num_mus = s.num_mus;
  v.num_aps = 1;
  v.num_channels = s.num_channels;
  v.ap_channels.assign(1, {});
  v.noise.assign(1, {});
  v.gain_sq.assign(s.num_mus, std::vector<std::vector<double>>(1));
  for (std::size_t w = 0; w < s.num_aps; ++w) {
    v.ap_channels[0].insert(v.ap_channels[0].end(), s.ap_channels[w].begin(), s.ap_channels[w].end());
    v.noise[0].insert(v.noise[0].end(), s.noise[w].begin(), s.noise[w].end());
    for (std::size_t i = 0; i < s.num_mus; ++i)
      v.gain_sq[i][0].insert(v.gain_sq[i][0].end(), s.gain_sq[i][w].begin(), s.gain_sq[i][w].end());
  }
  v.budget = s.budget;
  v.connection_cost = s.connection_cost;
  v.mu_positions = s.mu_positions;
  Point centroid{0.0, 0.0};
  for (const auto& ap : s.ap_positions) {
    centroid[0] += ap[0] / static_cast<double>(s.num_aps);
    centroid[1] += ap[1] / static_cast<double>(s.num_aps);
  }
  v.ap_positions = {centroid};
  v.seed = s.seed;
  v.validate();
  return v;
}

double virtual_ap_bound(const NetworkScenario& s, const InnerConfig& inner) {
  const NetworkScenario pooled = pooled_scenario(s);
  AssociationProfile a;
  a.ap.assign(s.num_mus, 0);
  const InnerLoopResult eq = solve_inner(pooled, a, inner);
  return sum_rate(pooled, a, eq.powers);
}

}  // namespace jaspa
