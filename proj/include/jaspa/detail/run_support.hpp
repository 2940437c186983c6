#pragma once

#include <deque>
#include <vector>

#include "jaspa/detail/sampling.hpp"
#include "jaspa/joint.hpp"

namespace jaspa::detail {

OuterTraceRow make_row(const NetworkScenario& s, const AssociationProfile& a, const PowerProfile& p,
                       std::size_t outer_iter, const AssociationProfile* previous, std::size_t inner_iterations);

/// True when the last `length` entries of `history` are identical.
bool stable_tail(const std::deque<AssociationProfile>& history, std::size_t length);

AssociationProfile initial_association(const NetworkScenario& s, const JaspaConfig& config,
                                       std::vector<Rng>& streams);

std::size_t pick_best_reply(const NetworkScenario& s, const AssociationProfile& a, const PowerProfile& p,
                            std::size_t mu, double cost, BestReplyRule rule, Rng& rng);

/// Attaches the cost-free equilibrium verdict for the final profile.
void finish(const NetworkScenario& s, RunResult& result);

}  // namespace jaspa::detail
