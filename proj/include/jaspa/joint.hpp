#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "jaspa/game.hpp"
#include "jaspa/inner_power.hpp"
#include "jaspa/scenario.hpp"

namespace jaspa {

/// How a MU turns its candidate APs into a best reply.
enum class BestReplyRule {
  /// Uniform pick among every AP that does at least as well as staying (plus cost).
  AnyImproving,
  /// Always the AP with the highest best-response rate (ties broken uniformly).
  /// Used as the naive greedy baseline; with memory 1 it can oscillate forever.
  Greedy,
};

struct JaspaConfig {
  std::size_t memory_len = 10;
  /// Per-MU connection costs; empty means "use the scenario's".
  std::vector<double> connection_cost;
  InnerConfig inner;
  std::size_t max_outer = 10000;
  std::uint64_t seed = 0;
  BestReplyRule rule = BestReplyRule::AnyImproving;
  /// Overrides the random initial association.
  std::optional<AssociationProfile> initial_association;
  /// Keep per-row power profiles and beta snapshots in the result.
  bool record_history = false;

  /// Throws ValidationError on bad settings; returns warnings (memory shorter than N).
  std::vector<std::string> validate(const NetworkScenario& s) const;
  double cost(const NetworkScenario& s, std::size_t mu) const;
};

struct OuterTraceRow {
  std::size_t outer_iter = 0;
  AssociationProfile association;
  double sum_rate = 0.0;
  double potential = 0.0;
  double residual_inf = 0.0;
  std::size_t switch_count = 0;  // MUs whose AP differs from the previous row
  std::size_t inner_iterations = 0;
};

struct RunResult {
  AssociationProfile association;
  PowerProfile powers;
  bool converged = false;
  std::size_t outer_iterations = 0;
  std::vector<OuterTraceRow> trace;
  EquilibriumReport jep_report;
  std::vector<std::string> warnings;
  /// Filled when `record_history` is set; aligned with `trace`.
  std::vector<PowerProfile> power_history;
  std::vector<std::vector<std::vector<double>>> beta_history;  // [row][mu][ap]
};

/// One MU's FIFO of best-reply vectors (stored as AP indices) and the
/// probability vector it induces. beta is updated incrementally, never renormalized.
class BestReplyMemory {
 public:
  BestReplyMemory(std::size_t num_aps, std::size_t memory_len);

  /// Pushes e_ap, evicting the oldest entry once M entries are held.
  void push(std::size_t ap);

  const std::vector<double>& beta() const { return beta_; }
  const std::deque<std::size_t>& entries() const { return entries_; }
  std::size_t pushes() const { return pushes_; }
  std::size_t memory_len() const { return memory_len_; }

 private:
  std::size_t memory_len_;
  std::size_t pushes_ = 0;
  std::deque<std::size_t> entries_;
  std::vector<double> beta_;
};

/// Draws an AP index from beta; entries at or below 1e-12 are treated as zero.
template <typename Rng>
std::size_t sample_from_beta(const std::vector<double>& beta, Rng& rng);

/// Two-timescale algorithm: inner power equilibrium per association, then
/// randomized best-reply association through each MU's memory. Stops when
/// the last M+1 associations agree. Row t holds a^(t) with its equilibrium powers.
RunResult jaspa(const NetworkScenario& s, const JaspaConfig& config);

/// Sequential variant: one MU per iteration (round-robin) jumps to a globally
/// best AP and water-fills there. Stops after N consecutive quiet iterations.
RunResult se_jaspa(const NetworkScenario& s, const JaspaConfig& config);

/// Simultaneous variant: every MU updates its memory and samples an AP each
/// iteration; stayers average towards their water-filling response with
/// stepsize alpha^(T_i), switchers jump to it. Stops when the association has
/// been constant for M+1 rows and the residual is below eps_wf.
RunResult si_jaspa(const NetworkScenario& s, const JaspaConfig& config);

}  // namespace jaspa

#include "jaspa/detail/sampling.hpp"
