#pragma once

#include <cstddef>
#include <deque>
#include <map>
#include <string>
#include <vector>

#include "jaspa/joint.hpp"

namespace jaspa {

/// What a MU remembers about one past iteration.
struct MuSnapshot {
  std::size_t ap = 0;
  /// Interference the MU would see at every AP: [ap][local channel].
  std::vector<std::vector<double>> interference;
  double rate = 0.0;
};

/// FIFO of the last M snapshots (association, interference, rate share one index).
class MuMemory {
 public:
  explicit MuMemory(std::size_t memory_len);

  void push(MuSnapshot snapshot);
  std::size_t size() const { return entries_.size(); }
  const MuSnapshot& at(std::size_t index) const { return entries_.at(index); }

  /// Uniform index over the current buffer; all three reads use it.
  template <typename Rng>
  const MuSnapshot& sample(Rng& rng, std::size_t* index_out = nullptr) const;

 private:
  std::size_t memory_len_;
  std::deque<MuSnapshot> entries_;
};

/// State an AP keeps for one exact set of associated MUs.
struct CoalitionRecord {
  std::vector<std::size_t> members;               // ascending MU indices
  std::vector<std::vector<double>> powers;        // aligned with members
  std::vector<std::vector<double>> interference;  // aligned with members
  std::size_t visits = 0;
};

/// Per-AP map from coalition to its most recent power/interference profile
/// and visit count. The total entry count is capped.
class ApMemory {
 public:
  static constexpr std::size_t kDefaultCap = 100000;

  ApMemory(std::size_t num_aps, std::size_t cap = kDefaultCap);

  /// Overwrites the stored profiles for (ap, coalition) and increments its
  /// visit count. Throws ResourceError when a new entry would exceed the cap.
  void update(std::size_t ap, const std::vector<std::size_t>& coalition, std::vector<std::vector<double>> powers,
              std::vector<std::vector<double>> interference);

  const CoalitionRecord* find(std::size_t ap, const std::vector<std::size_t>& coalition) const;
  std::size_t visits(std::size_t ap, const std::vector<std::size_t>& coalition) const;
  std::size_t size() const { return entries_; }
  const std::map<std::vector<std::size_t>, CoalitionRecord>& at_ap(std::size_t ap) const { return per_ap_.at(ap); }

  /// Debug dump: {"aps": [{"ap": w, "coalitions": [{"members": [...], "visits": n}, ...]}, ...]}.
  std::string dump() const;

 private:
  std::size_t cap_;
  std::size_t entries_ = 0;
  std::vector<std::map<std::vector<std::size_t>, CoalitionRecord>> per_ap_;
};

/// Best-AP set from a sampled snapshot: every AP whose water-filling rate
/// against the remembered interference strictly beats the remembered rate
/// (plus `connection_cost` when leaving), together with the remembered AP.
std::vector<std::size_t> sampled_best_ap_set(const NetworkScenario& s, std::size_t mu, const MuSnapshot& snapshot,
                                             double connection_cost = 0.0);

struct JJaspaRun {
  RunResult result;
  ApMemory ap_memory;
  /// [row][mu]: index sampled from the MU memory at that row (empty unless record_history).
  std::vector<std::vector<std::size_t>> sampled_index;
};

/// Joint-strategy variant: each MU reacts to a state sampled from its own
/// history; powers follow the destination AP's stored coalition profile with
/// stepsize alpha^(visits), or a uniform random feasible vector for a coalition
/// never seen before. Stops like si_jaspa.
JJaspaRun j_jaspa_run(const NetworkScenario& s, const JaspaConfig& config, std::size_t coalition_cap = ApMemory::kDefaultCap);
RunResult j_jaspa(const NetworkScenario& s, const JaspaConfig& config);

template <typename Rng>
const MuSnapshot& MuMemory::sample(Rng& rng, std::size_t* index_out) const {
  const std::size_t index = detail::uniform_index(entries_.size(), rng);
  if (index_out) *index_out = index;
  return entries_[index];
}

}  // namespace jaspa
