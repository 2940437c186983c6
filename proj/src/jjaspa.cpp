#include "jaspa/jjaspa.hpp"

#include <algorithm>

#include "jaspa/detail/run_support.hpp"
#include "jaspa/errors.hpp"
#include "json.hpp"

namespace jaspa {

MuMemory::MuMemory(std::size_t memory_len) : memory_len_(memory_len) {
  if (memory_len == 0) throw ValidationError("memory_len", "must be at least 1");
}

void MuMemory::push(MuSnapshot snapshot) {
  if (entries_.size() >= memory_len_) entries_.pop_front();
  entries_.push_back(std::move(snapshot));
}

ApMemory::ApMemory(std::size_t num_aps, std::size_t cap) : cap_(cap), per_ap_(num_aps) {}

void ApMemory::update(std::size_t ap, const std::vector<std::size_t>& coalition,
                      std::vector<std::vector<double>> powers, std::vector<std::vector<double>> interference) {
  if (ap >= per_ap_.size()) throw DomainError("AP index out of range");
  if (powers.size() != coalition.size() || interference.size() != coalition.size())
    throw DomainError("coalition profile size mismatch");
  auto& table = per_ap_[ap];
  auto it = table.find(coalition);
  if (it == table.end()) {
    if (entries_ >= cap_)
      throw ResourceError("AP memory exceeded " + std::to_string(cap_) + " coalition entries");
    it = table.emplace(coalition, CoalitionRecord{coalition, {}, {}, 0}).first;
    ++entries_;
  }
  it->second.powers = std::move(powers);
  it->second.interference = std::move(interference);
  it->second.visits += 1;
}

const CoalitionRecord* ApMemory::find(std::size_t ap, const std::vector<std::size_t>& coalition) const {
  const auto& table = per_ap_.at(ap);
  const auto it = table.find(coalition);
  return it == table.end() ? nullptr : &it->second;
}

std::size_t ApMemory::visits(std::size_t ap, const std::vector<std::size_t>& coalition) const {
  const CoalitionRecord* record = find(ap, coalition);
  return record ? record->visits : 0;
}

std::string ApMemory::dump() const {
  nlohmann::json doc;
  doc["aps"] = nlohmann::json::array();
  for (std::size_t w = 0; w < per_ap_.size(); ++w) {
    nlohmann::json entry{{"ap", w}, {"coalitions", nlohmann::json::array()}};
    for (const auto& [members, record] : per_ap_[w])
      entry["coalitions"].push_back({{"members", members}, {"visits", record.visits}});
    doc["aps"].push_back(std::move(entry));
  }
  return doc.dump(1) + "\n";
}

std::vector<std::size_t> sampled_best_ap_set(const NetworkScenario& s, std::size_t mu, const MuSnapshot& snapshot,
                                             double connection_cost) {
  std::vector<std::size_t> out;
  for (std::size_t w = 0; w < s.num_aps; ++w) {
    if (w == snapshot.ap) {
      out.push_back(w);
      continue;
    }
    const auto& interference = snapshot.interference[w];
    const auto powers = wf_at(s, mu, w, interference);
    const double best = rate_given_interference(s, mu, w, powers, interference);
    if (best > snapshot.rate + connection_cost + kRateTieTolerance) out.push_back(w);
  }
  return out;
}

namespace {

std::size_t position_of(const std::vector<std::size_t>& members, std::size_t mu) {
  return static_cast<std::size_t>(std::lower_bound(members.begin(), members.end(), mu) - members.begin());
}

}  // namespace

JJaspaRun j_jaspa_run(const NetworkScenario& s, const JaspaConfig& config, std::size_t coalition_cap) {
  JJaspaRun run{RunResult{}, ApMemory(s.num_aps, coalition_cap), {}};
  RunResult& result = run.result;
  result.warnings = config.validate(s);
  auto streams = detail::make_mu_streams(config.seed, 4, s.num_mus);
  AssociationProfile a = detail::initial_association(s, config, streams);
  PowerProfile p;
  p.mu.resize(s.num_mus);
  for (std::size_t i = 0; i < s.num_mus; ++i)
    p[i] = detail::random_feasible_power(s.channels_at(a[i]), s.budget[i], streams[i]);

  std::vector<MuMemory> memories(s.num_mus, MuMemory(config.memory_len));
  std::deque<AssociationProfile> history{a};

  for (std::size_t t = 0;; ++t) {
    // every MU records what it sees now, at every AP
    std::vector<MuSnapshot> now(s.num_mus);
    for (std::size_t i = 0; i < s.num_mus; ++i) {
      now[i].ap = a[i];
      for (std::size_t w = 0; w < s.num_aps; ++w) now[i].interference.push_back(interference_toward(s, a, p, i, w));
      now[i].rate = rate_given_interference(s, i, a[i], p[i], now[i].interference[a[i]]);
      memories[i].push(now[i]);
    }

    // each AP stores the profile of its current coalition
    for (std::size_t w = 0; w < s.num_aps; ++w) {
      const auto members = a.members(w);
      if (members.empty()) continue;
      std::vector<std::vector<double>> powers, interference;
      for (std::size_t i : members) {
        powers.push_back(p[i]);
        interference.push_back(now[i].interference[w]);
      }
      run.ap_memory.update(w, members, std::move(powers), std::move(interference));
    }

    const AssociationProfile* previous = history.size() > 1 ? &history[history.size() - 2] : nullptr;
    result.trace.push_back(detail::make_row(s, a, p, t, previous, 0));
    if (config.record_history) result.power_history.push_back(p);
    result.outer_iterations = t;
    if (detail::stable_tail(history, config.memory_len + 1) &&
        result.trace.back().residual_inf <= config.inner.eps_wf) {
      result.converged = true;
      break;
    }
    if (t >= config.max_outer) break;

    // sample a remembered state and react to it
    AssociationProfile next = a;
    std::vector<std::size_t> sampled(s.num_mus);
    for (std::size_t i = 0; i < s.num_mus; ++i) {
      const MuSnapshot& snapshot = memories[i].sample(streams[i], &sampled[i]);
      const auto candidates = sampled_best_ap_set(s, i, snapshot, config.cost(s, i));
      next[i] = candidates[detail::uniform_index(candidates.size(), streams[i])];
    }
    if (config.record_history) run.sampled_index.push_back(std::move(sampled));

    // power from the destination coalition's stored state
    PowerProfile next_p;
    next_p.mu.resize(s.num_mus);
    for (std::size_t i = 0; i < s.num_mus; ++i) {
      const std::size_t w = next[i];
      const auto coalition = next.members(w);
      const CoalitionRecord* record = run.ap_memory.find(w, coalition);
      if (record && record->visits >= 1) {
        const std::size_t pos = position_of(coalition, i);
        auto response = wf_at(s, i, w, record->interference[pos]);
        next_p[i] = record->powers[pos];
        averaged_update(next_p[i], response, config.inner.schedule(record->visits));
      } else {
        next_p[i] = detail::random_feasible_power(s.channels_at(w), s.budget[i], streams[i]);
      }
    }
    a = std::move(next);
    p = std::move(next_p);
    history.push_back(a);
    if (history.size() > config.memory_len + 1) history.pop_front();
  }
  result.association = a;
  result.powers = p;
  detail::finish(s, result);
  return run;
}

RunResult j_jaspa(const NetworkScenario& s, const JaspaConfig& config) { return j_jaspa_run(s, config).result; }

}  // namespace jaspa
