#include "jaspa/joint.hpp"

#include <algorithm>
#include <cmath>

#include "jaspa/detail/run_support.hpp"
#include "jaspa/errors.hpp"

namespace jaspa {

std::vector<std::string> JaspaConfig::validate(const NetworkScenario& s) const {
  if (memory_len == 0) throw ValidationError("memory_len", "must be at least 1");
  if (max_outer == 0) throw ValidationError("max_outer", "must be at least 1");
  if (!connection_cost.empty()) {
    if (connection_cost.size() != s.num_mus) throw ValidationError("connection_cost", "expected one entry per MU");
    for (double c : connection_cost)
      if (!(c >= 0.0) || !std::isfinite(c)) throw ValidationError("connection_cost", "must be finite and >= 0");
  }
  if (initial_association) {
    if (initial_association->size() != s.num_mus)
      throw ValidationError("initial_association", "length must equal num_mus");
    for (std::size_t w : initial_association->ap)
      if (w >= s.num_aps) throw ValidationError("initial_association", "AP index out of range");
  }
  std::vector<std::string> warnings;
  if (memory_len < s.num_mus)
    warnings.push_back("memory_len (" + std::to_string(memory_len) + ") < num_mus (" + std::to_string(s.num_mus) +
                       "): convergence is not guaranteed");
  return warnings;
}

double JaspaConfig::cost(const NetworkScenario& s, std::size_t mu) const {
  return connection_cost.empty() ? s.connection_cost[mu] : connection_cost[mu];
}

BestReplyMemory::BestReplyMemory(std::size_t num_aps, std::size_t memory_len)
    : memory_len_(memory_len), beta_(num_aps, 0.0) {
  if (memory_len == 0) throw ValidationError("memory_len", "must be at least 1");
}

void BestReplyMemory::push(std::size_t ap) {
  if (ap >= beta_.size()) throw DomainError("best reply AP out of range");
  const double step = 1.0 / static_cast<double>(memory_len_);
  if (pushes_ == 0) {
    beta_.assign(beta_.size(), 0.0);
    beta_[ap] = 1.0;
  } else {
    // before the memory is full the first entry stands in for the evicted one
    const std::size_t dropped = entries_.front();
    beta_[ap] += step;
    beta_[dropped] -= step;
  }
  if (entries_.size() >= memory_len_) entries_.pop_front();
  entries_.push_back(ap);
  ++pushes_;
}

namespace detail {

OuterTraceRow make_row(const NetworkScenario& s, const AssociationProfile& a, const PowerProfile& p,
                       std::size_t outer_iter, const AssociationProfile* previous, std::size_t inner_iterations) {
  OuterTraceRow row;
  row.outer_iter = outer_iter;
  row.association = a;
  row.sum_rate = sum_rate(s, a, p);
  row.potential = system_potential(s, a, p);
  row.residual_inf = residual(s, a, p).inf_norm;
  row.inner_iterations = inner_iterations;
  if (previous)
    for (std::size_t i = 0; i < a.size(); ++i) row.switch_count += (a[i] != (*previous)[i]) ? 1 : 0;
  return row;
}

bool stable_tail(const std::deque<AssociationProfile>& history, std::size_t length) {
  if (history.size() < length) return false;
  for (std::size_t m = 1; m < length; ++m)
    if (history[history.size() - 1 - m] != history.back()) return false;
  return true;
}

AssociationProfile initial_association(const NetworkScenario& s, const JaspaConfig& config,
                                       std::vector<Rng>& streams) {
  if (config.initial_association) return *config.initial_association;
  AssociationProfile a;
  a.ap.resize(s.num_mus);
  for (std::size_t i = 0; i < s.num_mus; ++i) a[i] = uniform_index(s.num_aps, streams[i]);
  return a;
}

std::size_t pick_best_reply(const NetworkScenario& s, const AssociationProfile& a, const PowerProfile& p,
                            std::size_t mu, double cost, BestReplyRule rule, Rng& rng) {
  if (rule == BestReplyRule::AnyImproving) {
    const auto candidates = best_ap_set(s, a, p, mu, cost);
    if (candidates.empty()) return a[mu];
    return candidates[uniform_index(candidates.size(), rng)];
  }
  std::vector<double> score(s.num_aps);
  double best = -1.0;
  for (std::size_t w = 0; w < s.num_aps; ++w) {
    score[w] = best_response_rate(s, a, p, mu, w).rate - (w == a[mu] ? 0.0 : cost);
    best = std::max(best, score[w]);
  }
  std::vector<std::size_t> top;
  for (std::size_t w = 0; w < s.num_aps; ++w)
    if (score[w] >= best - kRateTieTolerance) top.push_back(w);
  return top[uniform_index(top.size(), rng)];
}

void finish(const NetworkScenario& s, RunResult& result) {
  result.jep_report = verify_jep(s, result.association, result.powers);
}

}  // namespace detail

using detail::make_row;
using detail::stable_tail;

RunResult jaspa(const NetworkScenario& s, const JaspaConfig& config) {
  RunResult result;
  result.warnings = config.validate(s);
  auto streams = detail::make_mu_streams(config.seed, 1, s.num_mus);
  AssociationProfile a = detail::initial_association(s, config, streams);
  std::vector<BestReplyMemory> memories(s.num_mus, BestReplyMemory(s.num_aps, config.memory_len));
  std::deque<AssociationProfile> history{a};

  for (std::size_t t = 0;; ++t) {
    InnerLoopResult inner = solve_inner(s, a, config.inner);
    const AssociationProfile* previous = history.size() > 1 ? &history[history.size() - 2] : nullptr;
    result.trace.push_back(make_row(s, a, inner.powers, t, previous, inner.iterations));
    if (config.record_history) {
      result.power_history.push_back(inner.powers);
      std::vector<std::vector<double>> betas;
      for (const auto& m : memories) betas.push_back(m.beta());
      result.beta_history.push_back(std::move(betas));
    }
    result.association = a;
    result.powers = std::move(inner.powers);
    result.outer_iterations = t + 1;

    if (stable_tail(history, config.memory_len + 1)) {
      result.converged = true;
      break;
    }
    if (t + 1 >= config.max_outer) break;

    for (std::size_t i = 0; i < s.num_mus; ++i)
      memories[i].push(detail::pick_best_reply(s, a, result.powers, i, config.cost(s, i), config.rule, streams[i]));
    AssociationProfile next = a;
    for (std::size_t i = 0; i < s.num_mus; ++i) next[i] = sample_from_beta(memories[i].beta(), streams[i]);
    a = std::move(next);
    history.push_back(a);
    if (history.size() > config.memory_len + 1) history.pop_front();
  }
  detail::finish(s, result);
  return result;
}

RunResult se_jaspa(const NetworkScenario& s, const JaspaConfig& config) {
  RunResult result;
  result.warnings = config.validate(s);
  auto streams = detail::make_mu_streams(config.seed, 2, s.num_mus);
  AssociationProfile a = detail::initial_association(s, config, streams);
  PowerProfile p = uniform_powers(s, a);
  std::size_t quiet = 0;

  auto record = [&](std::size_t t, const AssociationProfile* previous) {
    result.trace.push_back(make_row(s, a, p, t, previous, 0));
    if (config.record_history) result.power_history.push_back(p);
  };
  record(0, nullptr);

  for (std::size_t t = 0; t < config.max_outer; ++t) {
    const std::size_t i = t % s.num_mus;
    std::vector<BestResponse> responses;
    double best = -1.0;
    for (std::size_t w = 0; w < s.num_aps; ++w) {
      responses.push_back(best_response_rate(s, a, p, i, w));
      const double score = responses[w].rate - (w == a[i] ? 0.0 : config.cost(s, i));
      best = std::max(best, score);
    }
    std::vector<std::size_t> argmax;
    for (std::size_t w = 0; w < s.num_aps; ++w) {
      const double score = responses[w].rate - (w == a[i] ? 0.0 : config.cost(s, i));
      if (score >= best - kRateTieTolerance) argmax.push_back(w);
    }
    const std::size_t target = argmax[detail::uniform_index(argmax.size(), streams[i])];

    bool changed = target != a[i];
    if (!changed) {
      for (std::size_t k = 0; k < p[i].size(); ++k)
        if (std::abs(responses[target].powers[k] - p[i][k]) > config.inner.eps_wf) changed = true;
    }
    const AssociationProfile previous = a;
    a[i] = target;
    p[i] = std::move(responses[target].powers);
    quiet = changed ? 0 : quiet + 1;

    record(t + 1, &previous);
    result.outer_iterations = t + 1;
    if (quiet >= s.num_mus) {
      result.converged = true;
      break;
    }
  }
  result.association = a;
  result.powers = p;
  detail::finish(s, result);
  return result;
}

RunResult si_jaspa(const NetworkScenario& s, const JaspaConfig& config) {
  RunResult result;
  result.warnings = config.validate(s);
  auto streams = detail::make_mu_streams(config.seed, 3, s.num_mus);
  AssociationProfile a = detail::initial_association(s, config, streams);
  PowerProfile p = uniform_powers(s, a);
  std::vector<BestReplyMemory> memories(s.num_mus, BestReplyMemory(s.num_aps, config.memory_len));
  std::vector<std::size_t> stay(s.num_mus, 0);
  std::deque<AssociationProfile> history{a};

  for (std::size_t t = 0;; ++t) {
    const AssociationProfile* previous = history.size() > 1 ? &history[history.size() - 2] : nullptr;
    result.trace.push_back(make_row(s, a, p, t, previous, 0));
    if (config.record_history) {
      result.power_history.push_back(p);
      std::vector<std::vector<double>> betas;
      for (const auto& m : memories) betas.push_back(m.beta());
      result.beta_history.push_back(std::move(betas));
    }
    result.outer_iterations = t;
    if (stable_tail(history, config.memory_len + 1) && result.trace.back().residual_inf <= config.inner.eps_wf) {
      result.converged = true;
      break;
    }
    if (t >= config.max_outer) break;

    for (std::size_t i = 0; i < s.num_mus; ++i)
      memories[i].push(detail::pick_best_reply(s, a, p, i, config.cost(s, i), config.rule, streams[i]));
    AssociationProfile next = a;
    for (std::size_t i = 0; i < s.num_mus; ++i) next[i] = sample_from_beta(memories[i].beta(), streams[i]);

    PowerProfile next_p = p;
    for (std::size_t i = 0; i < s.num_mus; ++i) {
      const std::size_t target = next[i];
      auto response = wf_at(s, i, target, interference_toward(s, a, p, i, target));
      if (target != a[i]) {
        stay[i] = 1;
        next_p[i] = std::move(response);
      } else {
        stay[i] += 1;
        averaged_update(next_p[i], response, config.inner.schedule(stay[i]));
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
  return result;
}

}  // namespace jaspa
