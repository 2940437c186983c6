#include "jaspa/inner_power.hpp"

#include <cassert>
#include <cmath>

#include "jaspa/errors.hpp"

namespace jaspa {

StepsizeSchedule StepsizeSchedule::power_law(double exponent) {
  if (!(exponent > 0.5 && exponent <= 1.0)) throw ValidationError("schedule", "power-law exponent must be in (0.5, 1]");
  return StepsizeSchedule(exponent, {});
}

StepsizeSchedule StepsizeSchedule::custom(std::vector<double> values) {
  if (values.empty()) throw ValidationError("schedule", "custom schedule needs at least one value");
  for (double v : values)
    if (!(v > 0.0 && v < 1.0)) throw ValidationError("schedule", "every stepsize must lie in (0, 1)");
  return StepsizeSchedule(0.0, std::move(values));
}

double StepsizeSchedule::operator()(std::size_t t) const {
  if (t == 0) throw DomainError("stepsize index starts at 1");
  if (!values_.empty()) return values_[std::min(t, values_.size()) - 1];
  if (exponent_ == 1.0) return 1.0 / static_cast<double>(t + 1);
  return std::pow(static_cast<double>(t + 1), -exponent_);
}

void averaged_update(std::vector<double>& p, const std::vector<double>& target, double alpha) {
  for (std::size_t k = 0; k < p.size(); ++k) p[k] = (1.0 - alpha) * p[k] + alpha * target[k];
}

namespace {

PowerProfile starting_point(const NetworkScenario& s, const AssociationProfile& a,
                            const std::optional<PowerProfile>& initial) {
  check_association(s, a);
  if (!initial) return uniform_powers(s, a);
  check_profile(s, a, *initial);
  return *initial;
}

InnerTraceRow record(const NetworkScenario& s, const AssociationProfile& a, const PowerProfile& p,
                     const std::vector<std::vector<double>>& phi) {
  InnerTraceRow row;
  double sq = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t k = 0; k < p[i].size(); ++k) {
      const double d = phi[i][k] - p[i][k];
      row.residual_inf = std::max(row.residual_inf, std::abs(d));
      sq += d * d;
    }
  }
  row.residual_l2 = std::sqrt(sq);
  row.potential = system_potential(s, a, p);
  row.sum_rate = sum_rate(s, a, p);
  return row;
}

std::vector<std::vector<double>> all_best_responses(const NetworkScenario& s, const AssociationProfile& a,
                                                    const PowerProfile& p) {
  std::vector<std::vector<double>> phi(s.num_mus);
  for (std::size_t i = 0; i < s.num_mus; ++i) phi[i] = wf_operator(s, a, p, i);
  return phi;
}

}  // namespace

InnerLoopResult a_iwf(const NetworkScenario& s, const AssociationProfile& a, const InnerConfig& config,
                      const std::optional<PowerProfile>& initial) {
  InnerLoopResult result;
  PowerProfile p = starting_point(s, a, initial);
  for (std::size_t t = 0;; ++t) {
    // synchronous round: every response is computed from the same snapshot
    const auto phi = all_best_responses(s, a, p);
    result.trace.push_back(record(s, a, p, phi));
    if (result.trace.back().residual_inf <= config.eps_wf) {
      result.converged = true;
      break;
    }
    if (t == config.max_iters) break;
    const double alpha = config.schedule(t + 1);
    for (std::size_t i = 0; i < s.num_mus; ++i) {
      averaged_update(p[i], phi[i], alpha);
#ifndef NDEBUG
      double total = 0.0;
      for (double v : p[i]) total += v;
      assert(total <= s.budget[i] * (1.0 + 1e-12));
#endif
    }
    result.iterations = t + 1;
  }
  result.powers = std::move(p);
  return result;
}

InnerLoopResult s_iwf(const NetworkScenario& s, const AssociationProfile& a, const InnerConfig& config,
                      const std::optional<PowerProfile>& initial) {
  InnerLoopResult result;
  PowerProfile p = starting_point(s, a, initial);
  result.update_potentials.push_back(system_potential(s, a, p));
  for (std::size_t t = 0;; ++t) {
    result.trace.push_back(record(s, a, p, all_best_responses(s, a, p)));
    if (result.trace.back().residual_inf <= config.eps_wf) {
      result.converged = true;
      break;
    }
    if (t == config.max_iters) break;
    for (std::size_t i = 0; i < s.num_mus; ++i) {
      p[i] = wf_operator(s, a, p, i);
      result.update_potentials.push_back(system_potential(s, a, p));
    }
    result.iterations = t + 1;
  }
  result.powers = std::move(p);
  return result;
}

InnerLoopResult solve_inner(const NetworkScenario& s, const AssociationProfile& a, const InnerConfig& config,
                            const std::optional<PowerProfile>& initial) {
  return config.solver == InnerSolver::AIwf ? a_iwf(s, a, config, initial) : s_iwf(s, a, config, initial);
}

ConvergenceReport convergence_diagnostics(const std::vector<InnerTraceRow>& trace, const StepsizeSchedule& schedule,
                                          double eps, double slack) {
  ConvergenceReport report;
  if (trace.empty()) return report;
  for (std::size_t t = trace.size() - 1; t > 0; --t) {
    if (trace[t].potential < trace[t - 1].potential - slack) {
      report.monotone_from = t;
      break;
    }
  }
  report.final_residual_inf = trace.back().residual_inf;
  report.residual_below_eps = report.final_residual_inf <= eps;
  for (std::size_t t = 0; t + 1 < trace.size(); ++t)
    report.weighted_residual_sum += schedule(t + 1) * trace[t].residual_l2 * trace[t].residual_l2;
  return report;
}

}  // namespace jaspa
