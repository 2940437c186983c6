#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "jaspa/game.hpp"
#include "jaspa/scenario.hpp"

namespace jaspa {

/// Diminishing stepsizes alpha_t, t >= 1, every value in (0, 1).
class StepsizeSchedule {
 public:
  /// Exponent of the default power law alpha_t = (t+1)^-0.51.
  static constexpr double kDefaultExponent = 0.51;

  /// alpha_t = (t+1)^-exponent; requires exponent in (0.5, 1] so that the sum
  /// diverges and the sum of squares converges.
  static StepsizeSchedule power_law(double exponent = kDefaultExponent);
  /// alpha_t = 1/(t+1).
  static StepsizeSchedule harmonic() { return power_law(1.0); }
  /// alpha_t = values[t-1]; the last value repeats past the end.
  static StepsizeSchedule custom(std::vector<double> values);

  StepsizeSchedule() : StepsizeSchedule(power_law()) {}

  double operator()(std::size_t t) const;
  double exponent() const { return exponent_; }
  bool is_custom() const { return !values_.empty(); }

 private:
  StepsizeSchedule(double exponent, std::vector<double> values) : exponent_(exponent), values_(std::move(values)) {}
  double exponent_;
  std::vector<double> values_;
};

enum class InnerSolver { AIwf, SIwf };

struct InnerConfig {
  InnerSolver solver = InnerSolver::AIwf;
  StepsizeSchedule schedule;
  double eps_wf = kEpsWf;
  std::size_t max_iters = 100000;
};

struct InnerTraceRow {
  double potential = 0.0;
  double sum_rate = 0.0;
  double residual_inf = 0.0;
  double residual_l2 = 0.0;
};

struct InnerLoopResult {
  PowerProfile powers;
  std::size_t iterations = 0;  // number of updates applied
  bool converged = false;
  /// Row t describes the profile after t updates (row 0 is the initial profile).
  std::vector<InnerTraceRow> trace;
  /// S-IWF only: potential after every single-MU update.
  std::vector<double> update_potentials;
};

/// p <- (1 - alpha) p + alpha * target, applied entrywise.
void averaged_update(std::vector<double>& p, const std::vector<double>& target, double alpha);

/// Averaged simultaneous iterative water-filling for a fixed association.
/// Stops once ||Phi(p) - p||_inf <= eps_wf or after max_iters updates.
/// Throws DomainError if `initial` is infeasible.
InnerLoopResult a_iwf(const NetworkScenario& s, const AssociationProfile& a, const InnerConfig& config = {},
                      const std::optional<PowerProfile>& initial = std::nullopt);

/// Sequential iterative water-filling; one iteration is a full round over the
/// MUs in ascending index order.
InnerLoopResult s_iwf(const NetworkScenario& s, const AssociationProfile& a, const InnerConfig& config = {},
                      const std::optional<PowerProfile>& initial = std::nullopt);

/// Dispatches on `config.solver`.
InnerLoopResult solve_inner(const NetworkScenario& s, const AssociationProfile& a, const InnerConfig& config = {},
                            const std::optional<PowerProfile>& initial = std::nullopt);

struct ConvergenceReport {
  /// First index after which the potential never decreases by more than `slack`.
  std::size_t monotone_from = 0;
  bool residual_below_eps = false;
  double final_residual_inf = 0.0;
  /// sum_t alpha_t ||s(p_t)||_2^2 over the trace.
  double weighted_residual_sum = 0.0;
};

ConvergenceReport convergence_diagnostics(const std::vector<InnerTraceRow>& trace, const StepsizeSchedule& schedule,
                                          double eps = kEpsWf, double slack = 0.0);

}  // namespace jaspa
