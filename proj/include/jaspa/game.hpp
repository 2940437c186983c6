#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "jaspa/scenario.hpp"

namespace jaspa {

/// Power fixed-point tolerance (infinity norm).
inline constexpr double kEpsWf = 1e-8;
/// Rate-gain tolerance for equilibrium verdicts.
inline constexpr double kEpsEq = 1e-6;
/// Rate comparisons in the best-AP rules treat differences below this as ties.
inline constexpr double kRateTieTolerance = 1e-12;

/// a[i] = AP serving MU i.
struct AssociationProfile {
  std::vector<std::size_t> ap;

  std::size_t size() const { return ap.size(); }
  std::size_t operator[](std::size_t mu) const { return ap[mu]; }
  std::size_t& operator[](std::size_t mu) { return ap[mu]; }
  std::vector<std::size_t> members(std::size_t w) const;
  /// Hyphen-joined AP indices, e.g. "0-1-1".
  std::string to_string() const;
  static AssociationProfile parse(const std::string& text);

  bool operator==(const AssociationProfile&) const = default;
  auto operator<=>(const AssociationProfile&) const = default;
};

/// p[i] = MU i's powers over the channels of its serving AP (local order).
struct PowerProfile {
  std::vector<std::vector<double>> mu;

  std::size_t size() const { return mu.size(); }
  std::vector<double>& operator[](std::size_t i) { return mu[i]; }
  const std::vector<double>& operator[](std::size_t i) const { return mu[i]; }
  bool operator==(const PowerProfile&) const = default;
};

enum class RateUnit { Bits, Nats };

/// Throws DomainError if `a` or `p` do not fit the scenario or p is infeasible.
void check_profile(const NetworkScenario& s, const AssociationProfile& a, const PowerProfile& p);
void check_association(const NetworkScenario& s, const AssociationProfile& a);

/// Each MU spreads its budget evenly over its AP's channels.
PowerProfile uniform_powers(const NetworkScenario& s, const AssociationProfile& a);

/// Interference MU `mu` sees on the channels of `ap` from the MUs associated
/// with `ap` under `a`, excluding itself. Other APs contribute nothing.
std::vector<double> interference_toward(const NetworkScenario& s, const AssociationProfile& a,
                                        const PowerProfile& p, std::size_t mu, std::size_t ap);
std::vector<double> interference_at(const NetworkScenario& s, const AssociationProfile& a, const PowerProfile& p,
                                    std::size_t mu);

/// (1/K) sum_k log(1 + g p / (n + I)) for MU `mu` at `ap`.
double rate_given_interference(const NetworkScenario& s, std::size_t mu, std::size_t ap,
                               std::span<const double> powers, std::span<const double> interference,
                               RateUnit unit = RateUnit::Bits);
double rate(const NetworkScenario& s, const AssociationProfile& a, const PowerProfile& p, std::size_t mu,
            RateUnit unit = RateUnit::Bits);
double sum_rate(const NetworkScenario& s, const AssociationProfile& a, const PowerProfile& p,
                RateUnit unit = RateUnit::Bits);

double per_ap_potential(const NetworkScenario& s, const AssociationProfile& a, const PowerProfile& p,
                        std::size_t ap, RateUnit unit = RateUnit::Bits);
double system_potential(const NetworkScenario& s, const AssociationProfile& a, const PowerProfile& p,
                        RateUnit unit = RateUnit::Bits);

/// dP/dp_i^k for every MU and channel of its AP (bits).
PowerProfile potential_gradient(const NetworkScenario& s, const AssociationProfile& a, const PowerProfile& p);

/// Water-filling best response of MU `mu` at `ap` against interference `interference`.
std::vector<double> wf_at(const NetworkScenario& s, std::size_t mu, std::size_t ap,
                          std::span<const double> interference);
/// Water-filling best response of MU `mu` at its current AP.
std::vector<double> wf_operator(const NetworkScenario& s, const AssociationProfile& a, const PowerProfile& p,
                                std::size_t mu);

struct Residual {
  PowerProfile s;  // Phi(p) - p
  double inf_norm = 0.0;
  double l2_norm = 0.0;
};
Residual residual(const NetworkScenario& s, const AssociationProfile& a, const PowerProfile& p);

/// Euclidean inner product of two profiles of the same shape.
double dot(const PowerProfile& x, const PowerProfile& y);

struct BestResponse {
  double rate = 0.0;
  std::vector<double> powers;
};
/// Best rate MU `mu` could get at `candidate_ap` with everyone else held fixed.
BestResponse best_response_rate(const NetworkScenario& s, const AssociationProfile& a, const PowerProfile& p,
                                std::size_t mu, std::size_t candidate_ap, RateUnit unit = RateUnit::Bits);

/// APs whose best-response rate is at least the current rate, plus the cost for
/// leaving. The current AP is tested without cost.
std::vector<std::size_t> best_ap_set(const NetworkScenario& s, const AssociationProfile& a, const PowerProfile& p,
                                     std::size_t mu, double connection_cost);

struct MuVerdict {
  double current_rate = 0.0;
  double best_rate = 0.0;  // best over all APs (the current one included)
  std::size_t best_ap = 0;
  double power_residual = 0.0;  // ||Phi_i - p_i||_inf
};

struct Violation {
  std::size_t mu = 0;
  std::size_t best_ap = 0;
  double rate_gain = 0.0;
  double power_residual = 0.0;
};

struct EquilibriumReport {
  bool is_equilibrium = true;
  std::optional<Violation> worst_violator;
  std::vector<MuVerdict> per_mu;
};

/// Power Nash equilibrium for the fixed association: every MU is within
/// `eps` (infinity norm) of its water-filling response.
EquilibriumReport verify_power_ne(const NetworkScenario& s, const AssociationProfile& a, const PowerProfile& p,
                                  double eps = kEpsEq);

/// Joint equilibrium: power NE and no MU gains more than `eps` in rate by
/// moving to another AP. Connection costs are not applied. In Nats mode the
/// rate tolerance is scaled by ln 2 so verdicts match the Bits mode.
EquilibriumReport verify_jep(const NetworkScenario& s, const AssociationProfile& a, const PowerProfile& p,
                             double eps = kEpsEq, RateUnit unit = RateUnit::Bits);

}  // namespace jaspa
