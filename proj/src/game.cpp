#include "jaspa/game.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "jaspa/errors.hpp"
#include "jaspa/waterfill.hpp"

namespace jaspa {

namespace {

double log_scale(RateUnit unit) { return unit == RateUnit::Bits ? 1.0 / std::numbers::ln2 : 1.0; }

}  // namespace

std::vector<std::size_t> AssociationProfile::members(std::size_t w) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < ap.size(); ++i)
    if (ap[i] == w) out.push_back(i);
  return out;
}

std::string AssociationProfile::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < ap.size(); ++i) {
    if (i) out += '-';
    out += std::to_string(ap[i]);
  }
  return out;
}

AssociationProfile AssociationProfile::parse(const std::string& text) {
  AssociationProfile a;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, '-')) {
    if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos)
      throw ParseError("bad association '" + text + "'");
    a.ap.push_back(std::stoul(item));
  }
  if (a.ap.empty() || text.back() == '-') throw ParseError("bad association '" + text + "'");
  return a;
}

void check_association(const NetworkScenario& s, const AssociationProfile& a) {
  if (a.size() != s.num_mus) throw DomainError("association length != num_mus");
  for (std::size_t w : a.ap)
    if (w >= s.num_aps) throw DomainError("association entry out of range");
}

void check_profile(const NetworkScenario& s, const AssociationProfile& a, const PowerProfile& p) {
  check_association(s, a);
  if (p.size() != s.num_mus) throw DomainError("power profile length != num_mus");
  for (std::size_t i = 0; i < s.num_mus; ++i) {
    if (p[i].size() != s.channels_at(a[i]))
      throw DomainError("power vector of MU " + std::to_string(i) + " does not match its AP's channels");
    double total = 0.0;
    for (double v : p[i]) {
      if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("negative or non-finite power");
      total += v;
    }
    if (total > s.budget[i] + 1e-12 * std::max(1.0, s.budget[i]))
      throw DomainError("power of MU " + std::to_string(i) + " exceeds its budget");
  }
}

PowerProfile uniform_powers(const NetworkScenario& s, const AssociationProfile& a) {
  check_association(s, a);
  PowerProfile p;
  p.mu.resize(s.num_mus);
  for (std::size_t i = 0; i < s.num_mus; ++i) {
    const std::size_t k = s.channels_at(a[i]);
    p[i].assign(k, s.budget[i] / static_cast<double>(k));
  }
  return p;
}

std::vector<double> interference_toward(const NetworkScenario& s, const AssociationProfile& a,
                                        const PowerProfile& p, std::size_t mu, std::size_t ap) {
  std::vector<double> interference(s.channels_at(ap), 0.0);
  for (std::size_t j = 0; j < s.num_mus; ++j) {
    if (j == mu || a[j] != ap) continue;
    const auto g = s.gain(j, ap);
    const auto& pj = p[j];
    if (pj.size() != g.size()) throw DomainError("power vector shape mismatch");
    for (std::size_t k = 0; k < g.size(); ++k) interference[k] += g[k] * pj[k];
  }
  return interference;
}

std::vector<double> interference_at(const NetworkScenario& s, const AssociationProfile& a, const PowerProfile& p,
                                    std::size_t mu) {
  return interference_toward(s, a, p, mu, a[mu]);
}

double rate_given_interference(const NetworkScenario& s, std::size_t mu, std::size_t ap,
                               std::span<const double> powers, std::span<const double> interference,
                               RateUnit unit) {
  const auto g = s.gain(mu, ap);
  const auto n = s.noise_at(ap);
  if (powers.size() != g.size() || interference.size() != g.size()) throw DomainError("rate: shape mismatch");
  double total = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) total += std::log1p(g[k] * powers[k] / (n[k] + interference[k]));
  return total * log_scale(unit) / static_cast<double>(s.num_channels);
}

double rate(const NetworkScenario& s, const AssociationProfile& a, const PowerProfile& p, std::size_t mu,
            RateUnit unit) {
  const auto interference = interference_at(s, a, p, mu);
  return rate_given_interference(s, mu, a[mu], p[mu], interference, unit);
}

double sum_rate(const NetworkScenario& s, const AssociationProfile& a, const PowerProfile& p, RateUnit unit) {
  double total = 0.0;
  for (std::size_t i = 0; i < s.num_mus; ++i) total += rate(s, a, p, i, unit);
  return total;
}

double per_ap_potential(const NetworkScenario& s, const AssociationProfile& a, const PowerProfile& p,
                        std::size_t ap, RateUnit unit) {
  const auto n = s.noise_at(ap);
  std::vector<double> received(n.size(), 0.0);
  bool occupied = false;
  for (std::size_t i = 0; i < s.num_mus; ++i) {
    if (a[i] != ap) continue;
    occupied = true;
    const auto g = s.gain(i, ap);
    for (std::size_t k = 0; k < g.size(); ++k) received[k] += g[k] * p[i][k];
  }
  if (!occupied) return 0.0;
  double total = 0.0;
  for (std::size_t k = 0; k < n.size(); ++k) total += std::log1p(received[k] / n[k]);
  return total * log_scale(unit) / static_cast<double>(s.num_channels);
}

double system_potential(const NetworkScenario& s, const AssociationProfile& a, const PowerProfile& p,
                        RateUnit unit) {
  double total = 0.0;
  for (std::size_t w = 0; w < s.num_aps; ++w) total += per_ap_potential(s, a, p, w, unit);
  return total;
}

PowerProfile potential_gradient(const NetworkScenario& s, const AssociationProfile& a, const PowerProfile& p) {
  std::vector<std::vector<double>> denom(s.num_aps);
  for (std::size_t w = 0; w < s.num_aps; ++w) denom[w].assign(s.noise_at(w).begin(), s.noise_at(w).end());
  for (std::size_t i = 0; i < s.num_mus; ++i) {
    const auto g = s.gain(i, a[i]);
    for (std::size_t k = 0; k < g.size(); ++k) denom[a[i]][k] += g[k] * p[i][k];
  }
  const double scale = 1.0 / (static_cast<double>(s.num_channels) * std::numbers::ln2);
  PowerProfile grad;
  grad.mu.resize(s.num_mus);
  for (std::size_t i = 0; i < s.num_mus; ++i) {
    const auto g = s.gain(i, a[i]);
    grad[i].resize(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) grad[i][k] = scale * g[k] / denom[a[i]][k];
  }
  return grad;
}

std::vector<double> wf_at(const NetworkScenario& s, std::size_t mu, std::size_t ap,
                          std::span<const double> interference) {
  const auto n = s.noise_at(ap);
  std::vector<double> floor_term(n.size());
  for (std::size_t k = 0; k < n.size(); ++k) floor_term[k] = n[k] + interference[k];
  return water_fill(s.gain(mu, ap), floor_term, s.budget[mu]).powers;
}

std::vector<double> wf_operator(const NetworkScenario& s, const AssociationProfile& a, const PowerProfile& p,
                                std::size_t mu) {
  const auto interference = interference_at(s, a, p, mu);
  return wf_at(s, mu, a[mu], interference);
}

Residual residual(const NetworkScenario& s, const AssociationProfile& a, const PowerProfile& p) {
  Residual r;
  r.s.mu.resize(s.num_mus);
  double sq = 0.0;
  for (std::size_t i = 0; i < s.num_mus; ++i) {
    auto phi = wf_operator(s, a, p, i);
    for (std::size_t k = 0; k < phi.size(); ++k) {
      phi[k] -= p[i][k];
      r.inf_norm = std::max(r.inf_norm, std::abs(phi[k]));
      sq += phi[k] * phi[k];
    }
    r.s[i] = std::move(phi);
  }
  r.l2_norm = std::sqrt(sq);
  return r;
}

double dot(const PowerProfile& x, const PowerProfile& y) {
  double total = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t k = 0; k < x[i].size(); ++k) total += x[i][k] * y[i][k];
  return total;
}

BestResponse best_response_rate(const NetworkScenario& s, const AssociationProfile& a, const PowerProfile& p,
                                std::size_t mu, std::size_t candidate_ap, RateUnit unit) {
  if (candidate_ap >= s.num_aps) throw DomainError("candidate AP out of range");
  const auto interference = interference_toward(s, a, p, mu, candidate_ap);
  BestResponse br;
  br.powers = wf_at(s, mu, candidate_ap, interference);
  br.rate = rate_given_interference(s, mu, candidate_ap, br.powers, interference, unit);
  return br;
}

std::vector<std::size_t> best_ap_set(const NetworkScenario& s, const AssociationProfile& a, const PowerProfile& p,
                                     std::size_t mu, double connection_cost) {
  const double current = rate(s, a, p, mu);
  std::vector<std::size_t> out;
  for (std::size_t w = 0; w < s.num_aps; ++w) {
    const double threshold = current + (w == a[mu] ? 0.0 : connection_cost);
    if (best_response_rate(s, a, p, mu, w).rate >= threshold - kRateTieTolerance) out.push_back(w);
  }
  return out;
}

namespace {

double inf_distance(std::span<const double> x, std::span<const double> y) {
  double d = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) d = std::max(d, std::abs(x[k] - y[k]));
  return d;
}

EquilibriumReport verify(const NetworkScenario& s, const AssociationProfile& a, const PowerProfile& p, double eps,
                         RateUnit unit, bool check_switches) {
  check_profile(s, a, p);
  const double rate_eps = unit == RateUnit::Bits ? eps : eps * std::numbers::ln2;
  EquilibriumReport report;
  report.per_mu.resize(s.num_mus);
  for (std::size_t i = 0; i < s.num_mus; ++i) {
    MuVerdict& v = report.per_mu[i];
    v.current_rate = rate(s, a, p, i, unit);
    const BestResponse here = best_response_rate(s, a, p, i, a[i], unit);
    v.power_residual = inf_distance(here.powers, p[i]);
    v.best_rate = here.rate;
    v.best_ap = a[i];
    if (check_switches) {
      for (std::size_t w = 0; w < s.num_aps; ++w) {
        if (w == a[i]) continue;
        const double r = best_response_rate(s, a, p, i, w, unit).rate;
        if (r > v.best_rate) {
          v.best_rate = r;
          v.best_ap = w;
        }
      }
    }
    const double gain = v.best_rate - v.current_rate;
    const bool violates = v.power_residual > eps || gain > rate_eps;
    if (!violates) continue;
    report.is_equilibrium = false;
    if (!report.worst_violator || gain > report.worst_violator->rate_gain)
      report.worst_violator = Violation{i, v.best_ap, gain, v.power_residual};
  }
  return report;
}

}  // namespace

EquilibriumReport verify_power_ne(const NetworkScenario& s, const AssociationProfile& a, const PowerProfile& p,
                                  double eps) {
  return verify(s, a, p, eps, RateUnit::Bits, false);
}

EquilibriumReport verify_jep(const NetworkScenario& s, const AssociationProfile& a, const PowerProfile& p,
                             double eps, RateUnit unit) {
  return verify(s, a, p, eps, unit, true);
}

}  // namespace jaspa
