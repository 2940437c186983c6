#include <algorithm>
#include <numeric>
#include <random>

#include "doctest.h"
#include "jaspa/errors.hpp"
#include "jaspa/game.hpp"
#include "jaspa/waterfill.hpp"
#include "oracles.hpp"

using namespace jaspa;

namespace {

double log_sum(const std::vector<double>& g, const std::vector<double>& x, const std::vector<double>& p) {
  double total = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) total += std::log2(1.0 + g[k] * p[k] / x[k]);
  return total;
}

struct Instance {
  std::vector<double> g, x;
  double budget;
};

Instance random_instance(std::mt19937_64& rng, std::size_t max_k = 32) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Instance in;
  const std::size_t k = std::uniform_int_distribution<std::size_t>(1, max_k)(rng);
  for (std::size_t c = 0; c < k; ++c) {
    in.g.push_back(std::exp(6.0 * u(rng) - 3.0));
    in.x.push_back(std::exp(6.0 * u(rng) - 3.0));
  }
  in.budget = std::exp(4.0 * u(rng) - 2.0);
  return in;
}

}  // namespace

TEST_CASE("single channel takes the whole budget") {
  const auto r = water_fill(std::vector<double>{1.0}, std::vector<double>{5.0}, 2.0);
  CHECK(r.powers == std::vector<double>{2.0});
  CHECK(r.water_level == doctest::Approx(7.0));
  CHECK(r.active_set == std::vector<std::size_t>{0});
}

TEST_CASE("symmetric channels split evenly") {
  const auto r = water_fill(std::vector<double>{1.0, 1.0}, std::vector<double>{1.0, 1.0}, 2.0);
  CHECK(r.powers[0] == doctest::Approx(1.0));
  CHECK(r.powers[1] == doctest::Approx(1.0));
}

TEST_CASE("hand-solved active sets") {
  SUBCASE("both active, unequal floors") {
    const auto r = water_fill(std::vector<double>{1.0, 1.0}, std::vector<double>{1.0, 3.0}, 4.0);
    CHECK(r.water_level == doctest::Approx(4.0));
    CHECK(r.powers[0] == doctest::Approx(3.0));
    CHECK(r.powers[1] == doctest::Approx(1.0));
  }
  SUBCASE("gains differ") {
    const auto r = water_fill(std::vector<double>{1.0, 4.0}, std::vector<double>{1.0, 1.0}, 1.0);
    CHECK(r.water_level == doctest::Approx(1.125));
    CHECK(r.powers[0] == doctest::Approx(0.125));
    CHECK(r.powers[1] == doctest::Approx(0.875));
  }
  SUBCASE("second floor above the water") {
    const auto r = water_fill(std::vector<double>{1.0, 1.0}, std::vector<double>{1.0, 3.0}, 1.0);
    CHECK(r.water_level == doctest::Approx(2.0));
    CHECK(r.powers[0] == doctest::Approx(1.0));
    CHECK(r.powers[1] == 0.0);
    CHECK(r.active_set == std::vector<std::size_t>{0});
  }
}

TEST_CASE("bad input is a domain error") {
  const std::vector<double> one{1.0}, two{1.0, 1.0}, empty;
  CHECK_THROWS_AS(water_fill(empty, empty, 1.0), DomainError);
  CHECK_THROWS_AS(water_fill(one, two, 1.0), DomainError);
  CHECK_THROWS_AS(water_fill(one, one, 0.0), DomainError);
  CHECK_THROWS_AS(water_fill(std::vector<double>{0.0}, one, 1.0), DomainError);
  CHECK_THROWS_AS(water_fill(one, std::vector<double>{-1.0}, 1.0), DomainError);
}

TEST_CASE("matches the bisection oracle and KKT on random instances") {
  std::mt19937_64 rng(11);
  for (int n = 0; n < 1000; ++n) {
    const auto in = random_instance(rng);
    const auto r = water_fill(in.g, in.x, in.budget);
    const auto ref = oracle::bisection_water_fill(in.g, in.x, in.budget);
    CHECK(oracle::kkt_violation(in.g, in.x, in.budget, r.powers) <= 1e-10);
    for (std::size_t k = 0; k < ref.size(); ++k) CHECK(std::abs(r.powers[k] - ref[k]) <= 1e-9);
    // structure: max(level - floor, 0) and exactly tight
    for (std::size_t k = 0; k < ref.size(); ++k)
      CHECK(r.powers[k] == doctest::Approx(std::max(r.water_level - in.x[k] / in.g[k], 0.0)));
    CHECK(std::accumulate(r.powers.begin(), r.powers.end(), 0.0) == doctest::Approx(in.budget).epsilon(1e-12));
  }
}

TEST_CASE("water level increases with the budget") {
  std::mt19937_64 rng(12);
  for (int n = 0; n < 200; ++n) {
    const auto in = random_instance(rng, 12);
    const double lo = water_fill(in.g, in.x, in.budget).water_level;
    const double hi = water_fill(in.g, in.x, in.budget * 1.01).water_level;
    CHECK(hi > lo);
  }
}

TEST_CASE("permuting channels permutes the output") {
  std::mt19937_64 rng(13);
  for (int n = 0; n < 200; ++n) {
    const auto in = random_instance(rng, 16);
    std::vector<std::size_t> perm(in.g.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<double> g2, x2;
    for (std::size_t k : perm) {
      g2.push_back(in.g[k]);
      x2.push_back(in.x[k]);
    }
    const auto a = water_fill(in.g, in.x, in.budget);
    const auto b = water_fill(g2, x2, in.budget);
    for (std::size_t j = 0; j < perm.size(); ++j) CHECK(b.powers[j] == doctest::Approx(a.powers[perm[j]]));
  }
}

TEST_CASE("no feasible perturbation beats the water-filling rate") {
  std::mt19937_64 rng(14);
  std::exponential_distribution<double> law(1.0);
  const auto in = random_instance(rng, 8);
  const auto best = water_fill(in.g, in.x, in.budget);
  const double best_rate = log_sum(in.g, in.x, best.powers);
  for (int n = 0; n < 1000; ++n) {
    std::vector<double> p(in.g.size());
    double total = 0.0;
    for (double& v : p) total += (v = law(rng));
    for (double& v : p) v *= in.budget / total;
    CHECK(log_sum(in.g, in.x, p) <= best_rate + 1e-12);
  }
}

TEST_CASE("tiny and huge scales stay exact") {
  const auto r = water_fill(std::vector<double>{1e-12, 1e12}, std::vector<double>{1.0, 1.0}, 1e-3);
  CHECK(r.powers[0] == 0.0);
  CHECK(r.powers[1] == doctest::Approx(1e-3));
}

TEST_CASE("wf_operator uses co-associated interference only") {
  SUBCASE("lone MU equals plain water-filling against noise") {
    auto s = make_uniform_scenario(1, {{0, 1, 2}}, 3);
    s.gain_sq[0][0] = {1.0, 2.0, 0.5};
    s.noise[0] = {1.0, 0.5, 2.0};
    const AssociationProfile a{{0}};
    const auto p = uniform_powers(s, a);
    const auto expect = water_fill(s.gain_sq[0][0], s.noise[0], 1.0).powers;
    CHECK(wf_operator(s, a, p, 0) == expect);
  }
  SUBCASE("split over single-channel APs takes the whole budget") {
    const auto s = make_uniform_scenario(2, {{0}, {1}}, 2);
    const AssociationProfile a{{0, 1}};
    const auto p = uniform_powers(s, a);
    CHECK(wf_operator(s, a, p, 0) == std::vector<double>{1.0});
    CHECK(wf_operator(s, a, p, 1) == std::vector<double>{1.0});
  }
  SUBCASE("shared two-channel AP matches hand interference") {
    auto s = make_uniform_scenario(2, {{0, 1}}, 2);
    s.gain_sq[1][0] = {2.0, 0.5};
    const AssociationProfile a{{0, 0}};
    PowerProfile p{{{0.3, 0.7}, {0.6, 0.4}}};
    const std::vector<double> interference{2.0 * 0.6, 0.5 * 0.4};
    const std::vector<double> x{1.0 + interference[0], 1.0 + interference[1]};
    const auto expect = oracle::bisection_water_fill(s.gain_sq[0][0], x, 1.0);
    const auto got = wf_operator(s, a, p, 0);
    CHECK(got[0] == doctest::Approx(expect[0]));
    CHECK(got[1] == doctest::Approx(expect[1]));
  }
}
