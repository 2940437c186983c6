#include <filesystem>
#include <fstream>
#include <set>

#include "doctest.h"
#include "jaspa/errors.hpp"
#include "jaspa/scenario.hpp"
#include "json.hpp"

using namespace jaspa;

namespace {

ScenarioGenParams params(std::size_t n, std::size_t w, std::size_t k, std::uint64_t seed) {
  ScenarioGenParams p;
  p.num_mus = n;
  p.num_aps = w;
  p.num_channels = k;
  p.seed = seed;
  return p;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("jaspa_test_" + name);
}

}  // namespace

TEST_CASE("partition_channels: equal blocks") {
  const auto parts = partition_channels(64, 4);
  REQUIRE(parts.size() == 4);
  for (std::size_t w = 0; w < 4; ++w) {
    CHECK(parts[w].size() == 16);
    CHECK(parts[w].front() == 16 * w);
  }
}

TEST_CASE("partition_channels: single channel") {
  const auto parts = partition_channels(1, 1);
  CHECK(parts == std::vector<std::vector<std::size_t>>{{0}});
}

TEST_CASE("partition_channels: remainder goes to the lowest APs") {
  const auto parts = partition_channels(5, 2);
  CHECK(parts[0].size() == 3);
  CHECK(parts[1].size() == 2);
  const auto seven = partition_channels(7, 3);
  CHECK(seven[0].size() == 3);
  CHECK(seven[1].size() == 2);
  CHECK(seven[2].size() == 2);
}

TEST_CASE("partition_channels: is a partition") {
  for (std::size_t k = 1; k <= 20; ++k)
    for (std::size_t w = 1; w <= k; ++w) {
      std::set<std::size_t> seen;
      std::size_t total = 0, smallest = k, largest = 0;
      for (const auto& part : partition_channels(k, w)) {
        seen.insert(part.begin(), part.end());
        total += part.size();
        smallest = std::min(smallest, part.size());
        largest = std::max(largest, part.size());
      }
      CHECK(total == k);
      CHECK(seen.size() == k);
      CHECK(*seen.rbegin() == k - 1);
      CHECK(largest - smallest <= 1);
    }
}

TEST_CASE("partition_channels: K < W is rejected") {
  CHECK_THROWS_AS(partition_channels(2, 3), ValidationError);
  CHECK_THROWS_AS(partition_channels(0, 0), ValidationError);
}

TEST_CASE("generate_scenario: same seed gives identical scenarios") {
  const auto a = generate_scenario(params(5, 2, 8, 42));
  const auto b = generate_scenario(params(5, 2, 8, 42));
  CHECK(a == b);
  CHECK(scenario_to_string(a) == scenario_to_string(b));
  const auto c = generate_scenario(params(5, 2, 8, 43));
  CHECK_FALSE(a == c);
}

TEST_CASE("generate_scenario: evaluation-size shapes") {
  const auto s = generate_scenario(params(20, 4, 64, 1));
  CHECK(s.num_mus == 20);
  CHECK(s.gain_sq.size() == 20);
  std::size_t entries = 0;
  for (const auto& per_ap : s.gain_sq[0]) {
    CHECK(per_ap.size() == 16);
    entries += per_ap.size();
  }
  CHECK(entries == 64);
  CHECK(s.noise[3].size() == 16);
  CHECK(s.budget == std::vector<double>(20, 1.0));
  CHECK(s.seed == std::optional<std::uint64_t>(1));
}

TEST_CASE("generate_scenario: every generated scenario is valid") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto s = generate_scenario(params(1 + seed % 7, 1 + seed % 4, 4 + seed % 9, seed));
    CHECK_NOTHROW(s.validate());
    for (const auto& pos : s.mu_positions) {
      CHECK(pos[0] >= 0.0);
      CHECK(pos[0] <= 10.0);
      CHECK(pos[1] >= 0.0);
      CHECK(pos[1] <= 10.0);
    }
  }
}

TEST_CASE("mean_gain_at_distance: inverse square with clamp") {
  CHECK(mean_gain_at_distance(10.0) == doctest::Approx(0.01));
  CHECK(mean_gain_at_distance(2.0) == doctest::Approx(0.25));
  CHECK(mean_gain_at_distance(0.0) == doctest::Approx(1e4));
  CHECK(mean_gain_at_distance(0.001) == mean_gain_at_distance(0.01));
}

TEST_CASE("generate_scenario: empirical gain mean matches 1/d^2") {
  // gains normalized by each MU's expected mean
  double ratio_sum = 0.0;
  std::size_t draws = 0;
  for (std::uint64_t seed = 0; seed < 200 && draws < 100000; ++seed) {
    const auto s = generate_scenario(params(50, 1, 10, 9000 + seed));
    for (std::size_t i = 0; i < s.num_mus; ++i) {
      const double d = std::hypot(s.mu_positions[i][0] - s.ap_positions[0][0],
                                  s.mu_positions[i][1] - s.ap_positions[0][1]);
      const double mean = mean_gain_at_distance(d);
      for (double g : s.gain_sq[i][0]) {
        ratio_sum += g / mean;
        ++draws;
      }
    }
  }
  CHECK(draws == 100000);
  CHECK(ratio_sum / static_cast<double>(draws) == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("generator parameters are validated") {
  CHECK_THROWS_AS(generate_scenario(params(3, 4, 2, 0)), ValidationError);
  auto p = params(3, 1, 2, 0);
  p.area_side = 0.0;
  CHECK_THROWS_AS(generate_scenario(p), ValidationError);
  p = params(0, 1, 2, 0);
  CHECK_THROWS_AS(generate_scenario(p), ValidationError);
}

TEST_CASE("save/load round trip is exact") {
  const auto s = generate_scenario(params(4, 2, 6, 77));
  const auto path = temp_file("roundtrip.json");
  save_scenario(s, path.string());
  const auto back = load_scenario(path.string());
  CHECK(back == s);
  std::filesystem::remove(path);
}

TEST_CASE("scenario file carries the fixed field names") {
  const auto doc = nlohmann::json::parse(scenario_to_string(generate_scenario(params(2, 1, 2, 3))));
  for (const char* key : {"num_mus", "num_aps", "num_channels", "ap_channels", "gain_sq", "noise", "budget",
                          "positions", "connection_cost", "seed"})
    CHECK(doc.contains(key));
}

TEST_CASE("loader rejects invariant violations naming the field") {
  const auto base = nlohmann::json::parse(scenario_to_string(generate_scenario(params(2, 2, 4, 5))));

  auto overlap = base;
  overlap["ap_channels"][1][0] = overlap["ap_channels"][0][0];
  try {
    scenario_from_string(overlap.dump());
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.field().rfind("ap_channels", 0) == 0);
  }

  auto zero_noise = base;
  zero_noise["noise"][0][1] = 0.0;
  try {
    scenario_from_string(zero_noise.dump());
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.field().rfind("noise", 0) == 0);
  }

  auto zero_gain = base;
  zero_gain["gain_sq"][1][0][0] = 0.0;
  CHECK_THROWS_AS(scenario_from_string(zero_gain.dump()), ValidationError);

  auto bad_budget = base;
  bad_budget["budget"][0] = -1.0;
  CHECK_THROWS_AS(scenario_from_string(bad_budget.dump()), ValidationError);

  auto bad_cost = base;
  bad_cost["connection_cost"][0] = -0.5;
  CHECK_THROWS_AS(scenario_from_string(bad_cost.dump()), ValidationError);
}

TEST_CASE("malformed files raise parse errors") {
  CHECK_THROWS_AS(scenario_from_string("{\"num_mus\": 2,"), ParseError);
  CHECK_THROWS_AS(scenario_from_string("[1, 2, 3]"), Error);
  CHECK_THROWS_AS(scenario_from_string("{\"num_mus\": \"two\"}"), Error);
  try {
    scenario_from_string("{\n  \"num_mus\": 2,\n  oops\n}");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("byte") != std::string::npos);
  }
}

TEST_CASE("missing file raises an I/O error") {
  CHECK_THROWS_AS(load_scenario("/nonexistent/dir/scenario.json"), IoError);
}

TEST_CASE("digest and cost override") {
  const auto s = generate_scenario(params(3, 1, 3, 8));
  CHECK(scenario_digest(s) == scenario_digest(generate_scenario(params(3, 1, 3, 8))));
  const auto priced = with_connection_cost(s, 2.5);
  CHECK(priced.connection_cost == std::vector<double>(3, 2.5));
  CHECK(scenario_digest(priced) != scenario_digest(s));
}

TEST_CASE("make_uniform_scenario builds the explicit network") {
  const auto s = make_uniform_scenario(2, {{0}, {1}}, 2, 1.0, 1.0, 1.0);
  CHECK(s.num_aps == 2);
  CHECK(s.channels_at(0) == 1);
  CHECK(s.gain(1, 1)[0] == 1.0);
  CHECK(s.noise_at(0)[0] == 1.0);
}
