#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace jaspa {

using Point = std::array<double, 2>;

/// Immutable description of a multi-AP, multi-channel uplink network.
///
/// Channel data is stored per AP in the order of `ap_channels[w]`: the
/// j-th entry of `gain_sq[i][w]` and `noise[w]` belongs to global channel
/// `ap_channels[w][j]`. Every per-AP quantity elsewhere in the library
/// (powers, interference) uses the same local ordering.
struct NetworkScenario {
  std::size_t num_mus = 0;
  std::size_t num_aps = 0;
  std::size_t num_channels = 0;  // global K, the 1/K rate prefactor
  std::vector<std::vector<std::size_t>> ap_channels;
  std::vector<std::vector<std::vector<double>>> gain_sq;  // [mu][ap][local channel]
  std::vector<std::vector<double>> noise;                 // [ap][local channel]
  std::vector<double> budget;                             // [mu]
  std::vector<Point> mu_positions;
  std::vector<Point> ap_positions;
  std::vector<double> connection_cost;  // [mu], rate units
  std::optional<std::uint64_t> seed;

  std::span<const double> gain(std::size_t mu, std::size_t ap) const { return gain_sq[mu][ap]; }
  std::span<const double> noise_at(std::size_t ap) const { return noise[ap]; }
  std::size_t channels_at(std::size_t ap) const { return ap_channels[ap].size(); }

  /// Throws ValidationError naming the first field that breaks an invariant.
  void validate() const;

  bool operator==(const NetworkScenario&) const = default;
};

struct ScenarioGenParams {
  double area_side = 10.0;
  std::size_t num_mus = 0;
  std::size_t num_aps = 1;
  std::size_t num_channels = 1;
  std::uint64_t seed = 0;
  double noise = 1.0;
  double budget = 1.0;
  double connection_cost = 0.0;

  void validate() const;
};

/// Splits channels {0..K-1} into W contiguous blocks whose sizes differ by at
/// most one; the first K mod W APs receive the extra channel.
std::vector<std::vector<std::size_t>> partition_channels(std::size_t num_channels, std::size_t num_aps);

/// Mean of the exponential power-gain law at distance d (d clamped to 0.01 m).
double mean_gain_at_distance(double distance);

NetworkScenario generate_scenario(const ScenarioGenParams& params);

/// Builds a scenario with all gains, noises and budgets given explicitly;
/// positions are left at the origin. Validated.
NetworkScenario make_uniform_scenario(std::size_t num_mus,
                                      std::vector<std::vector<std::size_t>> ap_channels,
                                      std::size_t num_channels, double gain = 1.0, double noise = 1.0,
                                      double budget = 1.0);

/// Structured-text (JSON) scenario serialization. Doubles round-trip exactly.
std::string scenario_to_string(const NetworkScenario& scenario);
NetworkScenario scenario_from_string(const std::string& text);
void save_scenario(const NetworkScenario& scenario, const std::string& path);
NetworkScenario load_scenario(const std::string& path);

/// Hex FNV-1a digest of the serialized scenario.
std::string scenario_digest(const NetworkScenario& scenario);

/// Same network with `connection_cost` replaced by `cost` for every MU.
NetworkScenario with_connection_cost(NetworkScenario scenario, double cost);

}  // namespace jaspa
