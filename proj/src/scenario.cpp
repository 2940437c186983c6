#include "jaspa/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "jaspa/errors.hpp"
#include "json.hpp"

namespace jaspa {

using nlohmann::json;

int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Usage:
      return 2;
    case ErrorKind::Validation:
    case ErrorKind::Parse:
      return 3;
    case ErrorKind::Resource:
      return 4;
    case ErrorKind::Io:
      return 5;
    case ErrorKind::Domain:
      break;
  }
  return 1;
}

namespace {

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

std::string at(const char* field, std::size_t a) { return std::string(field) + "[" + std::to_string(a) + "]"; }

std::string at(const char* field, std::size_t a, std::size_t b) {
  return at(field, a) + "[" + std::to_string(b) + "]";
}

}  // namespace

void NetworkScenario::validate() const {
  if (num_mus == 0) throw ValidationError("num_mus", "must be at least 1");
  if (num_aps == 0) throw ValidationError("num_aps", "must be at least 1");
  if (num_channels < num_aps) throw ValidationError("num_channels", "must be >= num_aps");
  if (ap_channels.size() != num_aps) throw ValidationError("ap_channels", "expected one list per AP");

  std::vector<bool> used(num_channels, false);
  for (std::size_t w = 0; w < num_aps; ++w) {
    if (ap_channels[w].empty()) throw ValidationError(at("ap_channels", w), "channel list is empty");
    for (std::size_t k : ap_channels[w]) {
      if (k >= num_channels) throw ValidationError(at("ap_channels", w), "channel index out of range");
      if (used[k]) throw ValidationError(at("ap_channels", w), "channel " + std::to_string(k) + " overlaps");
      used[k] = true;
    }
  }

  if (noise.size() != num_aps) throw ValidationError("noise", "expected one list per AP");
  for (std::size_t w = 0; w < num_aps; ++w) {
    if (noise[w].size() != ap_channels[w].size()) throw ValidationError(at("noise", w), "length mismatch");
    for (std::size_t j = 0; j < noise[w].size(); ++j)
      if (!finite_positive(noise[w][j])) throw ValidationError(at("noise", w, j), "must be finite and > 0");
  }

  if (gain_sq.size() != num_mus) throw ValidationError("gain_sq", "expected one entry per MU");
  for (std::size_t i = 0; i < num_mus; ++i) {
    if (gain_sq[i].size() != num_aps) throw ValidationError(at("gain_sq", i), "expected one list per AP");
    for (std::size_t w = 0; w < num_aps; ++w) {
      if (gain_sq[i][w].size() != ap_channels[w].size())
        throw ValidationError(at("gain_sq", i, w), "length mismatch");
      for (double g : gain_sq[i][w])
        if (!finite_positive(g)) throw ValidationError(at("gain_sq", i, w), "gains must be finite and > 0");
    }
  }

  if (budget.size() != num_mus) throw ValidationError("budget", "expected one entry per MU");
  for (std::size_t i = 0; i < num_mus; ++i)
    if (!finite_positive(budget[i])) throw ValidationError(at("budget", i), "must be finite and > 0");

  if (connection_cost.size() != num_mus) throw ValidationError("connection_cost", "expected one entry per MU");
  for (std::size_t i = 0; i < num_mus; ++i)
    if (!(std::isfinite(connection_cost[i]) && connection_cost[i] >= 0.0))
      throw ValidationError(at("connection_cost", i), "must be finite and >= 0");

  if (mu_positions.size() != num_mus) throw ValidationError("positions", "expected one MU position per MU");
  if (ap_positions.size() != num_aps) throw ValidationError("positions", "expected one AP position per AP");
}

void ScenarioGenParams::validate() const {
  if (!(area_side > 0.0) || !std::isfinite(area_side)) throw ValidationError("area_side", "must be > 0");
  if (num_mus == 0) throw ValidationError("num_mus", "must be at least 1");
  if (num_aps == 0) throw ValidationError("num_aps", "must be at least 1");
  if (num_channels < num_aps) throw ValidationError("num_channels", "K must be >= W");
  if (!finite_positive(noise)) throw ValidationError("noise", "must be > 0");
  if (!finite_positive(budget)) throw ValidationError("budget", "must be > 0");
  if (!(connection_cost >= 0.0)) throw ValidationError("connection_cost", "must be >= 0");
}

std::vector<std::vector<std::size_t>> partition_channels(std::size_t num_channels, std::size_t num_aps) {
  if (num_aps == 0) throw ValidationError("num_aps", "must be at least 1");
  if (num_channels < num_aps) throw ValidationError("num_channels", "K must be >= W");
  std::vector<std::vector<std::size_t>> blocks(num_aps);
  const std::size_t base = num_channels / num_aps;
  const std::size_t extra = num_channels % num_aps;
  std::size_t next = 0;
  for (std::size_t w = 0; w < num_aps; ++w) {
    const std::size_t size = base + (w < extra ? 1 : 0);
    for (std::size_t j = 0; j < size; ++j) blocks[w].push_back(next++);
  }
  return blocks;
}

double mean_gain_at_distance(double distance) {
  const double d = std::max(distance, 0.01);
  return 1.0 / (d * d);
}

NetworkScenario generate_scenario(const ScenarioGenParams& params) {
  params.validate();
  std::mt19937_64 rng(params.seed);
  std::uniform_real_distribution<double> coord(0.0, params.area_side);

  NetworkScenario s;
  s.num_mus = params.num_mus;
  s.num_aps = params.num_aps;
  s.num_channels = params.num_channels;
  s.ap_channels = partition_channels(params.num_channels, params.num_aps);
  s.seed = params.seed;

  for (std::size_t w = 0; w < s.num_aps; ++w) s.ap_positions.push_back({coord(rng), coord(rng)});
  for (std::size_t i = 0; i < s.num_mus; ++i) s.mu_positions.push_back({coord(rng), coord(rng)});

  s.gain_sq.assign(s.num_mus, std::vector<std::vector<double>>(s.num_aps));
  for (std::size_t i = 0; i < s.num_mus; ++i) {
    for (std::size_t w = 0; w < s.num_aps; ++w) {
      const double dx = s.mu_positions[i][0] - s.ap_positions[w][0];
      const double dy = s.mu_positions[i][1] - s.ap_positions[w][1];
      const double mean = mean_gain_at_distance(std::hypot(dx, dy));
      std::exponential_distribution<double> law(1.0 / mean);
      auto& block = s.gain_sq[i][w];
      block.resize(s.ap_channels[w].size());
      for (double& g : block) {
        // exponential_distribution may return exactly 0; redraw to keep gains positive
        do {
          g = law(rng);
        } while (!(g > 0.0));
      }
    }
  }

  for (std::size_t w = 0; w < s.num_aps; ++w) s.noise.emplace_back(s.ap_channels[w].size(), params.noise);
  s.budget.assign(s.num_mus, params.budget);
  s.connection_cost.assign(s.num_mus, params.connection_cost);
  s.validate();
  return s;
}

NetworkScenario make_uniform_scenario(std::size_t num_mus, std::vector<std::vector<std::size_t>> ap_channels,
                                      std::size_t num_channels, double gain, double noise, double budget) {
  NetworkScenario s;
  s.num_mus = num_mus;
  s.num_aps = ap_channels.size();
  s.num_channels = num_channels;
  s.ap_channels = std::move(ap_channels);
  s.gain_sq.assign(num_mus, {});
  for (std::size_t i = 0; i < num_mus; ++i)
    for (const auto& block : s.ap_channels) s.gain_sq[i].emplace_back(block.size(), gain);
  for (const auto& block : s.ap_channels) s.noise.emplace_back(block.size(), noise);
  s.budget.assign(num_mus, budget);
  s.connection_cost.assign(num_mus, 0.0);
  s.mu_positions.assign(num_mus, Point{0.0, 0.0});
  s.ap_positions.assign(s.num_aps, Point{0.0, 0.0});
  s.validate();
  return s;
}

namespace {

json to_json(const NetworkScenario& s) {
  json j;
  j["num_mus"] = s.num_mus;
  j["num_aps"] = s.num_aps;
  j["num_channels"] = s.num_channels;
  j["ap_channels"] = s.ap_channels;
  j["gain_sq"] = s.gain_sq;
  j["noise"] = s.noise;
  j["budget"] = s.budget;
  j["positions"] = {{"mus", s.mu_positions}, {"aps", s.ap_positions}};
  j["connection_cost"] = s.connection_cost;
  j["seed"] = s.seed ? json(*s.seed) : json(nullptr);
  return j;
}

template <typename T>
T field(const json& j, const char* name) {
  if (!j.contains(name)) throw ValidationError(name, "missing field");
  try {
    return j.at(name).get<T>();
  } catch (const json::exception& e) {
    throw ValidationError(name, std::string("wrong type: ") + e.what());
  }
}

}  // namespace

std::string scenario_to_string(const NetworkScenario& scenario) { return to_json(scenario).dump(1) + "\n"; }

NetworkScenario scenario_from_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("scenario parse error at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  if (!j.is_object()) throw ParseError("scenario document must be an object");

  NetworkScenario s;
  s.num_mus = field<std::size_t>(j, "num_mus");
  s.num_aps = field<std::size_t>(j, "num_aps");
  s.num_channels = field<std::size_t>(j, "num_channels");
  s.ap_channels = field<std::vector<std::vector<std::size_t>>>(j, "ap_channels");
  s.gain_sq = field<std::vector<std::vector<std::vector<double>>>>(j, "gain_sq");
  s.noise = field<std::vector<std::vector<double>>>(j, "noise");
  s.budget = field<std::vector<double>>(j, "budget");
  s.connection_cost = field<std::vector<double>>(j, "connection_cost");
  const json positions = field<json>(j, "positions");
  s.mu_positions = field<std::vector<Point>>(positions, "mus");
  s.ap_positions = field<std::vector<Point>>(positions, "aps");
  if (j.contains("seed") && !j["seed"].is_null()) s.seed = field<std::uint64_t>(j, "seed");
  s.validate();
  return s;
}

void save_scenario(const NetworkScenario& scenario, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << scenario_to_string(scenario);
  if (!out) throw IoError("failed writing '" + path + "'");
}

NetworkScenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::stringstream buf;
  buf << in.rdbuf();
  return scenario_from_string(buf.str());
}

std::string scenario_digest(const NetworkScenario& scenario) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : scenario_to_string(scenario)) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
  return hex;
}

NetworkScenario with_connection_cost(NetworkScenario scenario, double cost) {
  scenario.connection_cost.assign(scenario.num_mus, cost);
  scenario.validate();
  return scenario;
}

}  // namespace jaspa
