#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace jaspa {

namespace detail {

using Rng = std::mt19937_64;

/// Independent stream for (run seed, purpose tag, MU index).
inline Rng make_stream(std::uint64_t seed, std::uint64_t tag, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(tag), static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

inline std::vector<Rng> make_mu_streams(std::uint64_t seed, std::uint64_t tag, std::size_t count) {
  std::vector<Rng> streams;
  streams.reserve(count);
  for (std::size_t i = 0; i < count; ++i) streams.push_back(make_stream(seed, tag, i));
  return streams;
}

template <typename Rng>
std::size_t uniform_index(std::size_t size, Rng& rng) {
  return std::uniform_int_distribution<std::size_t>(0, size - 1)(rng);
}

/// Uniform draw from {p >= 0, sum p <= budget} (K+1 normalized exponentials, last one is slack).
template <typename Rng>
std::vector<double> random_feasible_power(std::size_t channels, double budget, Rng& rng) {
  std::exponential_distribution<double> law(1.0);
  std::vector<double> draws(channels + 1);
  double total = 0.0;
  for (double& d : draws) {
    d = law(rng);
    total += d;
  }
  std::vector<double> p(channels);
  for (std::size_t k = 0; k < channels; ++k) p[k] = budget * draws[k] / total;
  return p;
}

inline constexpr double kBetaZero = 1e-12;

}  // namespace detail

template <typename Rng>
std::size_t sample_from_beta(const std::vector<double>& beta, Rng& rng) {
  double total = 0.0;
  for (double b : beta)
    if (b > detail::kBetaZero) total += b;
  const double u = std::uniform_real_distribution<double>(0.0, total)(rng);
  double acc = 0.0;
  std::size_t last = 0;
  for (std::size_t w = 0; w < beta.size(); ++w) {
    if (!(beta[w] > detail::kBetaZero)) continue;
    acc += beta[w];
    last = w;
    if (u < acc) return w;
  }
  return last;
}

}  // namespace jaspa
