#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "jaspa/baselines.hpp"
#include "jaspa/joint.hpp"
#include "jaspa/scenario.hpp"

namespace jaspa {

enum class Algorithm { AIwf, SIwf, Jaspa, SeJaspa, SiJaspa, JJaspa, ClosestAp, Exhaustive, VirtualBound };

Algorithm parse_algorithm(const std::string& name);
std::string algorithm_name(Algorithm algo);
bool is_joint(Algorithm algo);

/// One row of a run trace. `inner_iter` is -1 on outer-loop rows and
/// `outer_iter` is 0 on single-association inner-loop rows.
struct TraceRow {
  long long outer_iter = 0;
  long long inner_iter = -1;
  double system_potential = 0.0;
  double sum_rate = 0.0;
  double residual_inf_norm = 0.0;
  std::string association;
  std::size_t switch_count = 0;

  bool operator==(const TraceRow&) const = default;
};

struct RunTrace {
  std::vector<TraceRow> rows;
  bool operator==(const RunTrace&) const = default;
};

/// CSV with a header row naming the fields; doubles printed with 17 significant digits.
std::string trace_to_csv(const RunTrace& trace);
RunTrace trace_from_csv(const std::string& text);
void write_trace(const RunTrace& trace, const std::string& path);
RunTrace read_trace(const std::string& path);

/// How single-association algorithms pick the association.
enum class AssociationSource { Closest, Given };

struct RunSpec {
  Algorithm algo = Algorithm::Jaspa;
  JaspaConfig jaspa;  // inner settings are shared by every algorithm
  AssociationSource association_source = AssociationSource::Closest;
  std::optional<AssociationProfile> association;  // for AssociationSource::Given
  bool dump_ap_memory = false;                    // j_jaspa only
};

struct RunOutcome {
  Algorithm algo = Algorithm::Jaspa;
  std::uint64_t seed = 0;
  RunTrace trace;
  bool converged = false;
  std::size_t iterations = 0;
  double final_sum_rate = 0.0;
  double final_potential = 0.0;
  bool jep = false;
  AssociationProfile association;
  PowerProfile powers;
  double wall_seconds = 0.0;
  std::vector<std::string> warnings;
  std::string ap_memory_dump;
};

RunOutcome run_experiment(const NetworkScenario& s, const RunSpec& spec);

/// JSON summary document of a run.
std::string summary_json(const RunOutcome& outcome);

struct CompareSpec {
  std::vector<Algorithm> algos;
  std::vector<double> costs{0.0};  // connection-cost sweep, applied to joint algorithms
  std::size_t repetitions = 1;
  std::uint64_t seed_base = 0;
  /// Either a fixed scenario shared by every repetition or generator parameters
  /// (seeded with seed_base + rep).
  std::optional<NetworkScenario> scenario;
  ScenarioGenParams generator;
  RunSpec base;
  /// Compute T* by exhaustive search whenever W^N is within the cap.
  bool ratio_to_optimum = true;
  std::size_t enumeration_cap = kEnumerationCap;
  std::size_t threads = 1;
};

struct CompareCell {
  Algorithm algo = Algorithm::Jaspa;
  double cost = 0.0;
  std::vector<double> sum_rate;         // per repetition
  std::vector<double> iterations;       // per repetition
  std::vector<double> ratio;            // per repetition, NaN when T* unavailable
  std::vector<int> converged;  // 0/1 flags
  std::vector<int> jep;
};

struct CompareTable {
  std::vector<CompareCell> cells;
  std::vector<double> optimum;  // T* per repetition, NaN when unavailable
};

CompareTable run_compare(const CompareSpec& spec);

/// Aggregate rows: algo,cost,reps,converged_frac,jep_frac,mean_sum_rate,median_sum_rate,
/// mean_outer_iters,median_outer_iters,mean_ratio,median_ratio,opt_kind.
std::string compare_to_csv(const CompareTable& table);

double median(std::vector<double> values);
double mean(const std::vector<double>& values);

}  // namespace jaspa
