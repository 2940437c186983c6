#include "jaspa/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <thread>

#include "jaspa/errors.hpp"
#include "jaspa/jjaspa.hpp"
#include "json.hpp"

namespace jaspa {

namespace {

struct AlgoName {
  Algorithm algo;
  const char* name;
};

constexpr AlgoName kNames[] = {
    {Algorithm::AIwf, "a_iwf"},         {Algorithm::SIwf, "s_iwf"},
    {Algorithm::Jaspa, "jaspa"},        {Algorithm::SeJaspa, "se_jaspa"},
    {Algorithm::SiJaspa, "si_jaspa"},   {Algorithm::JJaspa, "j_jaspa"},
    {Algorithm::ClosestAp, "closest_ap"}, {Algorithm::Exhaustive, "exhaustive"},
    {Algorithm::VirtualBound, "virtual_bound"},
};

constexpr const char* kTraceHeader =
    "outer_iter,inner_iter,system_potential,sum_rate,residual_inf_norm,association,switch_count";

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& field, std::size_t line) {
  char* end = nullptr;
  const double v = std::strtod(field.c_str(), &end);
  if (field.empty() || end != field.c_str() + field.size())
    throw ParseError("trace line " + std::to_string(line) + ": bad number '" + field + "'");
  return v;
}

long long parse_int(const std::string& field, std::size_t line) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(field, &used);
    if (used != field.size()) throw std::invalid_argument(field);
    return v;
  } catch (const std::exception&) {
    throw ParseError("trace line " + std::to_string(line) + ": bad integer '" + field + "'");
  }
}

void append_inner_rows(RunTrace& trace, const InnerLoopResult& inner, const AssociationProfile& a) {
  const std::string assoc = a.to_string();
  for (std::size_t t = 0; t < inner.trace.size(); ++t) {
    const auto& r = inner.trace[t];
    trace.rows.push_back({0, static_cast<long long>(t), r.potential, r.sum_rate, r.residual_inf, assoc, 0});
  }
}

}  // namespace

Algorithm parse_algorithm(const std::string& name) {
  for (const auto& entry : kNames)
    if (name == entry.name) return entry.algo;
  throw UsageError("unknown algorithm '" + name + "'");
}

std::string algorithm_name(Algorithm algo) {
  for (const auto& entry : kNames)
    if (entry.algo == algo) return entry.name;
  return "unknown";
}

bool is_joint(Algorithm algo) {
  return algo == Algorithm::Jaspa || algo == Algorithm::SeJaspa || algo == Algorithm::SiJaspa ||
         algo == Algorithm::JJaspa;
}

std::string trace_to_csv(const RunTrace& trace) {
  std::string out = std::string(kTraceHeader) + "\n";
  for (const auto& r : trace.rows) {
    out += std::to_string(r.outer_iter) + ',' + std::to_string(r.inner_iter) + ',' + format_double(r.system_potential) +
           ',' + format_double(r.sum_rate) + ',' + format_double(r.residual_inf_norm) + ',' + r.association + ',' +
           std::to_string(r.switch_count) + '\n';
  }
  return out;
}

RunTrace trace_from_csv(const std::string& text) {
  std::stringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kTraceHeader) throw ParseError("trace line 1: unexpected header");
  RunTrace trace;
  std::size_t number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) fields.push_back(cell);
    if (fields.size() != 7) throw ParseError("trace line " + std::to_string(number) + ": expected 7 fields");
    TraceRow r;
    r.outer_iter = parse_int(fields[0], number);
    r.inner_iter = parse_int(fields[1], number);
    r.system_potential = parse_double(fields[2], number);
    r.sum_rate = parse_double(fields[3], number);
    r.residual_inf_norm = parse_double(fields[4], number);
    r.association = fields[5];
    r.switch_count = static_cast<std::size_t>(parse_int(fields[6], number));
    if (!trace.rows.empty() && r.outer_iter < trace.rows.back().outer_iter)
      throw ParseError("trace line " + std::to_string(number) + ": outer_iter decreases");
    trace.rows.push_back(std::move(r));
  }
  return trace;
}

void write_trace(const RunTrace& trace, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << trace_to_csv(trace);
  if (!out) throw IoError("failed writing '" + path + "'");
}

RunTrace read_trace(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::stringstream buf;
  buf << in.rdbuf();
  return trace_from_csv(buf.str());
}

RunOutcome run_experiment(const NetworkScenario& s, const RunSpec& spec) {
  const auto start = std::chrono::steady_clock::now();
  RunOutcome out;
  out.algo = spec.algo;
  out.seed = spec.jaspa.seed;
  const InnerConfig& inner = spec.jaspa.inner;

  auto single_association = [&]() {
    if (spec.algo == Algorithm::ClosestAp || spec.association_source == AssociationSource::Closest)
      return closest_ap(s);
    if (!spec.association) throw UsageError("algorithm needs an association");
    check_association(s, *spec.association);
    return *spec.association;
  };

  if (is_joint(spec.algo)) {
    RunResult r;
    switch (spec.algo) {
      case Algorithm::Jaspa:
        r = jaspa(s, spec.jaspa);
        break;
      case Algorithm::SeJaspa:
        r = se_jaspa(s, spec.jaspa);
        break;
      case Algorithm::SiJaspa:
        r = si_jaspa(s, spec.jaspa);
        break;
      default: {
        JJaspaRun run = j_jaspa_run(s, spec.jaspa);
        if (spec.dump_ap_memory) out.ap_memory_dump = run.ap_memory.dump();
        r = std::move(run.result);
        break;
      }
    }
    for (const auto& row : r.trace)
      out.trace.rows.push_back({static_cast<long long>(row.outer_iter), -1, row.potential, row.sum_rate,
                                row.residual_inf, row.association.to_string(), row.switch_count});
    out.converged = r.converged;
    out.iterations = r.outer_iterations;
    out.association = r.association;
    out.powers = r.powers;
    out.jep = r.jep_report.is_equilibrium;
    out.warnings = r.warnings;
    out.final_sum_rate = sum_rate(s, r.association, r.powers);
    out.final_potential = system_potential(s, r.association, r.powers);
  } else if (spec.algo == Algorithm::Exhaustive) {
    const ExhaustiveResult ex = exhaustive_search(s, inner);
    bool all = true;
    for (std::size_t n = 0; n < ex.table.size(); ++n) {
      const auto& row = ex.table[n];
      all = all && row.converged;
      out.trace.rows.push_back({static_cast<long long>(n), -1, row.potential, row.sum_rate, row.residual_inf,
                                row.association.to_string(), 0});
    }
    out.converged = all;
    out.iterations = ex.table.size();
    out.association = ex.best;
    out.powers = solve_inner(s, ex.best, inner).powers;
    out.final_sum_rate = ex.best_sum_rate;
    out.final_potential = system_potential(s, ex.best, out.powers);
    out.jep = verify_jep(s, ex.best, out.powers).is_equilibrium;
  } else if (spec.algo == Algorithm::VirtualBound) {
    const NetworkScenario pooled = pooled_scenario(s);
    AssociationProfile a;
    a.ap.assign(s.num_mus, 0);
    const InnerLoopResult eq = solve_inner(pooled, a, inner);
    append_inner_rows(out.trace, eq, a);
    out.converged = eq.converged;
    out.iterations = eq.iterations;
    out.association = a;
    out.powers = eq.powers;
    out.final_sum_rate = sum_rate(pooled, a, eq.powers);
    out.final_potential = system_potential(pooled, a, eq.powers);
    out.jep = verify_jep(pooled, a, eq.powers).is_equilibrium;
  } else {
    InnerConfig cfg = inner;
    if (spec.algo == Algorithm::AIwf) cfg.solver = InnerSolver::AIwf;
    if (spec.algo == Algorithm::SIwf) cfg.solver = InnerSolver::SIwf;
    const AssociationProfile a = single_association();
    const InnerLoopResult eq = solve_inner(s, a, cfg);
    append_inner_rows(out.trace, eq, a);
    out.converged = eq.converged;
    out.iterations = eq.iterations;
    out.association = a;
    out.powers = eq.powers;
    out.final_sum_rate = sum_rate(s, a, eq.powers);
    out.final_potential = system_potential(s, a, eq.powers);
    out.jep = verify_jep(s, a, eq.powers).is_equilibrium;
  }
  out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

std::string summary_json(const RunOutcome& o) {
  nlohmann::json j;
  j["algo"] = algorithm_name(o.algo);
  j["seed"] = o.seed;
  j["converged"] = o.converged;
  j["iterations"] = o.iterations;
  j["final_sum_rate"] = o.final_sum_rate;
  j["final_potential"] = o.final_potential;
  j["jep_verdict"] = o.jep;
  j["association"] = o.association.to_string();
  j["wall_time_s"] = o.wall_seconds;
  j["warnings"] = o.warnings;
  return j.dump(1) + "\n";
}

double median(std::vector<double> values) {
  std::erase_if(values, [](double v) { return std::isnan(v); });
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double mean(const std::vector<double>& values) {
  double total = 0.0;
  std::size_t count = 0;
  for (double v : values) {
    if (std::isnan(v)) continue;
    total += v;
    ++count;
  }
  return count ? total / static_cast<double>(count) : std::numeric_limits<double>::quiet_NaN();
}

CompareTable run_compare(const CompareSpec& spec) {
  if (spec.algos.empty()) throw UsageError("compare needs at least one algorithm");
  if (spec.repetitions == 0) throw UsageError("compare needs at least one repetition");
  const double nan = std::numeric_limits<double>::quiet_NaN();

  struct Job {
    Algorithm algo;
    double cost;
  };
  std::vector<Job> jobs;
  for (Algorithm algo : spec.algos) {
    if (is_joint(algo)) {
      for (double c : spec.costs) jobs.push_back({algo, c});
    } else {
      jobs.push_back({algo, 0.0});
    }
  }

  CompareTable table;
  table.optimum.assign(spec.repetitions, nan);
  for (const Job& job : jobs) {
    CompareCell cell;
    cell.algo = job.algo;
    cell.cost = job.cost;
    cell.sum_rate.assign(spec.repetitions, nan);
    cell.iterations.assign(spec.repetitions, nan);
    cell.ratio.assign(spec.repetitions, nan);
    cell.converged.assign(spec.repetitions, 0);
    cell.jep.assign(spec.repetitions, 0);
    table.cells.push_back(std::move(cell));
  }

  auto run_rep = [&](std::size_t rep) {
    const std::uint64_t seed = spec.seed_base + rep;
    NetworkScenario scenario;
    if (spec.scenario) {
      scenario = *spec.scenario;
    } else {
      ScenarioGenParams params = spec.generator;
      params.seed = seed;
      scenario = generate_scenario(params);
    }
    double optimum = nan;
    if (spec.ratio_to_optimum) {
      const double profiles = std::pow(static_cast<double>(scenario.num_aps), static_cast<double>(scenario.num_mus));
      if (profiles <= static_cast<double>(spec.enumeration_cap))
        optimum = exhaustive_search(scenario, spec.base.jaspa.inner, spec.enumeration_cap).best_sum_rate;
    }
    table.optimum[rep] = optimum;
    for (std::size_t j = 0; j < jobs.size(); ++j) {
      RunSpec run = spec.base;
      run.algo = jobs[j].algo;
      run.jaspa.seed = seed;
      run.jaspa.connection_cost.assign(scenario.num_mus, jobs[j].cost);
      const RunOutcome o = run_experiment(scenario, run);
      CompareCell& cell = table.cells[j];
      cell.sum_rate[rep] = o.final_sum_rate;
      cell.iterations[rep] = static_cast<double>(o.iterations);
      cell.ratio[rep] = o.final_sum_rate / optimum;
      cell.converged[rep] = o.converged ? 1 : 0;
      cell.jep[rep] = o.jep ? 1 : 0;
    }
  };

  const std::size_t workers = std::max<std::size_t>(1, std::min(spec.threads, spec.repetitions));
  if (workers == 1) {
    for (std::size_t rep = 0; rep < spec.repetitions; ++rep) run_rep(rep);
  } else {
    // each repetition writes only its own slot, so the merge is order-independent
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t rep = next++; rep < spec.repetitions; rep = next++) run_rep(rep);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  return table;
}

std::string compare_to_csv(const CompareTable& table) {
  std::string out =
      "algo,cost,reps,converged_frac,jep_frac,mean_sum_rate,median_sum_rate,mean_outer_iters,median_outer_iters,"
      "mean_ratio,median_ratio,opt_kind\n";
  auto field = [](double v) { return std::isnan(v) ? std::string() : format_double(v); };
  for (const auto& cell : table.cells) {
    const std::size_t reps = cell.sum_rate.size();
    const double conv = static_cast<double>(std::count(cell.converged.begin(), cell.converged.end(), 1));
    const double jep = static_cast<double>(std::count(cell.jep.begin(), cell.jep.end(), 1));
    out += algorithm_name(cell.algo) + ',' + format_double(cell.cost) + ',' + std::to_string(reps) + ',' +
           format_double(conv / static_cast<double>(reps)) + ',' + format_double(jep / static_cast<double>(reps)) +
           ',' + field(mean(cell.sum_rate)) + ',' + field(median(cell.sum_rate)) + ',' + field(mean(cell.iterations)) +
           ',' + field(median(cell.iterations)) + ',' + field(mean(cell.ratio)) + ',' + field(median(cell.ratio)) +
           ",equilibrium\n";
  }
  return out;
}

}  // namespace jaspa
