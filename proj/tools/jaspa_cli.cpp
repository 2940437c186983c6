// Command-line experiment runner: generate scenarios, run one algorithm,
// compare several over seeded repetitions.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "jaspa/errors.hpp"
#include "jaspa/experiment.hpp"
#include "jaspa/scenario.hpp"

namespace {

using namespace jaspa;

std::string default_output_dir() {
  const char* env = std::getenv("JASPA_OUTPUT_DIR");
  return env && *env ? env : ".";
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw IoError("failed writing '" + path + "'");
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

struct CommonRunFlags {
  std::size_t memory = 10;
  std::uint64_t seed = 0;
  double cost = -1.0;  // negative: keep the scenario's costs
  std::string inner = "a_iwf";
  double eps = kEpsWf;
  std::size_t max_iters = 100000;
  std::size_t max_outer = 10000;
  double exponent = StepsizeSchedule::kDefaultExponent;
  bool greedy = false;

  void attach(CLI::App& app) {
    app.add_option("--m", memory, "Memory length M")->check(CLI::PositiveNumber);
    app.add_option("--seed", seed, "Run seed");
    app.add_option("--cost", cost, "Connection cost for every MU (default: scenario file)");
    app.add_option("--inner", inner, "Inner power solver")->check(CLI::IsMember({"a_iwf", "s_iwf"}));
    app.add_option("--eps", eps, "Power fixed-point tolerance")->check(CLI::PositiveNumber);
    app.add_option("--max-iters", max_iters, "Inner-loop iteration cap");
    app.add_option("--max-outer", max_outer, "Outer-loop iteration cap")->check(CLI::PositiveNumber);
    app.add_option("--schedule-exponent", exponent, "Stepsize alpha_t = (t+1)^-exponent, in (0.5, 1]");
    app.add_flag("--greedy", greedy, "Best reply is always the top AP (naive baseline)");
  }

  JaspaConfig config(const NetworkScenario* scenario) const {
    JaspaConfig c;
    c.memory_len = memory;
    c.seed = seed;
    c.max_outer = max_outer;
    c.inner.solver = inner == "s_iwf" ? InnerSolver::SIwf : InnerSolver::AIwf;
    c.inner.eps_wf = eps;
    c.inner.max_iters = max_iters;
    c.inner.schedule = StepsizeSchedule::power_law(exponent);
    c.rule = greedy ? BestReplyRule::Greedy : BestReplyRule::AnyImproving;
    if (cost >= 0.0 && scenario) c.connection_cost.assign(scenario->num_mus, cost);
    return c;
  }
};

int cmd_generate(std::size_t n, std::size_t w, std::size_t k, std::uint64_t seed, double area, double noise,
                 double budget, double cost, const std::string& out) {
  ScenarioGenParams params;
  params.num_mus = n;
  params.num_aps = w;
  params.num_channels = k;
  params.seed = seed;
  params.area_side = area;
  params.noise = noise;
  params.budget = budget;
  params.connection_cost = cost;
  const NetworkScenario s = generate_scenario(params);
  save_scenario(s, out);
  std::cout << scenario_digest(s) << "  " << out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Joint AP selection and power allocation experiments"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Write a random scenario file");
  std::size_t gen_n = 0, gen_w = 1, gen_k = 1;
  std::uint64_t gen_seed = 0;
  double gen_area = 10.0, gen_noise = 1.0, gen_budget = 1.0, gen_cost = 0.0;
  std::string gen_out;
  gen->add_option("--n", gen_n, "Number of MUs")->required();
  gen->add_option("--w", gen_w, "Number of APs")->required();
  gen->add_option("--k", gen_k, "Number of channels")->required();
  gen->add_option("--seed", gen_seed, "Generator seed");
  gen->add_option("--area", gen_area, "Side of the square area in meters");
  gen->add_option("--noise", gen_noise, "Noise power per channel");
  gen->add_option("--budget", gen_budget, "Power budget per MU");
  gen->add_option("--cost", gen_cost, "Connection cost per MU");
  gen->add_option("--out", gen_out, "Output scenario file")->required();

  // run
  auto* run = app.add_subcommand("run", "Run one algorithm on a scenario");
  std::string run_algo, run_scenario, run_assoc = "closest", run_trace, run_summary, run_out_dir, run_ap_memory;
  CommonRunFlags run_flags;
  run->add_option("--algo", run_algo, "a_iwf|s_iwf|jaspa|se_jaspa|si_jaspa|j_jaspa|closest_ap|exhaustive|virtual_bound")
      ->required();
  run->add_option("--scenario", run_scenario, "Scenario file")->required();
  run->add_option("--assoc", run_assoc, "Association for a_iwf/s_iwf: 'closest' or hyphen-joined AP indices");
  run->add_option("--trace", run_trace, "Trace CSV path (default <out-dir>/<algo>_seed<seed>.csv)");
  run->add_option("--summary", run_summary, "Summary JSON path (default <out-dir>/<algo>_seed<seed>.summary.json)");
  run->add_option("--out-dir", run_out_dir, "Output directory (default $JASPA_OUTPUT_DIR or .)");
  run->add_option("--ap-memory", run_ap_memory, "j_jaspa: write the AP coalition memory dump here");
  run_flags.attach(*run);

  // compare
  auto* cmp = app.add_subcommand("compare", "Compare algorithms over seeded repetitions");
  std::string cmp_algos, cmp_costs = "0", cmp_scenario, cmp_out;
  std::size_t cmp_reps = 1, cmp_n = 0, cmp_w = 1, cmp_k = 1, cmp_threads = 1;
  std::uint64_t cmp_seed_base = 0;
  bool cmp_no_ratio = false;
  CommonRunFlags cmp_flags;
  cmp->add_option("--algos", cmp_algos, "Comma-separated algorithm list")->required();
  cmp->add_option("--costs", cmp_costs, "Comma-separated connection costs for joint algorithms");
  cmp->add_option("--reps", cmp_reps, "Repetitions")->check(CLI::PositiveNumber);
  cmp->add_option("--seed-base", cmp_seed_base, "Seed of repetition 0");
  cmp->add_option("--scenario", cmp_scenario, "Fixed scenario file (otherwise generated per repetition)");
  cmp->add_option("--n", cmp_n, "Generated scenarios: number of MUs");
  cmp->add_option("--w", cmp_w, "Generated scenarios: number of APs");
  cmp->add_option("--k", cmp_k, "Generated scenarios: number of channels");
  cmp->add_option("--threads", cmp_threads, "Worker threads");
  cmp->add_option("--out", cmp_out, "Write the comparison CSV here as well");
  cmp->add_flag("--no-ratio", cmp_no_ratio, "Skip the exhaustive optimum");
  // compare reuses the run flags except the seed, which comes from --seed-base
  cmp->add_option("--m", cmp_flags.memory, "Memory length M")->check(CLI::PositiveNumber);
  cmp->add_option("--inner", cmp_flags.inner, "Inner power solver")->check(CLI::IsMember({"a_iwf", "s_iwf"}));
  cmp->add_option("--eps", cmp_flags.eps, "Power fixed-point tolerance")->check(CLI::PositiveNumber);
  cmp->add_option("--max-outer", cmp_flags.max_outer, "Outer-loop iteration cap")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_code(ErrorKind::Usage);
  }

  try {
    if (gen->parsed())
      return cmd_generate(gen_n, gen_w, gen_k, gen_seed, gen_area, gen_noise, gen_budget, gen_cost, gen_out);

    if (run->parsed()) {
      RunSpec spec;
      spec.algo = parse_algorithm(run_algo);
      const NetworkScenario s = load_scenario(run_scenario);
      spec.jaspa = run_flags.config(&s);
      if (run_assoc != "closest") {
        spec.association_source = AssociationSource::Given;
        spec.association = AssociationProfile::parse(run_assoc);
      }
      spec.dump_ap_memory = !run_ap_memory.empty();
      const RunOutcome outcome = run_experiment(s, spec);

      const std::string dir = run_out_dir.empty() ? default_output_dir() : run_out_dir;
      const std::string stem = run_algo + "_seed" + std::to_string(run_flags.seed);
      if (run_trace.empty() || run_summary.empty()) std::filesystem::create_directories(dir);
      const std::string trace_path = run_trace.empty() ? dir + "/" + stem + ".csv" : run_trace;
      const std::string summary_path = run_summary.empty() ? dir + "/" + stem + ".summary.json" : run_summary;
      write_trace(outcome.trace, trace_path);
      const std::string summary = summary_json(outcome);
      write_text(summary_path, summary);
      if (spec.dump_ap_memory) write_text(run_ap_memory, outcome.ap_memory_dump);
      for (const auto& w : outcome.warnings) std::cerr << "warning: " << w << "\n";
      std::cout << summary;
      return 0;
    }

    if (cmp->parsed()) {
      CompareSpec spec;
      for (const auto& name : split(cmp_algos, ',')) spec.algos.push_back(parse_algorithm(name));
      spec.costs.clear();
      for (const auto& c : split(cmp_costs, ',')) spec.costs.push_back(std::stod(c));
      if (spec.costs.empty()) spec.costs.push_back(0.0);
      spec.repetitions = cmp_reps;
      spec.seed_base = cmp_seed_base;
      spec.threads = cmp_threads;
      spec.ratio_to_optimum = !cmp_no_ratio;
      if (!cmp_scenario.empty()) {
        spec.scenario = load_scenario(cmp_scenario);
      } else {
        if (cmp_n == 0) throw UsageError("compare needs --scenario or --n/--w/--k");
        spec.generator.num_mus = cmp_n;
        spec.generator.num_aps = cmp_w;
        spec.generator.num_channels = cmp_k;
        spec.generator.validate();
      }
      spec.base.jaspa = cmp_flags.config(nullptr);
      const std::string csv = compare_to_csv(run_compare(spec));
      if (!cmp_out.empty()) write_text(cmp_out, csv);
      std::cout << csv;
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: bad number: " << e.what() << "\n";
    return exit_code(ErrorKind::Usage);
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(ErrorKind::Io);
  }
  return exit_code(ErrorKind::Usage);
}
