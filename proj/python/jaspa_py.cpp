#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "jaspa/baselines.hpp"
#include "jaspa/errors.hpp"
#include "jaspa/experiment.hpp"
#include "jaspa/jjaspa.hpp"
#include "jaspa/joint.hpp"
#include "jaspa/waterfill.hpp"

namespace py = pybind11;
using namespace jaspa;

namespace {

using Matrix = std::vector<std::vector<double>>;

AssociationProfile to_assoc(const std::vector<std::size_t>& a) { return AssociationProfile{a}; }

PowerProfile to_powers(const Matrix& p) { return PowerProfile{p}; }

JaspaConfig make_config(std::size_t memory_len, std::uint64_t seed, std::optional<double> cost, double eps,
                        std::size_t max_outer, std::optional<std::vector<std::size_t>> initial, bool greedy,
                        const NetworkScenario& s) {
  JaspaConfig cfg;
  cfg.memory_len = memory_len;
  cfg.seed = seed;
  if (cost) cfg.connection_cost.assign(s.num_mus, *cost);
  cfg.inner.eps_wf = eps;
  cfg.max_outer = max_outer;
  if (initial) cfg.initial_association = to_assoc(*initial);
  if (greedy) cfg.rule = BestReplyRule::Greedy;
  return cfg;
}

py::dict result_dict(const RunResult& r) {
  py::dict d;
  d["association"] = r.association.ap;
  d["powers"] = r.powers.mu;
  d["converged"] = r.converged;
  d["outer_iterations"] = r.outer_iterations;
  d["jep"] = r.jep_report.is_equilibrium;
  d["warnings"] = r.warnings;
  py::list rows;
  for (const auto& row : r.trace) {
    py::dict t;
    t["outer_iter"] = row.outer_iter;
    t["association"] = row.association.ap;
    t["sum_rate"] = row.sum_rate;
    t["potential"] = row.potential;
    t["residual_inf"] = row.residual_inf;
    t["switch_count"] = row.switch_count;
    rows.append(t);
  }
  d["trace"] = rows;
  return d;
}

template <typename Fn>
void def_joint(py::module_& m, const char* name, Fn fn) {
  m.def(
      name,
      [fn](const NetworkScenario& s, std::size_t memory_len, std::uint64_t seed, std::optional<double> cost,
           double eps, std::size_t max_outer, std::optional<std::vector<std::size_t>> initial, bool greedy) {
        return result_dict(fn(s, make_config(memory_len, seed, cost, eps, max_outer, initial, greedy, s)));
      },
      py::arg("scenario"), py::arg("memory_len") = 10, py::arg("seed") = 0, py::arg("cost") = py::none(),
      py::arg("eps") = kEpsWf, py::arg("max_outer") = 10000, py::arg("initial") = py::none(),
      py::arg("greedy") = false);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<UsageError>(m, "UsageError", base.ptr());
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<ResourceError>(m, "ResourceError", base.ptr());
  py::register_exception<IoError>(m, "IoError", base.ptr());

  py::class_<NetworkScenario>(m, "Scenario")
      .def_readonly("num_mus", &NetworkScenario::num_mus)
      .def_readonly("num_aps", &NetworkScenario::num_aps)
      .def_readonly("num_channels", &NetworkScenario::num_channels)
      .def_readonly("ap_channels", &NetworkScenario::ap_channels)
      .def_readonly("gain_sq", &NetworkScenario::gain_sq)
      .def_readonly("noise", &NetworkScenario::noise)
      .def_readonly("budget", &NetworkScenario::budget)
      .def("to_json", &scenario_to_string)
      .def_static("from_json", &scenario_from_string)
      .def("save", [](const NetworkScenario& s, const std::string& path) { save_scenario(s, path); })
      .def("digest", &scenario_digest)
      .def(py::self == py::self);

  m.def(
      "generate_scenario",
      [](std::size_t n, std::size_t w, std::size_t k, std::uint64_t seed, double area, double noise, double budget,
         double cost) {
        ScenarioGenParams g;
        g.num_mus = n;
        g.num_aps = w;
        g.num_channels = k;
        g.seed = seed;
        g.area_side = area;
        g.noise = noise;
        g.budget = budget;
        g.connection_cost = cost;
        return generate_scenario(g);
      },
      py::arg("n"), py::arg("w"), py::arg("k"), py::arg("seed") = 0, py::arg("area") = 10.0, py::arg("noise") = 1.0,
      py::arg("budget") = 1.0, py::arg("cost") = 0.0);
  m.def("load_scenario", &load_scenario, py::arg("path"));

  m.def(
      "water_fill",
      [](const std::vector<double>& g, const std::vector<double>& x, double budget) {
        const auto r = water_fill(g, x, budget);
        return py::make_tuple(r.powers, r.water_level);
      },
      py::arg("gains"), py::arg("floors"), py::arg("budget"));

  m.def(
      "a_iwf",
      [](const NetworkScenario& s, const std::vector<std::size_t>& a, double eps, std::size_t max_iters,
         bool sequential) {
        InnerConfig cfg;
        cfg.eps_wf = eps;
        cfg.max_iters = max_iters;
        cfg.solver = sequential ? InnerSolver::SIwf : InnerSolver::AIwf;
        const auto r = solve_inner(s, to_assoc(a), cfg);
        py::dict d;
        d["powers"] = r.powers.mu;
        d["iterations"] = r.iterations;
        d["converged"] = r.converged;
        std::vector<double> potential;
        for (const auto& row : r.trace) potential.push_back(row.potential);
        d["potential"] = potential;
        return d;
      },
      py::arg("scenario"), py::arg("association"), py::arg("eps") = kEpsWf, py::arg("max_iters") = 100000,
      py::arg("sequential") = false);

  m.def(
      "sum_rate",
      [](const NetworkScenario& s, const std::vector<std::size_t>& a, const Matrix& p) {
        return sum_rate(s, to_assoc(a), to_powers(p));
      },
      py::arg("scenario"), py::arg("association"), py::arg("powers"));
  m.def(
      "verify_jep",
      [](const NetworkScenario& s, const std::vector<std::size_t>& a, const Matrix& p, double eps) {
        return verify_jep(s, to_assoc(a), to_powers(p), eps).is_equilibrium;
      },
      py::arg("scenario"), py::arg("association"), py::arg("powers"), py::arg("eps") = 1e-6);

  def_joint(m, "jaspa", [](const NetworkScenario& s, const JaspaConfig& c) { return jaspa::jaspa(s, c); });
  def_joint(m, "se_jaspa", [](const NetworkScenario& s, const JaspaConfig& c) { return se_jaspa(s, c); });
  def_joint(m, "si_jaspa", [](const NetworkScenario& s, const JaspaConfig& c) { return si_jaspa(s, c); });
  def_joint(m, "j_jaspa", [](const NetworkScenario& s, const JaspaConfig& c) { return j_jaspa(s, c); });

  m.def(
      "closest_ap", [](const NetworkScenario& s) { return closest_ap(s).ap; }, py::arg("scenario"));
  m.def(
      "exhaustive",
      [](const NetworkScenario& s, std::size_t cap) {
        const auto r = exhaustive_search(s, {}, cap);
        py::dict d;
        d["best"] = r.best.ap;
        d["best_sum_rate"] = r.best_sum_rate;
        d["max_potential"] = r.max_potential.ap;
        d["max_potential_value"] = r.max_potential_value;
        std::vector<double> rates;
        for (const auto& row : r.table) rates.push_back(row.sum_rate);
        d["sum_rates"] = rates;
        return d;
      },
      py::arg("scenario"), py::arg("cap") = kEnumerationCap);
  m.def(
      "virtual_ap_bound", [](const NetworkScenario& s) { return virtual_ap_bound(s); }, py::arg("scenario"));

  m.def(
      "run_experiment",
      [](const NetworkScenario& s, const std::string& algo, std::uint64_t seed, std::size_t memory_len) {
        RunSpec spec;
        spec.algo = parse_algorithm(algo);
        spec.jaspa.seed = seed;
        spec.jaspa.memory_len = memory_len;
        const auto o = run_experiment(s, spec);
        return std::make_pair(summary_json(o), trace_to_csv(o.trace));
      },
      py::arg("scenario"), py::arg("algo"), py::arg("seed") = 0, py::arg("memory_len") = 10,
      "Returns (summary JSON, trace CSV).");
}
