#include <pybind11/pybind11.h>
#include <pybind11/numpy.h>
#include <pybind11/stl.h>

#include <algorithm>

#include "gmfg/graphon.hpp"
#include "gmfg/io.hpp"
#include "gmfg/meanfield.hpp"
#include "gmfg/model.hpp"
#include "gmfg/nagent.hpp"
#include "gmfg/smc.hpp"
#include "gmfg/solver.hpp"

namespace py = pybind11;
using namespace gmfg;

namespace {

py::array_t<double> as_array(const std::vector<double>& data, std::vector<py::ssize_t> shape) {
  py::array_t<double> out(shape);
  std::copy(data.begin(), data.end(), out.mutable_data());
  return out;
}

PolicyEnsemble policy_from_array(const ClassGrid& grid, py::array_t<double, py::array::c_style | py::array::forcecast> a) {
  if (a.ndim() != 4) throw std::invalid_argument("policy array must have shape (M, T, X, U)");
  if (static_cast<std::size_t>(a.shape(0)) != grid.size()) throw std::invalid_argument("policy array class count differs from grid");
  PolicyEnsemble pol(grid, static_cast<int>(a.shape(1)), static_cast<int>(a.shape(2)), static_cast<int>(a.shape(3)));
  const double* src = a.data();
  for (std::size_t m = 0; m < pol.classes(); ++m)
    for (int t = 0; t < pol.horizon(); ++t)
      for (int x = 0; x < pol.num_states(); ++x)
        for (int u = 0; u < pol.num_actions(); ++u) pol(m, t, x, u) = *src++;
  pol.validate(1e-9);
  return pol;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Graphon mean field game solver";

  py::class_<Graphon>(m, "Graphon")
      .def_static("uniform_attachment", &Graphon::uniform_attachment)
      .def_static("ranked_attachment", &Graphon::ranked_attachment)
      .def_static("erdos_renyi", &Graphon::erdos_renyi, py::arg("p"))
      .def("__call__", &Graphon::eval, py::arg("x"), py::arg("y"))
      .def("eval", &Graphon::eval, py::arg("x"), py::arg("y"))
      .def_property_readonly("name", &Graphon::name)
      .def("__repr__", [](const Graphon& g) { return "<Graphon " + g.name() + ">"; });
  m.def("make_graphon", &make_graphon, py::arg("kind"), py::arg("p") = 0.5);

  py::class_<SampledGraph>(m, "SampledGraph")
      .def_readonly("n", &SampledGraph::n)
      .def_readonly("seed", &SampledGraph::seed)
      .def_readonly("alphas", &SampledGraph::alphas)
      .def_property_readonly("edges", [](const SampledGraph& g) { return g.adjacency.edges(); })
      .def_property_readonly("adjacency",
                             [](const SampledGraph& g) {
                               py::array_t<int> a({static_cast<py::ssize_t>(g.n), static_cast<py::ssize_t>(g.n)});
                               auto v = a.mutable_unchecked<2>();
                               for (std::size_t i = 0; i < g.n; ++i)
                                 for (std::size_t j = 0; j < g.n; ++j) v(i, j) = g.adjacency(i, j) ? 1 : 0;
                               return a;
                             })
      .def("to_json", [](const SampledGraph& g) { return to_json(g).dump(); })
      .def_static("from_json", [](const std::string& s) { return sampled_graph_from_json(nlohmann::json::parse(s)); });
  m.def("sample_w_random_graph", &sample_w_random_graph, py::arg("graphon"), py::arg("n"), py::arg("seed"));
  m.def("step_graphon_from_graph", &step_graphon_from_graph, py::arg("graph"));

  py::class_<GameModel, std::shared_ptr<GameModel>>(m, "GameModel")
      .def_property_readonly("name", &GameModel::name)
      .def_property_readonly("num_states", &GameModel::num_states)
      .def_property_readonly("num_actions", &GameModel::num_actions)
      .def_property_readonly("horizon", &GameModel::horizon)
      .def_property_readonly("initial_distribution", &GameModel::initial_distribution)
      .def("transition",
           [](const GameModel& model, int x, int u, std::vector<double> g) { return model.transition(x, u, g); },
           py::arg("x"), py::arg("u"), py::arg("g"))
      .def("reward", [](const GameModel& model, int x, int u, std::vector<double> g) { return model.reward(x, u, g); },
           py::arg("x"), py::arg("u"), py::arg("g"));
  const auto to_mutable = [](ModelPtr p) { return std::const_pointer_cast<GameModel>(p); };
  m.def("sis_model", [=](int horizon) { return to_mutable(sis_graphon_model(horizon)); }, py::arg("horizon") = 50);
  m.def("investment_model", [=](int horizon) { return to_mutable(investment_graphon_model(horizon)); },
        py::arg("horizon") = 50);
  m.def("make_model", [=](const std::string& name, int horizon) { return to_mutable(make_model(name, horizon)); },
        py::arg("name"), py::arg("horizon") = 50);

  py::enum_<GridScheme>(m, "GridScheme").value("midpoint", GridScheme::midpoint).value("endpoint", GridScheme::endpoint);

  py::class_<ClassGrid>(m, "ClassGrid")
      .def_static("uniform", &ClassGrid::uniform, py::arg("classes"), py::arg("scheme") = GridScheme::midpoint)
      .def_property_readonly("representatives", &ClassGrid::representatives)
      .def_property_readonly("size", &ClassGrid::size)
      .def("nearest", &ClassGrid::nearest, py::arg("alpha"));
  m.def("uniform_grid", &uniform_grid, py::arg("classes"));

  py::class_<PolicyEnsemble>(m, "PolicyEnsemble")
      .def_static("uniform", &PolicyEnsemble::uniform, py::arg("grid"), py::arg("model"))
      .def_static("constant", &PolicyEnsemble::constant, py::arg("grid"), py::arg("model"), py::arg("action"))
      .def_static("from_array", &policy_from_array, py::arg("grid"), py::arg("array"))
      .def_property_readonly("grid", &PolicyEnsemble::grid)
      .def("array", [](const PolicyEnsemble& p) {
        return as_array(p.data(), {static_cast<py::ssize_t>(p.classes()), p.horizon(), p.num_states(), p.num_actions()});
      });

  py::class_<MeanFieldEnsemble>(m, "MeanFieldEnsemble")
      .def_property_readonly("grid", &MeanFieldEnsemble::grid)
      .def("array", [](const MeanFieldEnsemble& mf) {
        return as_array(mf.data(), {static_cast<py::ssize_t>(mf.classes()), mf.horizon(), mf.num_states()});
      });

  py::class_<QEnsemble>(m, "QEnsemble")
      .def_property_readonly("grid", &QEnsemble::grid)
      .def("array", [](const QEnsemble& q) {
        return as_array(q.data(),
                        {static_cast<py::ssize_t>(q.classes()), q.horizon() + 1, q.num_states(), q.num_actions()});
      });

  m.def("neighborhood_mf", &neighborhood_mf, py::arg("graphon"), py::arg("mf"), py::arg("alpha"), py::arg("t"));
  m.def("forward_simulate", &forward_simulate, py::arg("model"), py::arg("graphon"), py::arg("policy"),
        py::arg("workers") = 1, py::call_guard<py::gil_scoped_release>());
  m.def("lift_policy_gamma_n",
        [](const PolicyEnsemble& pol, std::vector<double> alphas) { return lift_policy_gamma_n(pol, alphas).agent_class; },
        py::arg("policy"), py::arg("alphas"));
  m.def("backwards_induction", &backwards_induction, py::arg("model"), py::arg("graphon"), py::arg("mf"),
        py::arg("workers") = 1, py::call_guard<py::gil_scoped_release>());
  m.def("boltzmann_policy", &boltzmann_policy, py::arg("q"), py::arg("eta"));
  m.def("policy_evaluation", &policy_evaluation, py::arg("model"), py::arg("graphon"), py::arg("mf"), py::arg("policy"),
        py::arg("workers") = 1, py::call_guard<py::gil_scoped_release>());
  m.def("exploitability", &exploitability, py::arg("model"), py::arg("graphon"), py::arg("policy"), py::arg("mf"),
        py::arg("workers") = 1, py::call_guard<py::gil_scoped_release>());

  py::class_<SolveReport>(m, "SolveReport")
      .def_readonly("iterations", &SolveReport::iterations)
      .def_readonly("converged", &SolveReport::converged)
      .def_readonly("residual_history", &SolveReport::residual_history)
      .def_readonly("exploitability_history", &SolveReport::exploitability_history)
      .def_readonly("final_exploitability", &SolveReport::final_exploitability)
      .def_readonly("final_policy", &SolveReport::final_policy)
      .def_readonly("final_mean_field", &SolveReport::final_mean_field);
  m.def(
      "fixed_point_solve",
      [](const GameModel& model, const Graphon& g, std::size_t classes, double eta, int max_iters, double tol,
         GridScheme scheme, bool record_exploitability, unsigned workers) {
        SolveOptions opts;
        opts.classes = classes;
        opts.eta = eta;
        opts.max_iters = max_iters;
        opts.tol = tol;
        opts.grid_scheme = scheme;
        opts.record_exploitability = record_exploitability;
        opts.workers = workers;
        py::gil_scoped_release release;
        return fixed_point_solve(model, g, opts);
      },
      py::arg("model"), py::arg("graphon"), py::arg("classes"), py::arg("eta"), py::arg("max_iters"),
      py::arg("tol") = 1e-8, py::arg("scheme") = GridScheme::midpoint, py::arg("record_exploitability") = false,
      py::arg("workers") = 1);

  py::class_<SweepRow>(m, "SweepRow")
      .def_readonly("eta", &SweepRow::eta)
      .def_readonly("mean_exploitability", &SweepRow::mean_exploitability)
      .def_readonly("min_exploitability", &SweepRow::min_exploitability)
      .def_readonly("max_exploitability", &SweepRow::max_exploitability);
  m.def(
      "temperature_sweep",
      [](const GameModel& model, const Graphon& g, std::size_t classes, std::vector<double> etas, int iters,
         unsigned workers) {
        py::gil_scoped_release release;
        return temperature_sweep(model, g, classes, etas, iters, GridScheme::midpoint, workers);
      },
      py::arg("model"), py::arg("graphon"), py::arg("classes"), py::arg("etas"), py::arg("iters"),
      py::arg("workers") = 1);

  py::class_<SmcEstimator>(m, "SmcEstimator")
      .def("neighborhood", &SmcEstimator::neighborhood, py::arg("alpha"), py::arg("t"))
      .def("tabulate", [](const SmcEstimator& est, std::vector<double> probes) {
        const auto table = est.tabulate(probes);
        return as_array(table.mass, {static_cast<py::ssize_t>(probes.size()), table.horizon, table.num_states});
      });
  m.def("smc_estimate", &smc_estimate, py::arg("model"), py::arg("graphon"), py::arg("policy"), py::arg("trajectories"),
        py::arg("particles"), py::arg("seed"), py::arg("workers") = 1, py::call_guard<py::gil_scoped_release>());

  m.def(
      "simulate_episodes",
      [](const GameModel& model, const SampledGraph& graph, const PolicyEnsemble& pol, std::size_t episodes,
         std::uint64_t seed, unsigned workers) {
        EpisodeBatch batch;
        {
          py::gil_scoped_release release;
          batch = simulate_episodes(model, graph, pol, episodes, seed, workers);
        }
        return as_array(batch.returns, {static_cast<py::ssize_t>(episodes), static_cast<py::ssize_t>(graph.n)});
      },
      py::arg("model"), py::arg("graph"), py::arg("policy"), py::arg("episodes"), py::arg("seed"),
      py::arg("workers") = 1);
  m.def("mean_field_objective", &mean_field_objective, py::arg("model"), py::arg("graphon"), py::arg("mf"),
        py::arg("policy"), py::arg("alpha"));
  m.def(
      "deviation_experiment",
      [](const GameModel& model, const Graphon& g, const PolicyEnsemble& pol, const MeanFieldEnsemble& mf,
         std::vector<std::size_t> ns, std::size_t graphs_per_n, std::size_t episodes, std::uint64_t seed,
         unsigned workers) {
        DeviationTable table;
        {
          py::gil_scoped_release release;
          table = deviation_experiment(model, g, pol, mf, ns, graphs_per_n, episodes, seed, workers);
        }
        py::list rows;
        for (const auto& r : table.rows) {
          py::dict d;
          d["n"] = r.n;
          d["graph_seed"] = r.graph_seed;
          d["max_dev"] = r.max_deviation;
          d["mean_dev"] = r.mean_deviation;
          d["stderr"] = r.standard_error;
          rows.append(d);
        }
        return rows;
      },
      py::arg("model"), py::arg("graphon"), py::arg("policy"), py::arg("mf"), py::arg("ns"), py::arg("graphs_per_n"),
      py::arg("episodes"), py::arg("seed"), py::arg("workers") = 1);

  m.attr("__version__") = io::kVersion;
}
