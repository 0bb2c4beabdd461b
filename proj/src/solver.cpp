#include "gmfg/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "gmfg/parallel.hpp"

namespace gmfg {

QEnsemble::QEnsemble(ClassGrid grid, int horizon, int states, int actions)
    : grid_(std::move(grid)), horizon_(horizon), states_(states), actions_(actions) {
  if (horizon < 1 || states < 1 || actions < 1) throw std::invalid_argument("Q ensemble: empty dimension");
  data_.assign(grid_.size() * static_cast<std::size_t>((horizon + 1) * states * actions), 0.0);
}

double QEnsemble::value(std::size_t m, int t, int x) const {
  const auto r = row(m, t, x);
  return *std::max_element(r.begin(), r.end());
}

namespace {

void check_mean_field(const GameModel& model, const MeanFieldEnsemble& mf) {
  if (mf.horizon() != model.horizon() || mf.num_states() != model.num_states())
    throw std::invalid_argument("mean field ensemble shape does not match the model");
}

void check_policy(const GameModel& model, const MeanFieldEnsemble& mf, const PolicyEnsemble& pol) {
  if (pol.horizon() != model.horizon() || pol.num_states() != model.num_states() ||
      pol.num_actions() != model.num_actions())
    throw std::invalid_argument("policy ensemble shape does not match the model");
  if (!(pol.grid() == mf.grid())) throw std::invalid_argument("policy and mean field use different class grids");
}

// Generic backward recursion for one class. `continuation(t+1, x')` returns
// the value carried back from state x' at time t+1.
template <typename Continuation>
void backward_pass(const GameModel& model, const std::vector<NeighborhoodMeanField>& neighborhoods, QEnsemble& q,
                   std::size_t m, Continuation&& continuation) {
  const int states = model.num_states();
  const int actions = model.num_actions();
  std::vector<double> next_value(static_cast<std::size_t>(states));
  std::vector<double> p(static_cast<std::size_t>(states));
  for (int t = model.horizon() - 1; t >= 0; --t) {
    for (int y = 0; y < states; ++y) next_value[static_cast<std::size_t>(y)] = continuation(t + 1, y);
    const auto& g = neighborhoods[static_cast<std::size_t>(t)];
    for (int x = 0; x < states; ++x) {
      for (int u = 0; u < actions; ++u) {
        model.transition(x, u, g, p);
        double expected = 0.0;
        for (std::size_t y = 0; y < p.size(); ++y) expected += p[y] * next_value[y];
        q(m, t, x, u) = model.reward(x, u, g) + expected;
      }
    }
  }
}

double sup_distance(const MeanFieldEnsemble& a, const MeanFieldEnsemble& b) {
  double d = 0.0;
  const auto& da = a.data();
  const auto& db = b.data();
  for (std::size_t i = 0; i < da.size(); ++i) d = std::max(d, std::abs(da[i] - db[i]));
  return d;
}

}  // namespace

QEnsemble backwards_induction(const GameModel& model, const Graphon& g, const MeanFieldEnsemble& mf,
                              unsigned workers) {
  check_mean_field(model, mf);
  const auto neighborhoods = class_neighborhoods(g, mf);
  QEnsemble q(mf.grid(), model.horizon(), model.num_states(), model.num_actions());
  parallel_for(q.classes(), workers, [&](std::size_t m) {
    backward_pass(model, neighborhoods[m], q, m, [&](int t, int y) { return q.value(m, t, y); });
  });
  return q;
}

void boltzmann_row(std::span<const double> q, double eta, std::span<double> out) {
  if (!(eta >= 0.0)) throw std::invalid_argument("temperature must be non-negative");
  const auto best = std::max_element(q.begin(), q.end());
  if (eta == 0.0) {
    std::fill(out.begin(), out.end(), 0.0);
    out[static_cast<std::size_t>(best - q.begin())] = 1.0;
    return;
  }
  double total = 0.0;
  for (std::size_t u = 0; u < q.size(); ++u) {
    out[u] = std::exp((q[u] - *best) / eta);
    total += out[u];
  }
  for (double& p : out) p /= total;
}

PolicyEnsemble boltzmann_policy(const QEnsemble& q, double eta) {
  if (!(eta >= 0.0)) throw std::invalid_argument("temperature must be non-negative");
  PolicyEnsemble pol(q.grid(), q.horizon(), q.num_states(), q.num_actions());
  for (std::size_t m = 0; m < q.classes(); ++m)
    for (int t = 0; t < q.horizon(); ++t)
      for (int x = 0; x < q.num_states(); ++x) boltzmann_row(q.row(m, t, x), eta, pol.row(m, t, x));
  return pol;
}

QEnsemble policy_evaluation(const GameModel& model, const Graphon& g, const MeanFieldEnsemble& mf,
                            const PolicyEnsemble& pol, unsigned workers) {
  check_mean_field(model, mf);
  check_policy(model, mf, pol);
  const auto neighborhoods = class_neighborhoods(g, mf);
  QEnsemble q(mf.grid(), model.horizon(), model.num_states(), model.num_actions());
  const int horizon = model.horizon();
  parallel_for(q.classes(), workers, [&](std::size_t m) {
    backward_pass(model, neighborhoods[m], q, m, [&](int t, int y) {
      if (t == horizon) return 0.0;
      const auto probs = pol.row(m, t, y);
      const auto values = q.row(m, t, y);
      double v = 0.0;
      for (std::size_t u = 0; u < probs.size(); ++u) v += probs[u] * values[u];
      return v;
    });
  });
  return q;
}

std::vector<double> class_objectives(const GameModel& model, const QEnsemble& q_pi, const PolicyEnsemble& pol) {
  const auto mu0 = model.initial_distribution();
  std::vector<double> out(q_pi.classes(), 0.0);
  for (std::size_t m = 0; m < q_pi.classes(); ++m) {
    double j = 0.0;
    for (int x = 0; x < model.num_states(); ++x) {
      const auto probs = pol.row(m, 0, x);
      double v = 0.0;
      for (int u = 0; u < model.num_actions(); ++u) v += probs[static_cast<std::size_t>(u)] * q_pi(m, 0, x, u);
      j += mu0[static_cast<std::size_t>(x)] * v;
    }
    out[m] = j;
  }
  return out;
}

std::vector<double> class_best_values(const GameModel& model, const QEnsemble& q_star) {
  const auto mu0 = model.initial_distribution();
  std::vector<double> out(q_star.classes(), 0.0);
  for (std::size_t m = 0; m < q_star.classes(); ++m) {
    double j = 0.0;
    for (int x = 0; x < model.num_states(); ++x) j += mu0[static_cast<std::size_t>(x)] * q_star.value(m, 0, x);
    out[m] = j;
  }
  return out;
}

double exploitability(const GameModel& model, const Graphon& g, const PolicyEnsemble& pol,
                      const MeanFieldEnsemble& mf, unsigned workers) {
  const auto best = class_best_values(model, backwards_induction(model, g, mf, workers));
  const auto achieved = class_objectives(model, policy_evaluation(model, g, mf, pol, workers), pol);
  double gap = 0.0;
  for (std::size_t m = 0; m < best.size(); ++m) gap += best[m] - achieved[m];
  return gap / static_cast<double>(best.size());
}

SolveReport fixed_point_solve(const GameModel& model, const Graphon& g, const SolveOptions& options) {
  if (options.max_iters < 1) throw std::invalid_argument("max_iters must be at least 1");
  if (!(options.tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (!(options.eta >= 0.0)) throw std::invalid_argument("temperature must be non-negative");

  const auto grid = ClassGrid::uniform(options.classes, options.grid_scheme);
  SolveReport report;
  MeanFieldEnsemble mu = forward_simulate(model, g, PolicyEnsemble::uniform(grid, model), options.workers);
  PolicyEnsemble pol;
  for (int k = 1; k <= options.max_iters; ++k) {
    pol = boltzmann_policy(backwards_induction(model, g, mu, options.workers), options.eta);
    MeanFieldEnsemble next = forward_simulate(model, g, pol, options.workers);
    const double residual = sup_distance(next, mu);
    mu = std::move(next);
    report.iterations = k;
    report.residual_history.push_back(residual);
    if (options.record_exploitability)
      report.exploitability_history.push_back(exploitability(model, g, pol, mu, options.workers));
    report.converged = residual < options.tol;
    if (report.converged && options.stop_on_convergence) break;
  }
  report.final_exploitability = options.record_exploitability ? report.exploitability_history.back()
                                                              : exploitability(model, g, pol, mu, options.workers);
  report.final_policy = std::move(pol);
  report.final_mean_field = std::move(mu);
  return report;
}

std::vector<SweepRow> temperature_sweep(const GameModel& model, const Graphon& g, std::size_t classes,
                                        std::span<const double> etas, int iters, GridScheme scheme,
                                        unsigned workers) {
  constexpr int kWindow = 10;
  if (iters < kWindow) throw std::invalid_argument("temperature sweep needs at least 10 iterations");
  if (etas.empty()) throw std::invalid_argument("temperature sweep needs at least one temperature");
  std::vector<SweepRow> rows;
  rows.reserve(etas.size());
  for (double eta : etas) {
    SolveOptions opts;
    opts.classes = classes;
    opts.grid_scheme = scheme;
    opts.eta = eta;
    opts.max_iters = iters;
    opts.tol = std::numeric_limits<double>::min();
    opts.record_exploitability = true;
    opts.stop_on_convergence = false;
    opts.workers = workers;
    const auto report = fixed_point_solve(model, g, opts);
    const auto& hist = report.exploitability_history;
    const auto tail = std::span<const double>(hist).last(kWindow);
    SweepRow row;
    row.eta = eta;
    row.min_exploitability = *std::min_element(tail.begin(), tail.end());
    row.max_exploitability = *std::max_element(tail.begin(), tail.end());
    double total = 0.0;
    for (double e : tail) total += e;
    row.mean_exploitability = total / kWindow;
    rows.push_back(row);
  }
  return rows;
}

double uniform_policy_exploitability(const GameModel& model, const Graphon& g, const ClassGrid& grid,
                                     unsigned workers) {
  const auto pol = PolicyEnsemble::uniform(grid, model);
  const auto mf = forward_simulate(model, g, pol, workers);
  return exploitability(model, g, pol, mf, workers);
}

}  // namespace gmfg
