#include "gmfg/meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "gmfg/parallel.hpp"

namespace gmfg {

ClassGrid ClassGrid::uniform(std::size_t classes, GridScheme scheme) {
  if (classes == 0) throw std::invalid_argument("class grid needs at least one class");
  std::vector<double> reps(classes);
  const auto count = static_cast<double>(classes);
  if (scheme == GridScheme::midpoint) {
    for (std::size_t m = 0; m < classes; ++m) reps[m] = (static_cast<double>(m) + 0.5) / count;
  } else {
    if (classes < 2) throw std::invalid_argument("endpoint grid needs at least two classes");
    for (std::size_t m = 0; m < classes; ++m) reps[m] = static_cast<double>(m) / (count - 1.0);
  }
  return from_representatives(std::move(reps), scheme);
}

ClassGrid ClassGrid::from_representatives(std::vector<double> reps, GridScheme scheme) {
  if (reps.empty()) throw std::invalid_argument("class grid needs at least one class");
  for (std::size_t m = 0; m < reps.size(); ++m) {
    if (!(reps[m] >= 0.0 && reps[m] <= 1.0)) throw std::invalid_argument("class representative outside [0, 1]");
    if (m > 0 && !(reps[m] > reps[m - 1]))
      throw std::invalid_argument("class representatives must be strictly increasing");
  }
  ClassGrid grid;
  grid.reps_ = std::move(reps);
  grid.scheme_ = scheme;
  return grid;
}

std::size_t ClassGrid::nearest(double alpha) const {
  // first representative >= alpha, then compare with its left neighbor
  const auto it = std::lower_bound(reps_.begin(), reps_.end(), alpha);
  if (it == reps_.begin()) return 0;
  if (it == reps_.end()) return reps_.size() - 1;
  const auto hi = static_cast<std::size_t>(it - reps_.begin());
  const std::size_t lo = hi - 1;
  return (alpha - reps_[lo] <= reps_[hi] - alpha) ? lo : hi;
}

ClassGrid uniform_grid(std::size_t classes) { return ClassGrid::uniform(classes, GridScheme::midpoint); }

PolicyEnsemble::PolicyEnsemble(ClassGrid grid, int horizon, int states, int actions)
    : grid_(std::move(grid)), horizon_(horizon), states_(states), actions_(actions) {
  if (horizon < 1 || states < 1 || actions < 1) throw std::invalid_argument("policy ensemble: empty dimension");
  data_.assign(grid_.size() * static_cast<std::size_t>(horizon * states * actions), 0.0);
}

PolicyEnsemble PolicyEnsemble::uniform(ClassGrid grid, const GameModel& model) {
  PolicyEnsemble pol(std::move(grid), model.horizon(), model.num_states(), model.num_actions());
  std::fill(pol.data_.begin(), pol.data_.end(), 1.0 / model.num_actions());
  return pol;
}

PolicyEnsemble PolicyEnsemble::constant(ClassGrid grid, const GameModel& model, int action) {
  if (action < 0 || action >= model.num_actions()) throw std::invalid_argument("constant policy: invalid action");
  PolicyEnsemble pol(std::move(grid), model.horizon(), model.num_states(), model.num_actions());
  for (std::size_t m = 0; m < pol.classes(); ++m)
    for (int t = 0; t < pol.horizon_; ++t)
      for (int x = 0; x < pol.states_; ++x) pol(m, t, x, action) = 1.0;
  return pol;
}

void PolicyEnsemble::validate(double tol) const {
  for (std::size_t m = 0; m < classes(); ++m) {
    for (int t = 0; t < horizon_; ++t) {
      for (int x = 0; x < states_; ++x) {
        double total = 0.0;
        for (double p : row(m, t, x)) {
          if (!(p >= 0.0)) throw std::invalid_argument("policy has a negative or NaN probability");
          total += p;
        }
        if (std::abs(total - 1.0) > tol)
          throw std::invalid_argument("policy row (class " + std::to_string(m) + ", t " + std::to_string(t) +
                                      ", x " + std::to_string(x) + ") does not sum to 1");
      }
    }
  }
}

MeanFieldEnsemble::MeanFieldEnsemble(ClassGrid grid, int horizon, int states)
    : grid_(std::move(grid)), horizon_(horizon), states_(states) {
  if (horizon < 1 || states < 1) throw std::invalid_argument("mean field ensemble: empty dimension");
  data_.assign(grid_.size() * static_cast<std::size_t>(horizon * states), 0.0);
}

namespace {

// acc = weight * sum_n w_row[n] * mu_n,t; fixed summation order over n.
void accumulate_neighborhood(const MeanFieldEnsemble& mf, std::span<const double> w_row, int t,
                             std::span<double> acc) {
  std::fill(acc.begin(), acc.end(), 0.0);
  for (std::size_t n = 0; n < mf.classes(); ++n) {
    const double w = w_row[n];
    if (w == 0.0) continue;
    const auto mu = mf.row(n, t);
    for (std::size_t x = 0; x < acc.size(); ++x) acc[x] += w * mu[x];
  }
  const double weight = mf.grid().weight();
  for (double& a : acc) a *= weight;
}

std::vector<double> kernel_row(const Graphon& g, const ClassGrid& grid, double alpha) {
  std::vector<double> row(grid.size());
  for (std::size_t n = 0; n < grid.size(); ++n) row[n] = g(alpha, grid.representative(n));
  return row;
}

void check_shapes(const GameModel& model, const PolicyEnsemble& pol) {
  if (pol.horizon() != model.horizon() || pol.num_states() != model.num_states() ||
      pol.num_actions() != model.num_actions())
    throw std::invalid_argument("policy ensemble shape does not match the model");
}

void advance_class(const GameModel& model, const PolicyEnsemble& pol, MeanFieldEnsemble& mf,
                   std::span<const double> w_row, std::size_t m, int t) {
  const auto states = static_cast<std::size_t>(model.num_states());
  std::vector<double> g(states), p(states);
  accumulate_neighborhood(mf, w_row, t, g);
  auto next = mf.row(m, t + 1);
  std::fill(next.begin(), next.end(), 0.0);
  const auto mu = mf.row(m, t);
  for (int x = 0; x < model.num_states(); ++x) {
    if (mu[static_cast<std::size_t>(x)] == 0.0) continue;
    for (int u = 0; u < model.num_actions(); ++u) {
      const double mass = mu[static_cast<std::size_t>(x)] * pol(m, t, x, u);
      if (mass == 0.0) continue;
      model.transition(x, u, g, p);
      for (std::size_t y = 0; y < states; ++y) next[y] += mass * p[y];
    }
  }
}

MeanFieldEnsemble initial_ensemble(const GameModel& model, const PolicyEnsemble& pol) {
  MeanFieldEnsemble mf(pol.grid(), model.horizon(), model.num_states());
  const auto mu0 = model.initial_distribution();
  for (std::size_t m = 0; m < mf.classes(); ++m) std::copy(mu0.begin(), mu0.end(), mf.row(m, 0).begin());
  return mf;
}

std::vector<std::vector<double>> kernel_matrix(const Graphon& g, const ClassGrid& grid) {
  std::vector<std::vector<double>> w(grid.size());
  for (std::size_t m = 0; m < grid.size(); ++m) w[m] = kernel_row(g, grid, grid.representative(m));
  return w;
}

}  // namespace

NeighborhoodMeanField neighborhood_mf(const Graphon& g, const MeanFieldEnsemble& mf, double alpha, int t) {
  if (t < 0 || t >= mf.horizon()) throw std::out_of_range("neighborhood_mf: t outside [0, T)");
  NeighborhoodMeanField out(static_cast<std::size_t>(mf.num_states()));
  accumulate_neighborhood(mf, kernel_row(g, mf.grid(), alpha), t, out);
  return out;
}

std::vector<std::vector<NeighborhoodMeanField>> class_neighborhoods(const Graphon& g, const MeanFieldEnsemble& mf) {
  const auto w = kernel_matrix(g, mf.grid());
  std::vector<std::vector<NeighborhoodMeanField>> out(mf.classes());
  for (std::size_t m = 0; m < mf.classes(); ++m) {
    out[m].resize(static_cast<std::size_t>(mf.horizon()));
    for (int t = 0; t < mf.horizon(); ++t) {
      auto& acc = out[m][static_cast<std::size_t>(t)];
      acc.resize(static_cast<std::size_t>(mf.num_states()));
      accumulate_neighborhood(mf, w[m], t, acc);
    }
  }
  return out;
}

MeanFieldEnsemble forward_simulate(const GameModel& model, const Graphon& g, const PolicyEnsemble& pol,
                                   unsigned workers) {
  check_shapes(model, pol);
  MeanFieldEnsemble mf = initial_ensemble(model, pol);
  const auto w = kernel_matrix(g, pol.grid());
  for (int t = 0; t + 1 < model.horizon(); ++t) {
    parallel_for(mf.classes(), workers, [&](std::size_t m) { advance_class(model, pol, mf, w[m], m, t); });
  }
  return mf;
}

namespace detail {
MeanFieldEnsemble forward_simulate_in_order(const GameModel& model, const Graphon& g, const PolicyEnsemble& pol,
                                            std::span<const std::size_t> order) {
  check_shapes(model, pol);
  if (order.size() != pol.classes()) throw std::invalid_argument("class order has the wrong length");
  MeanFieldEnsemble mf = initial_ensemble(model, pol);
  const auto w = kernel_matrix(g, pol.grid());
  for (int t = 0; t + 1 < model.horizon(); ++t)
    for (std::size_t m : order) advance_class(model, pol, mf, w[m], m, t);
  return mf;
}
}  // namespace detail

AgentPolicyTable lift_policy_gamma_n(const PolicyEnsemble& pol, std::span<const double> alphas) {
  AgentPolicyTable table;
  table.policy = pol;
  table.agent_class.reserve(alphas.size());
  for (double a : alphas) {
    if (!(a >= 0.0 && a <= 1.0)) throw std::invalid_argument("graphon index outside [0, 1]");
    table.agent_class.push_back(pol.grid().nearest(a));
  }
  return table;
}

}  // namespace gmfg
