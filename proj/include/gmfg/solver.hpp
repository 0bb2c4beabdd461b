#pragma once

#include <optional>
#include <span>
#include <vector>

#include "gmfg/graphon.hpp"
#include "gmfg/meanfield.hpp"
#include "gmfg/model.hpp"

namespace gmfg {

/// Q_{alpha_m}(t, x, u) for t = 0..T; the slice t = T is identically zero.
class QEnsemble {
 public:
  QEnsemble() = default;
  QEnsemble(ClassGrid grid, int horizon, int states, int actions);

  const ClassGrid& grid() const { return grid_; }
  std::size_t classes() const { return grid_.size(); }
  int horizon() const { return horizon_; }
  int num_states() const { return states_; }
  int num_actions() const { return actions_; }

  double& operator()(std::size_t m, int t, int x, int u) { return data_[index(m, t, x) + static_cast<std::size_t>(u)]; }
  double operator()(std::size_t m, int t, int x, int u) const { return data_[index(m, t, x) + static_cast<std::size_t>(u)]; }

  std::span<double> row(std::size_t m, int t, int x) { return {data_.data() + index(m, t, x), static_cast<std::size_t>(actions_)}; }
  std::span<const double> row(std::size_t m, int t, int x) const { return {data_.data() + index(m, t, x), static_cast<std::size_t>(actions_)}; }

  /// max_u Q(t, x, u)
  double value(std::size_t m, int t, int x) const;

  const std::vector<double>& data() const { return data_; }
  bool operator==(const QEnsemble&) const = default;

 private:
  std::size_t index(std::size_t m, int t, int x) const {
    return ((m * static_cast<std::size_t>(horizon_ + 1) + static_cast<std::size_t>(t)) * static_cast<std::size_t>(states_) +
            static_cast<std::size_t>(x)) * static_cast<std::size_t>(actions_);
  }

  ClassGrid grid_;
  int horizon_ = 0;
  int states_ = 0;
  int actions_ = 0;
  std::vector<double> data_;
};

/// Optimal action values of every class against the fixed mean field mf.
QEnsemble backwards_induction(const GameModel& model, const Graphon& g, const MeanFieldEnsemble& mf,
                              unsigned workers = 1);

/// Softmax of Q / eta per (class, t, x) row with max subtraction; eta = 0
/// gives the argmax policy with ties broken toward the lowest action.
PolicyEnsemble boltzmann_policy(const QEnsemble& q, double eta);

/// Softmax of one row of action values. Exposed for property tests.
void boltzmann_row(std::span<const double> q, double eta, std::span<double> out);

/// Action values of pol against the fixed mean field mf; the continuation
/// at t+1 is weighted by pi_{t+1}.
QEnsemble policy_evaluation(const GameModel& model, const Graphon& g, const MeanFieldEnsemble& mf,
                            const PolicyEnsemble& pol, unsigned workers = 1);

/// Per-class objective E_{x ~ mu0} sum_u pi_0(u|x) Q^{mu,pi}(0, x, u).
std::vector<double> class_objectives(const GameModel& model, const QEnsemble& q_pi, const PolicyEnsemble& pol);

/// Per-class best-response value E_{x ~ mu0} max_u Q*(0, x, u).
std::vector<double> class_best_values(const GameModel& model, const QEnsemble& q_star);

/// Average over classes of the best-response gap under the fixed mean field.
/// mf is expected to be the mean field induced by pol.
double exploitability(const GameModel& model, const Graphon& g, const PolicyEnsemble& pol,
                      const MeanFieldEnsemble& mf, unsigned workers = 1);

struct SolveOptions {
  std::size_t classes = 50;
  GridScheme grid_scheme = GridScheme::midpoint;
  double eta = 0.0;
  int max_iters = 250;
  double tol = 1e-8;
  bool record_exploitability = false;
  /// When false, all max_iters iterations run even after the residual drops below tol.
  bool stop_on_convergence = true;
  unsigned workers = 1;
};

struct SolveReport {
  int iterations = 0;
  bool converged = false;
  std::vector<double> residual_history;
  PolicyEnsemble final_policy;
  MeanFieldEnsemble final_mean_field;
  /// Exploitability of (pi^k, mu^k) per iteration; empty unless recorded.
  std::vector<double> exploitability_history;
  double final_exploitability = 0.0;
};

/// Picard iteration mu -> Q -> Boltzmann policy -> induced mean field,
/// started from the mean field of the uniformly random policy. The residual
/// is the sup over (class, t, x) of consecutive mean field differences.
SolveReport fixed_point_solve(const GameModel& model, const Graphon& g, const SolveOptions& options);

struct SweepRow {
  double eta = 0.0;
  double mean_exploitability = 0.0;
  double min_exploitability = 0.0;
  double max_exploitability = 0.0;
};

/// Runs `iters` fixed point iterations per temperature and aggregates the
/// exploitability over the last 10. Rows follow the order of `etas`.
std::vector<SweepRow> temperature_sweep(const GameModel& model, const Graphon& g, std::size_t classes,
                                        std::span<const double> etas, int iters,
                                        GridScheme scheme = GridScheme::midpoint, unsigned workers = 1);

/// Exploitability of the uniformly random policy against its own mean field.
double uniform_policy_exploitability(const GameModel& model, const Graphon& g, const ClassGrid& grid,
                                     unsigned workers = 1);

}  // namespace gmfg
