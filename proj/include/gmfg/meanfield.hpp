#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gmfg/graphon.hpp"
#include "gmfg/model.hpp"

namespace gmfg {

/// How class representatives are placed.
///   midpoint: alpha_m = (m - 1/2) / M, m = 1..M  (M equal-measure classes)
///   endpoint: alpha_m = m / (M - 1), m = 0..M-1  (M >= 2; includes 0 and 1)
/// Both use quadrature weight 1/M.
enum class GridScheme { midpoint, endpoint };

/// Representatives of the M equivalence classes of [0, 1].
class ClassGrid {
 public:
  ClassGrid() = default;

  static ClassGrid uniform(std::size_t classes, GridScheme scheme = GridScheme::midpoint);
  /// Validates strictly increasing values inside [0, 1].
  static ClassGrid from_representatives(std::vector<double> reps,
                                        GridScheme scheme = GridScheme::midpoint);

  std::size_t size() const { return reps_.size(); }
  double representative(std::size_t m) const { return reps_[m]; }
  const std::vector<double>& representatives() const { return reps_; }
  double weight() const { return 1.0 / static_cast<double>(reps_.size()); }
  GridScheme scheme() const { return scheme_; }

  /// Index of the representative nearest to alpha; ties go to the lower index.
  std::size_t nearest(double alpha) const;

  bool operator==(const ClassGrid&) const = default;

 private:
  std::vector<double> reps_;
  GridScheme scheme_ = GridScheme::midpoint;
};

/// Midpoint grid with M classes.
ClassGrid uniform_grid(std::size_t classes);

/// pi^{alpha_m}_t(u | x) for every class m, time t < T, state x.
class PolicyEnsemble {
 public:
  PolicyEnsemble() = default;
  PolicyEnsemble(ClassGrid grid, int horizon, int states, int actions);

  /// Uniformly random policy for every class.
  static PolicyEnsemble uniform(ClassGrid grid, const GameModel& model);
  /// Deterministic policy playing `action` everywhere.
  static PolicyEnsemble constant(ClassGrid grid, const GameModel& model, int action);

  const ClassGrid& grid() const { return grid_; }
  std::size_t classes() const { return grid_.size(); }
  int horizon() const { return horizon_; }
  int num_states() const { return states_; }
  int num_actions() const { return actions_; }

  double& operator()(std::size_t m, int t, int x, int u) { return data_[index(m, t, x) + static_cast<std::size_t>(u)]; }
  double operator()(std::size_t m, int t, int x, int u) const { return data_[index(m, t, x) + static_cast<std::size_t>(u)]; }

  std::span<double> row(std::size_t m, int t, int x) { return {data_.data() + index(m, t, x), static_cast<std::size_t>(actions_)}; }
  std::span<const double> row(std::size_t m, int t, int x) const { return {data_.data() + index(m, t, x), static_cast<std::size_t>(actions_)}; }

  const std::vector<double>& data() const { return data_; }

  /// Throws std::invalid_argument unless every row is a distribution within tol.
  void validate(double tol = 1e-12) const;

  bool operator==(const PolicyEnsemble&) const = default;

 private:
  std::size_t index(std::size_t m, int t, int x) const {
    return ((m * static_cast<std::size_t>(horizon_) + static_cast<std::size_t>(t)) * static_cast<std::size_t>(states_) +
            static_cast<std::size_t>(x)) * static_cast<std::size_t>(actions_);
  }

  ClassGrid grid_;
  int horizon_ = 0;
  int states_ = 0;
  int actions_ = 0;
  std::vector<double> data_;
};

/// mu^{alpha_m}_t(x) for every class m, time t < T.
class MeanFieldEnsemble {
 public:
  MeanFieldEnsemble() = default;
  MeanFieldEnsemble(ClassGrid grid, int horizon, int states);

  const ClassGrid& grid() const { return grid_; }
  std::size_t classes() const { return grid_.size(); }
  int horizon() const { return horizon_; }
  int num_states() const { return states_; }

  double& operator()(std::size_t m, int t, int x) { return data_[index(m, t) + static_cast<std::size_t>(x)]; }
  double operator()(std::size_t m, int t, int x) const { return data_[index(m, t) + static_cast<std::size_t>(x)]; }

  std::span<double> row(std::size_t m, int t) { return {data_.data() + index(m, t), static_cast<std::size_t>(states_)}; }
  std::span<const double> row(std::size_t m, int t) const { return {data_.data() + index(m, t), static_cast<std::size_t>(states_)}; }

  const std::vector<double>& data() const { return data_; }

  bool operator==(const MeanFieldEnsemble&) const = default;

 private:
  std::size_t index(std::size_t m, int t) const {
    return (m * static_cast<std::size_t>(horizon_) + static_cast<std::size_t>(t)) * static_cast<std::size_t>(states_);
  }

  ClassGrid grid_;
  int horizon_ = 0;
  int states_ = 0;
  std::vector<double> data_;
};

/// (1/M) sum_m W(alpha, alpha_m) mu^{alpha_m}_t.
NeighborhoodMeanField neighborhood_mf(const Graphon& g, const MeanFieldEnsemble& mf, double alpha, int t);

/// Neighborhood mean fields felt by every class at every time, indexed
/// [m][t] -> vector over states. Shared by the forward and backward passes.
std::vector<std::vector<NeighborhoodMeanField>> class_neighborhoods(const Graphon& g,
                                                                    const MeanFieldEnsemble& mf);

/// Exact discretized mean field evolution under pol. All classes advance
/// synchronously from the time-t snapshot. No renormalization.
MeanFieldEnsemble forward_simulate(const GameModel& model, const Graphon& g, const PolicyEnsemble& pol,
                                   unsigned workers = 1);

/// Per-agent policies obtained by handing each agent the policy of the class
/// nearest to its graphon index.
struct AgentPolicyTable {
  std::vector<std::size_t> agent_class;
  PolicyEnsemble policy;

  std::size_t size() const { return agent_class.size(); }
  std::span<const double> action_probs(std::size_t agent, int t, int x) const {
    return policy.row(agent_class[agent], t, x);
  }
};

AgentPolicyTable lift_policy_gamma_n(const PolicyEnsemble& pol, std::span<const double> alphas);

namespace detail {
/// forward_simulate visiting classes in `order` within each time step.
MeanFieldEnsemble forward_simulate_in_order(const GameModel& model, const Graphon& g, const PolicyEnsemble& pol,
                                            std::span<const std::size_t> order);
}  // namespace detail

}  // namespace gmfg
