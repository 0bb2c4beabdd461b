#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gmfg/graphon.hpp"
#include "gmfg/meanfield.hpp"
#include "gmfg/model.hpp"

namespace gmfg {

/// Realized returns of every agent over repeated episodes on one graph.
struct EpisodeBatch {
  SampledGraph graph;
  std::size_t num_episodes = 0;
  std::vector<double> returns;  // [episode][agent]

  std::size_t num_agents() const { return graph.n; }
  double operator()(std::size_t episode, std::size_t agent) const { return returns[episode * graph.n + agent]; }

  /// Episode-mean return per agent (compensated summation).
  std::vector<double> agent_means() const;
  /// Standard error of the episode mean per agent; zero for a single episode.
  std::vector<double> agent_standard_errors() const;
};

/// Empirical neighborhood mean fields G^i(x) = |{j ~ i : X^j = x}| / N for
/// every agent, flattened [agent][x].
std::vector<double> empirical_neighborhoods(const SampledGraph& graph, std::span<const int> states, int num_states);

/// Finite N-agent game on `graph`. Agent i plays the policy of the class
/// nearest to alpha_i and feels G^i_t = (1/N) sum_j xi_ij delta_{X^j_t} from
/// the time-t snapshot. Draws use per-(episode, agent, t) substreams.
EpisodeBatch simulate_episodes(const GameModel& model, const SampledGraph& graph, const PolicyEnsemble& pol,
                               std::size_t num_episodes, std::uint64_t seed, unsigned workers = 1);

/// Expected return J_alpha of the class nearest alpha in the limiting system.
double mean_field_objective(const GameModel& model, const Graphon& g, const MeanFieldEnsemble& mf,
                            const PolicyEnsemble& pol, double alpha);

/// J_{alpha_m} for every class; one policy evaluation.
std::vector<double> mean_field_objectives(const GameModel& model, const Graphon& g, const MeanFieldEnsemble& mf,
                                          const PolicyEnsemble& pol, unsigned workers = 1);

struct DeviationRow {
  std::size_t n = 0;
  std::uint64_t graph_seed = 0;
  double max_deviation = 0.0;   // max_i |J_hat_i - J_{alpha_i}|
  double mean_deviation = 0.0;  // mean_i |J_hat_i - J_{alpha_i}|
  double standard_error = 0.0;  // mean_i of the Monte Carlo standard error of J_hat_i
};

struct DeviationTable {
  std::size_t graphs_per_n = 0;
  std::size_t episodes = 0;
  std::vector<DeviationRow> rows;
};

/// For every N and `graphs_per_n` sampled W-random graphs, compares the
/// finite-game episode-mean returns with the mean field objectives.
DeviationTable deviation_experiment(const GameModel& model, const Graphon& g, const PolicyEnsemble& pol,
                                    const MeanFieldEnsemble& mf, std::span<const std::size_t> ns,
                                    std::size_t graphs_per_n, std::size_t episodes, std::uint64_t seed,
                                    unsigned workers = 1);

}  // namespace gmfg
