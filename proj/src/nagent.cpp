#include "gmfg/nagent.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gmfg/parallel.hpp"
#include "gmfg/rng.hpp"
#include "gmfg/solver.hpp"

namespace gmfg {
namespace {

constexpr std::uint64_t kInitStream = 0x696E6974ULL;
constexpr std::uint64_t kEpisodeStream = 0x65706973ULL;

// Neumaier summation
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

void fill_neighborhoods(const std::vector<std::vector<std::uint32_t>>& neighbors, std::span<const int> states,
                        std::size_t num_states, std::span<double> out, std::vector<std::uint32_t>& counts) {
  const double n = static_cast<double>(neighbors.size());
  for (std::size_t i = 0; i < neighbors.size(); ++i) {
    std::fill(counts.begin(), counts.end(), 0u);
    for (std::uint32_t j : neighbors[i]) ++counts[static_cast<std::size_t>(states[j])];
    for (std::size_t x = 0; x < num_states; ++x) out[i * num_states + x] = counts[x] / n;
  }
}

}  // namespace

std::vector<double> empirical_neighborhoods(const SampledGraph& graph, std::span<const int> states, int num_states) {
  if (states.size() != graph.n) throw std::invalid_argument("one state per agent is required");
  const auto k = static_cast<std::size_t>(num_states);
  std::vector<double> out(graph.n * k);
  std::vector<std::uint32_t> counts(k);
  fill_neighborhoods(graph.adjacency.neighbor_lists(), states, k, out, counts);
  return out;
}

std::vector<double> EpisodeBatch::agent_means() const {
  std::vector<double> out(graph.n, 0.0);
  for (std::size_t i = 0; i < graph.n; ++i) {
    CompensatedSum s;
    for (std::size_t e = 0; e < num_episodes; ++e) s.add((*this)(e, i));
    out[i] = s.value() / static_cast<double>(num_episodes);
  }
  return out;
}

std::vector<double> EpisodeBatch::agent_standard_errors() const {
  std::vector<double> out(graph.n, 0.0);
  if (num_episodes < 2) return out;
  const auto means = agent_means();
  for (std::size_t i = 0; i < graph.n; ++i) {
    CompensatedSum s;
    for (std::size_t e = 0; e < num_episodes; ++e) {
      const double d = (*this)(e, i) - means[i];
      s.add(d * d);
    }
    const double var = s.value() / static_cast<double>(num_episodes - 1);
    out[i] = std::sqrt(var / static_cast<double>(num_episodes));
  }
  return out;
}

EpisodeBatch simulate_episodes(const GameModel& model, const SampledGraph& graph, const PolicyEnsemble& pol,
                               std::size_t num_episodes, std::uint64_t seed, unsigned workers) {
  if (num_episodes < 1) throw std::invalid_argument("simulate_episodes needs at least one episode");
  if (pol.horizon() != model.horizon() || pol.num_states() != model.num_states() ||
      pol.num_actions() != model.num_actions())
    throw std::invalid_argument("policy ensemble shape does not match the model");

  const std::size_t n = graph.n;
  const auto states = static_cast<std::size_t>(model.num_states());
  const auto lifted = lift_policy_gamma_n(pol, graph.alphas);
  const auto neighbors = graph.adjacency.neighbor_lists();
  const auto mu0 = model.initial_distribution();

  EpisodeBatch batch;
  batch.graph = graph;
  batch.num_episodes = num_episodes;
  batch.returns.assign(num_episodes * n, 0.0);

  parallel_for(num_episodes, workers, [&](std::size_t e) {
    std::vector<int> now(n), next(n);
    std::vector<double> g(n * states), p(states);
    std::vector<std::uint32_t> counts(states);
    double* returns = batch.returns.data() + e * n;
    for (std::size_t i = 0; i < n; ++i) {
      Rng rng = substream(seed, {e, i, kInitStream});
      now[i] = static_cast<int>(rng.categorical(mu0));
    }
    for (int t = 0; t < model.horizon(); ++t) {
      fill_neighborhoods(neighbors, now, states, g, counts);
      for (std::size_t i = 0; i < n; ++i) {
        Rng rng = substream(seed, {e, i, static_cast<std::uint64_t>(t)});
        const int x = now[i];
        const int u = static_cast<int>(rng.categorical(lifted.action_probs(i, t, x)));
        const std::span<const double> gi(g.data() + i * states, states);
        returns[i] += model.reward(x, u, gi);
        if (t + 1 < model.horizon()) {
          model.transition(x, u, gi, p);
          next[i] = static_cast<int>(rng.categorical(p));
        }
      }
      now.swap(next);
    }
  });
  return batch;
}

std::vector<double> mean_field_objectives(const GameModel& model, const Graphon& g, const MeanFieldEnsemble& mf,
                                          const PolicyEnsemble& pol, unsigned workers) {
  return class_objectives(model, policy_evaluation(model, g, mf, pol, workers), pol);
}

double mean_field_objective(const GameModel& model, const Graphon& g, const MeanFieldEnsemble& mf,
                            const PolicyEnsemble& pol, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("graphon index outside [0, 1]");
  return mean_field_objectives(model, g, mf, pol)[pol.grid().nearest(alpha)];
}

DeviationTable deviation_experiment(const GameModel& model, const Graphon& g, const PolicyEnsemble& pol,
                                    const MeanFieldEnsemble& mf, std::span<const std::size_t> ns,
                                    std::size_t graphs_per_n, std::size_t episodes, std::uint64_t seed,
                                    unsigned workers) {
  if (ns.empty()) throw std::invalid_argument("deviation experiment needs at least one N");
  if (graphs_per_n < 1) throw std::invalid_argument("deviation experiment needs at least one graph per N");
  const auto objectives = mean_field_objectives(model, g, mf, pol, workers);

  DeviationTable table;
  table.graphs_per_n = graphs_per_n;
  table.episodes = episodes;
  for (std::size_t n : ns) {
    for (std::size_t r = 0; r < graphs_per_n; ++r) {
      const std::uint64_t graph_seed = derive_seed(seed, {n, r});
      const auto graph = sample_w_random_graph(g, n, graph_seed);
      const auto batch =
          simulate_episodes(model, graph, pol, episodes, derive_seed(graph_seed, {kEpisodeStream}), workers);
      const auto means = batch.agent_means();
      const auto errors = batch.agent_standard_errors();

      DeviationRow row;
      row.n = n;
      row.graph_seed = graph_seed;
      CompensatedSum dev_sum, err_sum;
      for (std::size_t i = 0; i < n; ++i) {
        const double dev = std::abs(means[i] - objectives[pol.grid().nearest(graph.alphas[i])]);
        row.max_deviation = std::max(row.max_deviation, dev);
        dev_sum.add(dev);
        err_sum.add(errors[i]);
      }
      row.mean_deviation = std::min(dev_sum.value() / static_cast<double>(n), row.max_deviation);
      row.standard_error = err_sum.value() / static_cast<double>(n);
      table.rows.push_back(row);
    }
  }
  return table;
}

}  // namespace gmfg
