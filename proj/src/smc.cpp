#include "gmfg/smc.hpp"

#include <algorithm>
#include <stdexcept>

#include "gmfg/parallel.hpp"
#include "gmfg/rng.hpp"

namespace gmfg {
namespace {
constexpr std::uint64_t kInitStream = 0x696E6974ULL;
}

namespace detail {

ParticleCloud simulate_cloud(const GameModel& model, const Graphon& g, const PolicyEnsemble& pol,
                             std::size_t particles, std::uint64_t seed, std::uint64_t trajectory, bool reversed) {
  const int horizon = model.horizon();
  const auto states = static_cast<std::size_t>(model.num_states());
  const std::size_t n = particles;

  ParticleCloud cloud;
  cloud.horizon = horizon;
  cloud.alphas.resize(n);
  cloud.states.assign(static_cast<std::size_t>(horizon) * n, 0);

  const auto mu0 = model.initial_distribution();
  Rng init = substream(seed, {trajectory, kInitStream});
  for (std::size_t m = 0; m < n; ++m) {
    cloud.alphas[m] = init.uniform();
    cloud.states[m] = static_cast<int>(init.categorical(mu0));
  }
  std::vector<std::size_t> policy_class(n);
  for (std::size_t m = 0; m < n; ++m) policy_class[m] = pol.grid().nearest(cloud.alphas[m]);

  std::vector<double> neighborhood(n * states);
  std::vector<double> p(states);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (int t = 0; t + 1 < horizon; ++t) {
    const int* now = cloud.states.data() + static_cast<std::size_t>(t) * n;
    int* next = cloud.states.data() + static_cast<std::size_t>(t + 1) * n;

    // empirical neighborhood of every particle from the time-t snapshot
    for (std::size_t m = 0; m < n; ++m) {
      double* acc = neighborhood.data() + m * states;
      std::fill(acc, acc + states, 0.0);
      const double a = cloud.alphas[m];
      for (std::size_t k = 0; k < n; ++k) acc[now[k]] += g(a, cloud.alphas[k]);
      for (std::size_t x = 0; x < states; ++x) acc[x] *= inv_n;
    }

    for (std::size_t step = 0; step < n; ++step) {
      const std::size_t m = reversed ? n - 1 - step : step;
      Rng rng = substream(seed, {trajectory, static_cast<std::uint64_t>(t), m});
      const int x = now[m];
      const int u = static_cast<int>(rng.categorical(pol.row(policy_class[m], t, x)));
      model.transition(x, u, std::span<const double>(neighborhood.data() + m * states, states), p);
      next[m] = static_cast<int>(rng.categorical(p));
    }
  }
  return cloud;
}

}  // namespace detail

SmcEstimator::SmcEstimator(Graphon g, int num_states, std::vector<ParticleCloud> clouds)
    : graphon_(std::move(g)), num_states_(num_states), clouds_(std::move(clouds)) {
  if (clouds_.empty()) throw std::invalid_argument("SMC estimator needs at least one trajectory");
}

NeighborhoodMeanField SmcEstimator::neighborhood(double alpha, int t) const {
  if (t < 0 || t >= horizon()) throw std::out_of_range("SMC estimator: t outside [0, T)");
  NeighborhoodMeanField out(static_cast<std::size_t>(num_states_), 0.0);
  std::vector<double> acc(out.size());
  for (const auto& cloud : clouds_) {
    std::fill(acc.begin(), acc.end(), 0.0);
    for (std::size_t m = 0; m < cloud.size(); ++m)
      acc[static_cast<std::size_t>(cloud.state(t, m))] += graphon_(alpha, cloud.alphas[m]);
    for (std::size_t x = 0; x < out.size(); ++x) out[x] += acc[x] / static_cast<double>(cloud.size());
  }
  for (double& v : out) v /= static_cast<double>(clouds_.size());
  return out;
}

SmcTable SmcEstimator::tabulate(std::span<const double> probes) const {
  SmcTable table;
  table.probes.assign(probes.begin(), probes.end());
  table.horizon = horizon();
  table.num_states = num_states_;
  table.mass.reserve(probes.size() * static_cast<std::size_t>(horizon() * num_states_));
  for (double alpha : probes)
    for (int t = 0; t < horizon(); ++t) {
      const auto g = neighborhood(alpha, t);
      table.mass.insert(table.mass.end(), g.begin(), g.end());
    }
  return table;
}

SmcEstimator smc_estimate(const GameModel& model, const Graphon& g, const PolicyEnsemble& pol, std::size_t trajectories,
                          std::size_t particles, std::uint64_t seed, unsigned workers) {
  if (trajectories < 1) throw std::invalid_argument("SMC needs K >= 1 trajectories");
  if (particles < 1) throw std::invalid_argument("SMC needs L >= 1 particles");
  if (pol.horizon() != model.horizon() || pol.num_states() != model.num_states() ||
      pol.num_actions() != model.num_actions())
    throw std::invalid_argument("policy ensemble shape does not match the model");
  std::vector<ParticleCloud> clouds(trajectories);
  parallel_for(trajectories, workers, [&](std::size_t k) {
    clouds[k] = detail::simulate_cloud(model, g, pol, particles, seed, k);
  });
  return SmcEstimator(g, model.num_states(), std::move(clouds));
}

std::vector<double> probe_grid(std::size_t n) {
  if (n == 0) throw std::invalid_argument("probe grid needs at least one point");
  if (n == 1) return {0.5};
  std::vector<double> probes(n);
  for (std::size_t i = 0; i < n; ++i) probes[i] = static_cast<double>(i) / static_cast<double>(n - 1);
  return probes;
}

}  // namespace gmfg
