#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gmfg/graphon.hpp"
#include "gmfg/meanfield.hpp"
#include "gmfg/model.hpp"

namespace gmfg {

/// One independent trajectory of L interacting particles.
struct ParticleCloud {
  int horizon = 0;
  std::vector<double> alphas;  // L graphon indices
  std::vector<int> states;     // [t][particle], T x L

  std::size_t size() const { return alphas.size(); }
  int state(int t, std::size_t particle) const {
    return states[static_cast<std::size_t>(t) * alphas.size() + particle];
  }
};

/// Dense estimator table over a probe grid, indexed [probe][t][x].
struct SmcTable {
  std::vector<double> probes;
  int horizon = 0;
  int num_states = 0;
  std::vector<double> mass;

  double operator()(std::size_t probe, int t, int x) const {
    return mass[(probe * static_cast<std::size_t>(horizon) + static_cast<std::size_t>(t)) *
                    static_cast<std::size_t>(num_states) +
                static_cast<std::size_t>(x)];
  }
  std::span<const double> row(std::size_t probe, int t) const {
    return {mass.data() + (probe * static_cast<std::size_t>(horizon) + static_cast<std::size_t>(t)) *
                              static_cast<std::size_t>(num_states),
            static_cast<std::size_t>(num_states)};
  }
};

/// Particle estimate of the neighborhood mean fields,
/// G^alpha_t ~ (1/K) sum_k (1/L) sum_m W(alpha, alpha_m^k) delta_{x_t^{m,k}}.
class SmcEstimator {
 public:
  SmcEstimator(Graphon g, int num_states, std::vector<ParticleCloud> clouds);

  NeighborhoodMeanField neighborhood(double alpha, int t) const;
  SmcTable tabulate(std::span<const double> probes) const;

  const std::vector<ParticleCloud>& clouds() const { return clouds_; }
  int horizon() const { return clouds_.front().horizon; }
  int num_states() const { return num_states_; }

 private:
  Graphon graphon_;
  int num_states_;
  std::vector<ParticleCloud> clouds_;
};

/// Forward particle propagation without resampling. Every trajectory draws
/// a fresh particle cloud; particles act with the policy of their nearest
/// class and transition against the empirical neighborhood measure of the
/// time-t snapshot. Deterministic given seed.
SmcEstimator smc_estimate(const GameModel& model, const Graphon& g, const PolicyEnsemble& pol, std::size_t trajectories,
                          std::size_t particles, std::uint64_t seed, unsigned workers = 1);

/// Probe grid {0, 1/(n-1), ..., 1}.
std::vector<double> probe_grid(std::size_t n);

namespace detail {
/// Single trajectory k; `reversed` walks the particles in reverse order
/// within each time step.
ParticleCloud simulate_cloud(const GameModel& model, const Graphon& g, const PolicyEnsemble& pol,
                             std::size_t particles, std::uint64_t seed, std::uint64_t trajectory,
                             bool reversed = false);
}  // namespace detail

}  // namespace gmfg
