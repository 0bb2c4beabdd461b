#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace gmfg {

/// Dense sub-probability vector over states; the graphon-weighted aggregate
/// of neighbor states felt by one agent. Total mass lies in [0, 1].
using NeighborhoodMeanField = std::vector<double>;

/// Finite-state, finite-action, finite-horizon graphon mean field game.
/// Implementations are stateless; transition and reward are pure.
class GameModel {
 public:
  virtual ~GameModel() = default;

  virtual std::string name() const = 0;
  virtual int num_states() const = 0;
  virtual int num_actions() const = 0;
  virtual int horizon() const = 0;
  virtual std::vector<double> initial_distribution() const = 0;

  /// Writes P(. | x, u, G) into `next` (length num_states()).
  virtual void transition(int x, int u, std::span<const double> g, std::span<double> next) const = 0;
  virtual double reward(int x, int u, std::span<const double> g) const = 0;

  std::vector<double> transition(int x, int u, std::span<const double> g) const {
    std::vector<double> next(static_cast<std::size_t>(num_states()));
    transition(x, u, g, next);
    return next;
  }
};

using ModelPtr = std::shared_ptr<const GameModel>;

/// SIS epidemic game. States S = 0, I = 1; actions U = 0 (no precaution),
/// D = 1 (precaution).
namespace sis {
inline constexpr int kSusceptible = 0;
inline constexpr int kInfected = 1;
inline constexpr int kUnprotected = 0;
inline constexpr int kDistancing = 1;
}  // namespace sis

/// Investment game. States are quality levels 0..9; actions I = 0 (invest),
/// O = 1 (opt out).
namespace investment {
inline constexpr int kInvest = 0;
inline constexpr int kOptOut = 1;
}  // namespace investment

ModelPtr sis_graphon_model(int horizon = 50);
ModelPtr investment_graphon_model(int horizon = 50);

/// Registry lookup: "sis" or "investment". Throws std::invalid_argument.
ModelPtr make_model(const std::string& name, int horizon = 50);
std::vector<std::string> model_names();

}  // namespace gmfg
