#include "gmfg/model.hpp"

#include <algorithm>
#include <stdexcept>

namespace gmfg {
namespace {

void check_horizon(int horizon) {
  if (horizon < 1) throw std::invalid_argument("horizon must be at least 1");
}

class SisGraphon final : public GameModel {
 public:
  explicit SisGraphon(int horizon) : horizon_(horizon) { check_horizon(horizon); }

  std::string name() const override { return "sis"; }
  int num_states() const override { return 2; }
  int num_actions() const override { return 2; }
  int horizon() const override { return horizon_; }
  std::vector<double> initial_distribution() const override { return {0.5, 0.5}; }

  void transition(int x, int u, std::span<const double> g, std::span<double> next) const override {
    if (x == sis::kInfected) {
      next[sis::kSusceptible] = 0.2;
      next[sis::kInfected] = 0.8;
      return;
    }
    const double infect = u == sis::kDistancing ? 0.0 : 0.8 * g[sis::kInfected];
    next[sis::kSusceptible] = 1.0 - infect;
    next[sis::kInfected] = infect;
  }

  double reward(int x, int u, std::span<const double>) const override {
    return -2.0 * (x == sis::kInfected ? 1.0 : 0.0) - 0.5 * (u == sis::kDistancing ? 1.0 : 0.0);
  }

 private:
  int horizon_;
};

class InvestmentGraphon final : public GameModel {
 public:
  static constexpr int kLevels = 10;

  explicit InvestmentGraphon(int horizon) : horizon_(horizon) { check_horizon(horizon); }

  std::string name() const override { return "investment"; }
  int num_states() const override { return kLevels; }
  int num_actions() const override { return 2; }
  int horizon() const override { return horizon_; }
  std::vector<double> initial_distribution() const override {
    std::vector<double> mu(kLevels, 0.0);
    mu[0] = 1.0;
    return mu;
  }

  void transition(int x, int u, std::span<const double>, std::span<double> next) const override {
    std::fill(next.begin(), next.end(), 0.0);
    if (x == kLevels - 1 || u == investment::kOptOut) {
      next[static_cast<std::size_t>(x)] = 1.0;
      return;
    }
    next[static_cast<std::size_t>(x) + 1] = (9.0 - x) / 10.0;
    next[static_cast<std::size_t>(x)] = (1.0 + x) / 10.0;
  }

  double reward(int x, int u, std::span<const double> g) const override {
    double quality = 0.0;
    for (int k = 0; k < kLevels; ++k) quality += k * g[static_cast<std::size_t>(k)];
    return 0.3 * x / (1.0 + quality) - 2.0 * (u == investment::kInvest ? 1.0 : 0.0);
  }

 private:
  int horizon_;
};

}  // namespace

ModelPtr sis_graphon_model(int horizon) { return std::make_shared<SisGraphon>(horizon); }

ModelPtr investment_graphon_model(int horizon) { return std::make_shared<InvestmentGraphon>(horizon); }

ModelPtr make_model(const std::string& name, int horizon) {
  if (name == "sis") return sis_graphon_model(horizon);
  if (name == "investment") return investment_graphon_model(horizon);
  throw std::invalid_argument("unknown model '" + name + "'");
}

std::vector<std::string> model_names() { return {"sis", "investment"}; }

}  // namespace gmfg
