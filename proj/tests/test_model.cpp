#include <doctest.h>

#include <cmath>
#include <set>

#include "gmfg/model.hpp"
#include "oracles.hpp"

using namespace gmfg;

TEST_CASE("SIS model parameters") {
  const auto sis = sis_graphon_model();
  CHECK(sis->name() == "sis");
  CHECK(sis->num_states() == 2);
  CHECK(sis->num_actions() == 2);
  CHECK(sis->horizon() == 50);
  CHECK(sis->initial_distribution() == std::vector<double>{0.5, 0.5});

  const std::vector<double> g{0.3, 0.25};
  const auto p = sis->transition(sis::kSusceptible, sis::kUnprotected, g);
  CHECK(p[0] == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(p[1] == doctest::Approx(0.2).epsilon(1e-15));

  const auto d = sis->transition(sis::kSusceptible, sis::kDistancing, std::vector<double>{0.1, 0.9});
  CHECK(d == std::vector<double>{1.0, 0.0});

  for (int u : {0, 1}) {
    const auto r = sis->transition(sis::kInfected, u, g);
    CHECK(r[0] == 0.2);
    CHECK(r[1] == 0.8);
  }
  CHECK(sis->reward(sis::kInfected, sis::kDistancing, g) == -2.5);
  CHECK(sis->reward(sis::kInfected, sis::kUnprotected, g) == -2.0);
  CHECK(sis->reward(sis::kSusceptible, sis::kDistancing, g) == -0.5);
  CHECK(sis->reward(sis::kSusceptible, sis::kUnprotected, g) == 0.0);
}

TEST_CASE("Investment model parameters") {
  const auto inv = investment_graphon_model();
  CHECK(inv->name() == "investment");
  CHECK(inv->num_states() == 10);
  CHECK(inv->horizon() == 50);
  const auto mu0 = inv->initial_distribution();
  CHECK(mu0[0] == 1.0);

  const std::vector<double> zero(10, 0.0);
  const auto p0 = inv->transition(0, investment::kInvest, zero);
  CHECK(p0[1] == doctest::Approx(0.9).epsilon(1e-15));
  CHECK(p0[0] == doctest::Approx(0.1).epsilon(1e-15));
  const auto p9 = inv->transition(9, investment::kInvest, zero);
  CHECK(p9[9] == 1.0);
  for (int x = 0; x < 10; ++x) CHECK(inv->transition(x, investment::kOptOut, zero)[static_cast<std::size_t>(x)] == 1.0);
  for (int x = 0; x < 9; ++x) {
    const auto p = inv->transition(x, investment::kInvest, zero);
    CHECK(p[static_cast<std::size_t>(x) + 1] == doctest::Approx((9.0 - x) / 10.0));
    CHECK(p[static_cast<std::size_t>(x)] == doctest::Approx((1.0 + x) / 10.0));
  }
  CHECK(inv->reward(5, investment::kOptOut, zero) == doctest::Approx(1.5).epsilon(1e-15));
  std::vector<double> g(10, 0.0);
  g[2] = 0.5;  // total quality 1
  CHECK(inv->reward(4, investment::kInvest, g) == doctest::Approx(0.3 * 4 / 2.0 - 2.0));
}

TEST_CASE("transition kernels are stochastic on random sub-probability neighborhoods") {
  Rng rng(2024);
  for (const auto& model : {sis_graphon_model(), investment_graphon_model()}) {
    for (int trial = 0; trial < 1000; ++trial) {
      const auto g = testing::random_sub_probability(model->num_states(), rng);
      for (int x = 0; x < model->num_states(); ++x)
        for (int u = 0; u < model->num_actions(); ++u) {
          const auto p = model->transition(x, u, g);
          double total = 0.0;
          for (double v : p) {
            CHECK(v >= 0.0);
            total += v;
          }
          CHECK(std::abs(total - 1.0) <= 1e-12);
        }
    }
    double total = 0.0;
    for (double v : model->initial_distribution()) total += v;
    CHECK(total == doctest::Approx(1.0));
  }
}

TEST_CASE("SIS rewards take exactly four values") {
  Rng rng(5);
  const auto sis = sis_graphon_model();
  std::set<double> seen;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto g = testing::random_sub_probability(2, rng);
    for (int x = 0; x < 2; ++x)
      for (int u = 0; u < 2; ++u) seen.insert(sis->reward(x, u, g));
  }
  CHECK(seen == std::set<double>{0.0, -0.5, -2.0, -2.5});
}

TEST_CASE("Investment reward monotonicity") {
  Rng rng(8);
  const auto inv = investment_graphon_model();
  for (int trial = 0; trial < 1000; ++trial) {
    const auto g = testing::random_sub_probability(10, rng);
    for (int u = 0; u < 2; ++u) {
      for (int x = 0; x + 1 < 10; ++x) CHECK(inv->reward(x + 1, u, g) > inv->reward(x, u, g));
      // more neighborhood quality lowers profits: move mass to a higher level
      auto better = g;
      const double moved = better[0];
      better[0] = 0.0;
      better[9] += moved;
      for (int x = 0; x < 10; ++x) CHECK(inv->reward(x, u, better) <= inv->reward(x, u, g));
    }
  }
}

TEST_CASE("model registry") {
  CHECK(make_model("sis")->name() == "sis");
  CHECK(make_model("investment", 7)->horizon() == 7);
  CHECK_THROWS_AS(make_model("chess"), std::invalid_argument);
  CHECK_THROWS_AS(sis_graphon_model(0), std::invalid_argument);
}
