#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "support.hpp"
#include "wpcn/error.hpp"
#include "wpcn/oracle.hpp"
#include "wpcn/sum_solvers.hpp"

using namespace wpcn;

namespace {

NetworkInstance coeffs(std::vector<double> alpha, std::vector<double> hr, std::vector<double> eb,
                       std::optional<double> e_max) {
  return NetworkInstance::from_coefficients(alpha, hr, eb, e_max);
}

}  // namespace

TEST(SumSolvers, HarvestOnlySingleUserClosedForm) {
  const SolveReport r = solve_p3(coeffs({1.0}, {1.0}, {0.0}, std::nullopt));
  const double e = std::numbers::e;
  EXPECT_NEAR(r.allocation.tau0, (e - 1.0) / e, 1e-10);
  EXPECT_NEAR(r.allocation.tau[0], 1.0 / e, 1e-10);
  EXPECT_NEAR(r.sum_rate, std::log2(e) / e, 1e-10);
  EXPECT_NEAR(r.sum_rate, 0.530738, 1e-6);
}

TEST(SumSolvers, HarvestOnlyPreconditions) {
  EXPECT_THROW(solve_p3(coeffs({1.0}, {1.0}, {0.1}, std::nullopt)), DomainError);
  EXPECT_THROW(solve_p3(coeffs({1.0}, {1.0}, {0.0}, 1.0)), DomainError);
}

TEST(SumSolvers, HarvestOnlyTimesFollowGammas) {
  const SolveReport r = solve_p3(coeffs({2.0, 8.0}, {1.0, 0.5}, {0.0, 0.0}, std::nullopt));
  // tau_i proportional to gamma_i = alpha_i * harvest_rate_i.
  EXPECT_NEAR(r.allocation.tau[0] / r.allocation.tau[1], 2.0 / 4.0, 1e-12);
  EXPECT_NEAR(r.allocation.tau0 + r.allocation.tau[0] + r.allocation.tau[1], 1.0, 1e-12);
}

// Budget identity: sum E = min(budget, sum of active caps).
TEST(SumSolvers, WaterFillBudgetIdentity) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 500; ++k) {
    const std::size_t n = 1 + k % 5;
    std::vector<double> tau(n), alpha(n), caps(n);
    double total_caps = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      tau[i] = (k % 7 == 0 && i == 0) ? 0.0 : u(rng) / static_cast<double>(n);
      alpha[i] = std::pow(10.0, 10.0 * u(rng));
      caps[i] = 1e-6 * u(rng);
      if (tau[i] > 0.0) total_caps += caps[i];
    }
    const double budget = 2e-6 * u(rng) * static_cast<double>(n) * 0.5;
    const WaterFill w = water_fill(tau, alpha, caps, budget);
    const double sum = std::accumulate(w.energy.begin(), w.energy.end(), 0.0);
    const double want = std::min(budget, total_caps);
    EXPECT_NEAR(sum, want, 1e-12 * std::max(want, 1e-300)) << "case " << k;
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_LE(w.energy[i], caps[i] * (1 + 1e-12));
      EXPECT_GE(w.energy[i], 0.0);
      if (tau[i] == 0.0) EXPECT_EQ(w.energy[i], 0.0);
    }
  }
}

TEST(SumSolvers, WaterFillWithoutBudgetFillsCaps) {
  const std::vector<double> tau{0.3, 0.3}, alpha{5.0, 1.0}, caps{0.2, 0.7};
  const WaterFill w = water_fill(tau, alpha, caps, std::nullopt);
  EXPECT_DOUBLE_EQ(w.energy[0], 0.2);
  EXPECT_DOUBLE_EQ(w.energy[1], 0.7);
  EXPECT_FALSE(w.budget_binding);
}

TEST(SumSolvers, TimeStepProportionalShares) {
  const NetworkInstance net = coeffs({2.0, 1.0}, {1.0, 1.0}, {0.1, 0.1}, std::nullopt);
  const std::vector<double> energy{0.3, 0.2};
  const TimeSplit t = time_step(net, energy);
  EXPECT_NEAR(t.tau0, 0.2, 1e-12);  // covers the 0.2 deficit of user 0
  EXPECT_NEAR(t.tau[0] / t.tau[1], (2.0 * 0.3) / (1.0 * 0.2), 1e-12);
  EXPECT_NEAR(t.tau0 + t.tau[0] + t.tau[1], 1.0, 1e-12);
  const std::vector<double> impossible{2.0, 0.0};
  EXPECT_THROW(time_step(net, impossible), DomainError);
}

TEST(SumSolvers, FixedTau0MatchesGreedyClosedForm) {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 40; ++k) {
    const NetworkInstance net = fixtures::random_instance(rng, 3);
    for (double tau0 : {0.0, 0.1, 0.45, 0.8}) {
      const SolveReport r = solve_fixed_tau0(net, tau0);
      const double closed = fixed_tau0_optimum(net, tau0);
      EXPECT_NEAR(r.sum_rate, closed, 1e-7 * std::max(1.0, closed));
    }
  }
}

TEST(SumSolvers, GeneralProblemDominatesSpecialCases) {
  std::mt19937_64 rng(6);
  for (int k = 0; k < 50; ++k) {
    const NetworkInstance net = fixtures::random_instance(rng, 2);
    const SolveReport p1 = solve_p1(net);
    const SolveReport p2 = solve_p2(net);
    EXPECT_GE(p1.sum_rate, p2.sum_rate - 1e-9);
    EXPECT_TRUE(validate(net, p1.allocation).empty());
    EXPECT_TRUE(validate(net, p2.allocation).empty());
    EXPECT_EQ(p2.allocation.tau0, 0.0);
    for (std::size_t i = 1; i < p1.objective_trace.size(); ++i) {
      EXPECT_GE(p1.objective_trace[i], p1.objective_trace[i - 1] - 1e-12);
    }
    EXPECT_TRUE(p1.converged);
  }
}

TEST(SumSolvers, GeneralReducesToHarvestOnly) {
  std::mt19937_64 rng(8);
  for (int k = 0; k < 20; ++k) {
    const NetworkInstance net = fixtures::random_instance(rng, 2).harvest_only();
    const double p1 = solve_p1(net).sum_rate;
    const double p3 = solve_p3(net).sum_rate;
    EXPECT_NEAR(p1, p3, 1e-8 * std::max(1.0, p3));
  }
}

TEST(SumSolvers, SupplyOnlyWithLooseBudgetUsesEverything) {
  const NetworkInstance net = coeffs({4.0, 1.0}, {1.0, 1.0}, {0.2, 0.3}, 10.0);
  const SolveReport r = solve_p2(net);
  EXPECT_NEAR(r.allocation.energy[0], 0.2, 1e-12);
  EXPECT_NEAR(r.allocation.energy[1], 0.3, 1e-12);
  // tau_i proportional to alpha_i E_i and the whole slot is used.
  EXPECT_NEAR(r.allocation.tau[0] / r.allocation.tau[1], 0.8 / 0.3, 1e-9);
  EXPECT_NEAR(r.sum_rate, std::log2(1.0 + 0.8 + 0.3), 1e-9);
}

TEST(SumSolvers, ConfigChecks) {
  AlternatingConfig c;
  c.max_iters = 0;
  EXPECT_THROW(c.check(), DomainError);
}

TEST(SumSolvers, RegimeThresholds) {
  const HeteroInstance base({200.0}, {5.0}, {20.0}, 1.0);
  const P4Thresholds t = p4_thresholds(base);
  EXPECT_TRUE(t.harvesters_competitive);
  EXPECT_NEAR(t.lower, 0.7745632028, 1e-9);
  EXPECT_NEAR(t.upper, 1.8330961744, 1e-9);
  EXPECT_EQ(p4_regime(base.with_e_max(0.5)), P4Regime::HarvesterOnly);
  EXPECT_EQ(p4_regime(base.with_e_max(1.2)), P4Regime::Shared);
  EXPECT_EQ(p4_regime(base.with_e_max(3.0)), P4Regime::LegacyOnly);
}

TEST(SumSolvers, RegimeAllocations) {
  const HeteroInstance base({200.0}, {5.0}, {20.0}, 1.0);
  const SolveReport low = solve_p4(base.with_e_max(0.5));
  EXPECT_EQ(low.allocation.tau[1], 0.0);
  EXPECT_GT(low.allocation.tau[0], 0.0);
  const SolveReport high = solve_p4(base.with_e_max(3.0));
  EXPECT_EQ(high.allocation.tau0, 0.0);
  EXPECT_EQ(high.allocation.tau[0], 0.0);
  EXPECT_NEAR(high.sum_rate, std::log2(1.0 + 20.0 * 3.0), 1e-12);
  const SolveReport mid = solve_p4(base.with_e_max(1.2));
  EXPECT_GT(mid.allocation.tau[0], 0.0);
  EXPECT_GT(mid.allocation.tau[1], 0.0);
}

TEST(SumSolvers, HeteroMatchesOracle) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    const std::size_t m = 1 + k % 2;
    std::vector<double> g, c, th;
    for (std::size_t i = 0; i < m; ++i) {
      c.push_back(std::pow(10.0, -6.0 + 2.0 * u(rng)));
      g.push_back(c.back() * std::pow(10.0, 7.0 + 2.0 * u(rng)));
    }
    for (std::size_t j = 0; j < 3 - m; ++j) th.push_back(std::pow(10.0, 7.0 + 2.0 * u(rng)));
    const HeteroInstance h(g, c, th, std::pow(10.0, -7.0 + 2.0 * u(rng)));
    const SolveReport s = solve_p4(h);
    const Certificate cert = certify(h, Objective::Sum, s, grid_best(Objective::Sum, h), 1e-3);
    EXPECT_TRUE(cert.pass) << "case " << k << " margin " << cert.margin;
  }
}
