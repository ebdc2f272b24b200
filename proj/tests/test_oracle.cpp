#include <gtest/gtest.h>

#include <random>

#include "support.hpp"
#include "wpcn/error.hpp"
#include "wpcn/oracle.hpp"
#include "wpcn/sum_solvers.hpp"

using namespace wpcn;

TEST(Oracle, RefinementIsMonotone) {
  std::mt19937_64 rng(31);
  const NetworkInstance net = fixtures::random_instance(rng, 2);
  const SolveReport o = grid_best({Problem::P1, Objective::Sum}, net);
  for (std::size_t i = 1; i < o.objective_trace.size(); ++i) {
    EXPECT_GE(o.objective_trace[i], o.objective_trace[i - 1]);
  }
  EXPECT_TRUE(validate(net, o.allocation).empty());
  EXPECT_LT(o.residual, 1e-3);
}

TEST(Oracle, NeverBeatsTheSolvers) {
  std::mt19937_64 rng(32);
  for (int k = 0; k < 10; ++k) {
    const NetworkInstance net = fixtures::random_instance(rng, 2);
    for (Problem p : {Problem::P1, Problem::P2}) {
      const SolveReport s = p == Problem::P1 ? solve_p1(net) : solve_p2(net);
      const SolveReport o = grid_best({p, Objective::Sum}, net);
      EXPECT_LE(o.sum_rate, s.sum_rate + 1e-9);
      EXPECT_TRUE(certify(net, Objective::Sum, s, o, 1e-3).pass);
    }
  }
}

TEST(Oracle, AnalyticCase) {
  const std::vector<double> alpha{1.0}, hr{1.0}, eb{0.0};
  const NetworkInstance net = NetworkInstance::from_coefficients(alpha, hr, eb, std::nullopt);
  const SolveReport o = grid_best({Problem::P3, Objective::Sum}, net);
  EXPECT_NEAR(o.sum_rate, 0.530738, 1e-5);
}

TEST(Oracle, CertifyRejectsBadReports) {
  std::mt19937_64 rng(33);
  const NetworkInstance net = fixtures::random_instance(rng, 2);
  const SolveReport o = grid_best({Problem::P1, Objective::Sum}, net);
  SolveReport weak = solve_p2(net);
  weak.sum_rate *= 0.5;
  EXPECT_FALSE(certify(net, Objective::Sum, weak, o, 1e-3).pass);
  SolveReport infeasible = solve_p1(net);
  infeasible.allocation.tau0 += 0.5;
  const Certificate c = certify(net, Objective::Sum, infeasible, o, 1e-3);
  EXPECT_FALSE(c.pass);
  EXPECT_FALSE(c.violations.empty());
}

TEST(Oracle, Limits) {
  std::mt19937_64 rng(34);
  const NetworkInstance big = fixtures::random_instance(rng, 4);
  EXPECT_THROW(grid_best({Problem::P1, Objective::Sum}, big), DimensionError);
  EXPECT_THROW(grid_best({Problem::P4, Objective::Sum}, fixtures::random_instance(rng, 2)), DomainError);
  GridSpec bad;
  bad.points_per_dim = 1;
  EXPECT_THROW(bad.check(), DomainError);
}
