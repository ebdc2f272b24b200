#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <numbers>

#include "wpcn/error.hpp"
#include "wpcn/experiments.hpp"
#include "wpcn/parallel.hpp"
#include "wpcn/sum_solvers.hpp"

using namespace wpcn;

namespace {

ExperimentSpec small_spec() {
  ExperimentSpec s;
  s.base.p_b_dbm = 30.0;
  s.base.users = {UserParams{0.5, 3e-7, 10.0}, UserParams{0.5, 3e-7, 5.0}};
  s.base.types = {NodeType::Harvest, NodeType::Legacy};
  s.swept_param = SweepParam::Beta;
  s.values = {2.0, 3.0};
  s.realizations = 12;
  s.seed = 5;
  s.problems = {{Problem::P1, Objective::Sum}, {Problem::P2, Objective::Sum}, {Problem::P4, Objective::Maxmin}};
  return s;
}

bool same_rows(const SweepResult& a, const SweepResult& b) {
  if (a.rows.size() != b.rows.size()) return false;
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    const SweepRow &x = a.rows[i], &y = b.rows[i];
    if (x.mean_sum_rate != y.mean_sum_rate || x.mean_min_rate != y.mean_min_rate || x.mean_jfi != y.mean_jfi ||
        x.problem != y.problem || x.failures != y.failures) {
      return false;
    }
  }
  return true;
}

}  // namespace

TEST(Experiments, MatchedEnergySingleUser) {
  const std::vector<double> alpha{2.0}, hr{0.5}, eb{0.0};
  const NetworkInstance net = NetworkInstance::from_coefficients(alpha, hr, eb, std::nullopt);
  const double e = std::numbers::e;
  EXPECT_NEAR(matched_emax({net}), 0.5 * (e - 1.0) / e, 1e-10);
  EXPECT_THROW(matched_emax({}), DomainError);
}

TEST(Experiments, MatchedEnergyZeroChannels) {
  const std::vector<double> alpha{0.0, 0.0}, hr{0.0, 0.0}, eb{0.0, 0.0};
  const NetworkInstance net = NetworkInstance::from_coefficients(alpha, hr, eb, std::nullopt);
  EXPECT_EQ(matched_emax({net}), 0.0);
}

TEST(Experiments, SingleRealizationEqualsSolveReport) {
  ExperimentSpec s = small_spec();
  s.base.e_max_mode = EmaxMode::None;
  s.base.users[0].e_budget = s.base.users[1].e_budget = 0.0;
  s.values = {2.5};
  s.realizations = 1;
  s.problems = {{Problem::P3, Objective::Sum}};
  const SweepResult r = run_sweep(s);
  ASSERT_EQ(r.rows.size(), 1u);
  Scenario sc = s.base;
  apply(sc, SweepParam::Beta, 2.5);
  const std::vector<double> d{10.0, 5.0};
  const NetworkInstance net = build_instance(sc, sample(sc.channel, d, s.seed, 0), std::nullopt);
  const SolveReport rep = solve_p3(net);
  EXPECT_DOUBLE_EQ(r.rows[0].mean_sum_rate, rep.sum_rate);
  EXPECT_DOUBLE_EQ(r.rows[0].mean_min_rate, rep.min_rate);
  EXPECT_NEAR(r.rows[0].mean_jfi, rep.jfi, 1e-15);
  EXPECT_EQ(r.rows[0].realizations, 1u);
}

TEST(Experiments, DeterministicAcrossRunsAndThreads) {
  const ExperimentSpec s = small_spec();
  ::setenv("WPCN_THREADS", "1", 1);
  const SweepResult a = run_sweep(s);
  ::setenv("WPCN_THREADS", "4", 1);
  const SweepResult b = run_sweep(s);
  const SweepResult c = run_sweep(s);
  ::unsetenv("WPCN_THREADS");
  EXPECT_TRUE(same_rows(a, b));
  EXPECT_TRUE(same_rows(b, c));
  ASSERT_FALSE(a.matched.empty());
  EXPECT_GT(a.matched.front().e_max, 0.0);
  EXPECT_EQ(a.rows.size(), 2u * 3u);
}

TEST(Experiments, MatchedDominancePerRealization) {
  const SweepResult r = run_sweep(small_spec());
  for (std::size_t i = 0; i < r.rows.size(); i += 3) {
    const auto& p1 = r.per_realization[i];
    const auto& p2 = r.per_realization[i + 1];
    for (std::size_t k = 0; k < p1.size(); ++k) EXPECT_GE(p1[k], p2[k] - 1e-9);
  }
}

TEST(Experiments, FailuresAreCounted) {
  ExperimentSpec s = small_spec();
  s.base.e_max_mode = EmaxMode::None;  // P4 needs an energy cap
  s.problems = {{Problem::P4, Objective::Sum}, {Problem::P1, Objective::Sum}};
  const SweepResult r = run_sweep(s);
  EXPECT_EQ(r.rows[0].failures, s.realizations);
  EXPECT_EQ(r.rows[0].realizations, 0u);
  EXPECT_EQ(r.rows[1].failures, 0u);
}

TEST(Experiments, SpecValidation) {
  ExperimentSpec s = small_spec();
  s.values.clear();
  EXPECT_THROW(run_sweep(s), DomainError);
  s = small_spec();
  s.realizations = 0;
  EXPECT_THROW(run_sweep(s), DomainError);
}

TEST(Experiments, MixAssignsTrailingLegacyNodes) {
  Scenario sc;
  sc.users.assign(4, UserParams{});
  apply(sc, SweepParam::Mix, 3.0);
  EXPECT_EQ(sc.types[0], NodeType::Harvest);
  EXPECT_EQ(sc.types[1], NodeType::Legacy);
  EXPECT_EQ(sc.types[3], NodeType::Legacy);
  EXPECT_THROW(apply(sc, SweepParam::Mix, 1.5), DomainError);
  EXPECT_THROW(apply(sc, SweepParam::Mix, 5.0), DomainError);
  apply(sc, SweepParam::D1, 7.0);
  EXPECT_EQ(sc.users[0].distance, 7.0);
  apply(sc, SweepParam::EBudget, 2e-7);
  EXPECT_EQ(sc.users[2].e_budget, 2e-7);
}

TEST(Experiments, Presets) {
  const ExperimentSpec f4 = figure_preset("fig4");
  EXPECT_EQ(f4.base.e_max_mode, EmaxMode::Fixed);
  EXPECT_DOUBLE_EQ(f4.base.e_max, 1e-6);
  EXPECT_DOUBLE_EQ(f4.base.p_b_dbm, 20.0);
  EXPECT_DOUBLE_EQ(f4.base.users[0].e_budget, 1e-7);
  EXPECT_DOUBLE_EQ(f4.base.users[0].distance, 5.0);
  EXPECT_DOUBLE_EQ(f4.base.users[1].distance, 10.0);

  const ExperimentSpec f5 = figure_preset("fig5");
  ASSERT_TRUE(f5.series.has_value());
  EXPECT_EQ(f5.series->values, (std::vector<double>{3e-7, 7e-7, 5e-6}));
  EXPECT_EQ(f5.values, (std::vector<double>{2.0, 2.5, 3.0, 3.5, 4.0}));

  const ExperimentSpec f9 = figure_preset("fig9_mix");
  ASSERT_EQ(f9.base.users.size(), 6u);
  EXPECT_DOUBLE_EQ(f9.base.users[3].distance, 10.0 / 6.0);
  EXPECT_EQ(f9.values.size(), 7u);

  for (const auto& name : figure_names()) EXPECT_NO_THROW(figure_preset(name).check());
  EXPECT_THROW(figure_preset("fig99"), DomainError);
}

TEST(Experiments, RegimeSweepDetail) {
  ExperimentSpec s = figure_preset("fig3");
  s.values = {0.5, 1.2, 3.0};
  s.series->values = {2.0};
  const SweepResult r = run_sweep(s);
  ASSERT_TRUE(r.detail.has_value());
  ASSERT_EQ(r.detail->rows.size(), 3u);
  EXPECT_EQ(r.detail->rows[0][4], 0.0);  // tau_legacy below the lower threshold
  EXPECT_EQ(r.detail->rows[2][2], 0.0);  // tau0 above the upper threshold
}

TEST(Parallel, CoversEveryIndexAndRethrows) {
  std::vector<int> hit(100, 0);
  parallel_for(hit.size(), [&](std::size_t i) { hit[i] += 1; }, 4);
  for (int h : hit) EXPECT_EQ(h, 1);
  EXPECT_THROW(parallel_for(10, [](std::size_t i) { if (i == 3) throw DomainError("x"); }, 3), DomainError);
  parallel_for(0, [](std::size_t) { FAIL(); });
}
