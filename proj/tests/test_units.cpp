#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "wpcn/error.hpp"
#include "wpcn/units.hpp"

using namespace wpcn;

TEST(Units, PowerConversions) {
  EXPECT_DOUBLE_EQ(dbm_to_watts(30.0), 1.0);
  EXPECT_NEAR(dbm_to_watts(0.0), 1e-3, 1e-18);
  EXPECT_NEAR(watts_to_dbm(dbm_to_watts(17.3)), 17.3, 1e-12);
  EXPECT_NEAR(db_to_linear(9.8), 9.549925860214358, 1e-12);
  EXPECT_NEAR(noise_power(-160.0, 1e6), 1e-13, 1e-25);
}

TEST(Units, RateValues) {
  EXPECT_EQ(rate(1.0, 0.0, 1.0), 0.0);
  EXPECT_DOUBLE_EQ(rate(1.0, 1.0, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(rate(0.0, 0.5, 3.0), 0.0);
  EXPECT_NEAR(rate(3.0, 0.5, 0.5), 0.5 * std::log2(4.0), 1e-15);
  EXPECT_DOUBLE_EQ(rate(1e-3, 0.4, 7.0), rate_unchecked(1e-3, 0.4, 7.0));
  EXPECT_EQ(throughput_bps(2.0, 1e6), 2e6);
}

TEST(Units, RateRejectsBadArguments) {
  EXPECT_THROW(rate(-1.0, 0.5, 1.0), DomainError);
  EXPECT_THROW(rate(1.0, -0.1, 1.0), DomainError);
  EXPECT_THROW(rate(1.0, 1.5, 1.0), DomainError);
  EXPECT_THROW(rate(NAN, 0.5, 1.0), DomainError);
}

TEST(Units, TinySlotsApproachTheLimitContinuously) {
  const double alpha = 1e9, e = 1e-9;
  EXPECT_GE(rate(e, 1e-13, alpha), 0.0);
  EXPECT_LT(rate(e, 1e-13, alpha), rate(e, 1e-6, alpha));
}

// Concavity of the perspective tau log2(1 + alpha E / tau) on random pairs.
TEST(Units, RateIsJointlyConcave) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 2000; ++k) {
    const double alpha = std::pow(10.0, 8.0 * u(rng) - 2.0);
    const double e1 = 1e-6 * u(rng), e2 = 1e-6 * u(rng);
    const double t1 = u(rng), t2 = u(rng);
    const double lam = u(rng);
    const double mid = rate(lam * e1 + (1 - lam) * e2, lam * t1 + (1 - lam) * t2, alpha);
    const double chord = lam * rate(e1, t1, alpha) + (1 - lam) * rate(e2, t2, alpha);
    EXPECT_GE(mid, chord - 1e-12 * std::max(1.0, std::abs(chord)));
  }
}

TEST(Units, RateIsMonotone) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 1000; ++k) {
    const double alpha = std::pow(10.0, 6.0 * u(rng));
    const double e = u(rng), t = 0.5 * u(rng);
    EXPECT_LE(rate(e, t, alpha), rate(e * 1.1, t, alpha));
    EXPECT_LE(rate(e, t, alpha), rate(e, t * 1.5, alpha));
  }
}

TEST(Units, JainIndex) {
  const std::vector<double> equal{2.0, 2.0, 2.0};
  EXPECT_DOUBLE_EQ(jain_index(equal).index, 1.0);
  const std::vector<double> one{0.0, 5.0};
  EXPECT_DOUBLE_EQ(jain_index(one).index, 0.5);
  const std::vector<double> zero{0.0, 0.0};
  EXPECT_TRUE(jain_index(zero).degenerate);
  EXPECT_EQ(jain_index(zero).index, 1.0);
  const std::vector<double> empty;
  EXPECT_THROW(jain_index(empty), DomainError);
  const std::vector<double> negative{1.0, -1.0};
  EXPECT_THROW(jain_index(negative), DomainError);
  const std::vector<double> mixed{1.0, 3.0};
  EXPECT_NEAR(jain_index(mixed).index, 16.0 / 20.0, 1e-15);
}
