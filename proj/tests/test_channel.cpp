#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "wpcn/channel.hpp"
#include "wpcn/error.hpp"

using namespace wpcn;

namespace {

// Kolmogorov-Smirnov distance between a sample and Exp(1).
double ks_exponential(std::vector<double> x) {
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double cdf = 1.0 - std::exp(-x[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - cdf, cdf - static_cast<double>(i) / n});
  }
  return d;
}

}  // namespace

TEST(Channel, FadingIsUnitExponential) {
  ChannelModel m;
  m.pathloss_const = 1.0;
  const std::vector<double> d{1.0, 1.0};
  std::vector<double> down, up;
  for (const auto& r : batch(m, d, 2024, 40000)) {
    down.insert(down.end(), r.h.begin(), r.h.end());
    up.insert(up.end(), r.g.begin(), r.g.end());
  }
  EXPECT_LT(ks_exponential(down), 0.01);
  EXPECT_LT(ks_exponential(up), 0.01);
  double mean = 0.0;
  for (double v : down) mean += v;
  EXPECT_NEAR(mean / static_cast<double>(down.size()), 1.0, 0.02);
}

TEST(Channel, PathlossScaling) {
  ChannelModel m;
  m.pinned_fading = 1.0;
  m.beta = 3.0;
  const std::vector<double> d{5.0, 10.0};
  const ChannelRealization r = sample(m, d, 1, 0);
  EXPECT_DOUBLE_EQ(r.h[0], 1e-3 * std::pow(5.0, -3.0));
  EXPECT_DOUBLE_EQ(r.g[1], 1e-3 * std::pow(10.0, -3.0));
}

TEST(Channel, ReproducibleAndIndependentOfOrder) {
  ChannelModel m;
  const std::vector<double> d{3.0, 7.0};
  const auto all = batch(m, d, 99, 10);
  const ChannelRealization seventh = sample(m, d, 99, 7);
  EXPECT_EQ(all[7].h, seventh.h);
  EXPECT_EQ(all[7].g, seventh.g);
  EXPECT_NE(sample(m, d, 100, 7).h, seventh.h);
  EXPECT_NE(all[6].h, all[7].h);
  EXPECT_NE(derive_stream_seed(1, 2), derive_stream_seed(2, 1));
}

TEST(Channel, ReciprocityFlag) {
  ChannelModel m;
  const std::vector<double> d{4.0};
  m.reciprocal = true;
  const auto r = sample(m, d, 5, 0);
  EXPECT_EQ(r.h, r.g);
  m.reciprocal = false;
  const auto s = sample(m, d, 5, 0);
  EXPECT_NE(s.h, s.g);
}

TEST(Channel, RejectsBadModels) {
  ChannelModel m;
  m.beta = 1.0;
  const std::vector<double> d{1.0};
  EXPECT_THROW(sample(m, d, 0, 0), DomainError);
  ChannelModel ok;
  const std::vector<double> bad{0.0};
  EXPECT_THROW(sample(ok, bad, 0, 0), DomainError);
  EXPECT_THROW(batch(ok, d, 0, 0), DomainError);
}
