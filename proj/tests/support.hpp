#pragma once

// Seeded random instances shared by the unit and acceptance tests.

#include <cstdint>
#include <random>

#include "wpcn/channel.hpp"
#include "wpcn/model.hpp"
#include "wpcn/units.hpp"

namespace wpcn::fixtures {

struct PhysicalDefaults {
  double p_b_dbm = 30.0;
  double sigma2_dbm_hz = -160.0;
  double bandwidth_hz = 1e6;
  double gamma_db = 9.8;
};

/// K-user network with beta in [2,4], d in [2,15] m, E^b in [0,1e-6] J,
/// E_max in [1e-8,5e-6] J and Rayleigh fading on both links.
inline NetworkInstance random_instance(std::mt19937_64& rng, std::size_t users = 2, PhysicalDefaults p = {}) {
  std::uniform_real_distribution<double> beta(2.0, 4.0), dist(2.0, 15.0), budget(0.0, 1e-6);
  std::uniform_real_distribution<double> log_emax(std::log(1e-8), std::log(5e-6));
  std::exponential_distribution<double> fade(1.0);
  const double b = beta(rng);
  std::vector<UserParams> u;
  ChannelRealization ch;
  for (std::size_t i = 0; i < users; ++i) {
    const double d = dist(rng);
    u.push_back({0.5, budget(rng), d});
    ch.h.push_back(1e-3 * fade(rng) * std::pow(d, -b));
    ch.g.push_back(1e-3 * fade(rng) * std::pow(d, -b));
  }
  const double e_max = std::exp(log_emax(rng));
  return NetworkInstance(u, ch, dbm_to_watts(p.p_b_dbm), db_to_linear(p.gamma_db),
                         noise_power(p.sigma2_dbm_hz, p.bandwidth_hz), e_max);
}

}  // namespace wpcn::fixtures
