#pragma once

// Seeded pathloss + Rayleigh channel generation. Gains follow
// gain = pathloss_const * rho^2 * d^-beta with rho^2 ~ Exp(1).
//
// Every realization owns an independent generator derived from
// (seed, realization_index), so batches are reproducible regardless of the
// order in which realizations are produced.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "wpcn/model.hpp"

namespace wpcn {

struct ChannelModel {
  double pathloss_const = 1e-3;
  double beta = 2.0;
  /// h == g when set; otherwise independent fading per direction (default).
  bool reciprocal = false;
  /// Test hook: replaces every rho^2 draw with this constant.
  std::optional<double> pinned_fading;

  void check() const;
};

/// Splittable hash of (seed, stream) used to seed one realization.
std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t stream);

/// Draws one Exp(1) variate per call by inversion, -ln U with U in (0, 1].
class ExponentialStream {
 public:
  explicit ExponentialStream(std::uint64_t state_seed);
  double next();

 private:
  std::mt19937_64 engine_;
};

ChannelRealization sample(const ChannelModel& model, std::span<const double> distances,
                          std::uint64_t seed, std::uint64_t realization_index);

std::vector<ChannelRealization> batch(const ChannelModel& model, std::span<const double> distances,
                                      std::uint64_t seed, std::size_t count);

}  // namespace wpcn
