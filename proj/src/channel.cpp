#include "wpcn/channel.hpp"

#include <cmath>
#include <string>

#include "wpcn/error.hpp"

namespace wpcn {

void ChannelModel::check() const {
  if (!(pathloss_const > 0.0)) throw DomainError("ChannelModel: pathloss constant must be positive");
  if (!(beta >= 2.0 && beta <= 6.0)) {
    throw DomainError("ChannelModel: pathloss exponent must lie in [2, 6], got " + std::to_string(beta));
  }
  if (pinned_fading && !(*pinned_fading >= 0.0)) throw DomainError("ChannelModel: pinned fading must be >= 0");
}

std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer over a golden-ratio combination of the two keys.
  auto mix = [](std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(seed + 0x9e3779b97f4a7c15ULL) ^ (stream * 0x9e3779b97f4a7c15ULL + 0x632be59bd9b4e019ULL));
}

ExponentialStream::ExponentialStream(std::uint64_t state_seed) : engine_(state_seed) {}

double ExponentialStream::next() {
  // 53 random bits mapped onto (0, 1]; mt19937_64 output is fixed by the
  // standard, so draws are identical across platforms.
  const double u = static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
  return -std::log(u);
}

ChannelRealization sample(const ChannelModel& model, std::span<const double> distances,
                          std::uint64_t seed, std::uint64_t realization_index) {
  model.check();
  ExponentialStream stream(derive_stream_seed(seed, realization_index));
  ChannelRealization out;
  out.h.reserve(distances.size());
  out.g.reserve(distances.size());
  for (double d : distances) {
    if (!(d > 0.0)) throw DomainError("sample: distances must be positive");
    const double path = model.pathloss_const * std::pow(d, -model.beta);
    const double down = model.pinned_fading ? *model.pinned_fading : stream.next();
    const double up = model.reciprocal ? down : (model.pinned_fading ? *model.pinned_fading : stream.next());
    out.h.push_back(path * down);
    out.g.push_back(path * up);
  }
  return out;
}

std::vector<ChannelRealization> batch(const ChannelModel& model, std::span<const double> distances,
                                      std::uint64_t seed, std::size_t count) {
  if (count < 1) throw DomainError("batch: count must be >= 1");
  std::vector<ChannelRealization> out;
  out.reserve(count);
  for (std::size_t r = 0; r < count; ++r) out.push_back(sample(model, distances, seed, r));
  return out;
}

}  // namespace wpcn
