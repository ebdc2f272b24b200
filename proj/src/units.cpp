#include "wpcn/units.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "wpcn/error.hpp"

namespace wpcn {

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double watts_to_dbm(double watts) {
  if (!(watts > 0.0)) throw DomainError("watts_to_dbm: power must be positive");
  return 10.0 * std::log10(watts) + 30.0;
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double noise_power(double psd_dbm_per_hz, double bandwidth_hz) {
  if (!(bandwidth_hz > 0.0)) throw DomainError("noise_power: bandwidth must be positive");
  return dbm_to_watts(psd_dbm_per_hz + 10.0 * std::log10(bandwidth_hz));
}

double rate_unchecked(double energy, double time, double alpha) noexcept {
  if (time <= 0.0) return 0.0;
  const double snr_energy = alpha * energy;
  if (snr_energy <= 0.0) return 0.0;
  if (time < kRateLimitBranch) {
    // alpha*E/time can overflow here; split the logarithm instead.
    return time * (std::log2(time + snr_energy) - std::log2(time));
  }
  return time * std::log1p(snr_energy / time) / std::numbers::ln2;
}

double rate(double energy, double time, double alpha) {
  if (!std::isfinite(energy) || !std::isfinite(time) || !std::isfinite(alpha)) {
    throw DomainError("rate: non-finite argument");
  }
  if (energy < 0.0) throw DomainError("rate: negative energy " + std::to_string(energy));
  if (time < 0.0 || time > 1.0 + 1e-9) {
    throw DomainError("rate: time fraction outside [0, 1]: " + std::to_string(time));
  }
  if (alpha < 0.0) throw DomainError("rate: negative link coefficient");
  return rate_unchecked(energy, time, alpha);
}

Fairness jain_index(std::span<const double> rates) {
  if (rates.empty()) throw DomainError("jain_index: empty rate vector");
  double sum = 0.0;
  double sum_sq = 0.0;
  for (double r : rates) {
    if (r < 0.0 || !std::isfinite(r)) throw DomainError("jain_index: rates must be finite and >= 0");
    sum += r;
    sum_sq += r * r;
  }
  if (sum_sq == 0.0) return {1.0, true};
  const double k = static_cast<double>(rates.size());
  // Rounding can push equal rates a hair above 1.
  return {std::clamp(sum * sum / (k * sum_sq), 1.0 / k, 1.0), false};
}

}  // namespace wpcn
