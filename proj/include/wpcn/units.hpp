#pragma once

// Unit conversions, the uplink rate function and throughput metrics.
// Rates are spectral efficiencies in bits/s/Hz; multiply by the bandwidth
// to get bits/s.

#include <span>

namespace wpcn {

double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);
double db_to_linear(double db);

/// Noise power in watts for a PSD given in dBm/Hz over `bandwidth_hz`.
double noise_power(double psd_dbm_per_hz, double bandwidth_hz);

/// Slots shorter than this use the limit form of the rate function.
inline constexpr double kRateLimitBranch = 1e-12;

/// Achievable uplink rate time * log2(1 + alpha * energy / time).
/// Returns exactly 0 at time == 0 (continuous extension).
/// Throws DomainError for negative or non-finite inputs or time > 1.
double rate(double energy, double time, double alpha);

/// Same value as rate() without argument checks, for solver inner loops.
double rate_unchecked(double energy, double time, double alpha) noexcept;

inline double throughput_bps(double rate_bps_hz, double bandwidth_hz) {
  return rate_bps_hz * bandwidth_hz;
}

struct Fairness {
  double index = 1.0;
  /// Set when every rate is zero; index is then reported as 1.
  bool degenerate = false;
};

/// Jain's fairness index (sum R)^2 / (K sum R^2).
Fairness jain_index(std::span<const double> rates);

}  // namespace wpcn
