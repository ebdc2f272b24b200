#pragma once

// Sum-throughput solvers. P1 alternates the closed-form time step and the
// water-filling energy step; P2 pins tau0 = 0; P3 and P4 are closed forms
// built on solve_f_equals.

#include <optional>
#include <span>
#include <vector>

#include "wpcn/model.hpp"

namespace wpcn {

struct AlternatingConfig {
  int max_iters = 10000;
  /// Relative change threshold, infinity norm over tau and E.
  double step_tol = 1e-9;
  /// Relative objective-change threshold.
  double objective_tol = 1e-12;
  /// Probe count of the line search over tau0 (P1 only).
  int tau0_probes = 64;
  /// Width at which the tau0 line search stops.
  double tau0_tol = 1e-10;

  void check() const;
};

struct TimeSplit {
  double tau0 = 0.0;
  std::vector<double> tau;
  /// True when every alpha_i E_i is zero and the uplink time was split evenly.
  bool degenerate = false;
};

/// Optimal times for fixed energies: tau0 covers the largest energy deficit,
/// the rest is shared in proportion to alpha_i E_i.
TimeSplit time_step(const NetworkInstance& net, std::span<const double> energy);

/// Splits `uplink_time` in proportion to alpha_i E_i (evenly if all are zero).
std::vector<double> split_uplink_time(std::span<const double> alpha, std::span<const double> energy,
                                      double uplink_time);

struct WaterFill {
  std::vector<double> energy;
  /// Water level nu; +inf when every active user sits at its cap.
  double level = 0.0;
  bool budget_binding = false;
};

/// E_i = min((tau_i (nu - 1/alpha_i))^+, cap_i) with nu chosen so the total
/// equals min(budget, sum of caps of users with tau_i > 0). The level is
/// located exactly on the piecewise-linear total.
WaterFill water_fill(std::span<const double> tau, std::span<const double> alpha,
                     std::span<const double> caps, std::optional<double> budget);

/// Optimal energies for fixed times (caps at tau0, system cap E_max).
std::vector<double> energy_step(const NetworkInstance& net, double tau0, std::span<const double> tau);

/// Best sum rate at a fixed harvesting time, from the greedy closed form
/// (max sum alpha_i E_i, then (1 - tau0) log2(1 + W / (1 - tau0))). Used as
/// an independent check on the alternating iterations.
double fixed_tau0_optimum(const NetworkInstance& net, double tau0);

/// Algorithm-1 alternation with tau0 held fixed (time shares, then energies).
SolveReport solve_fixed_tau0(const NetworkInstance& net, double tau0, const AlternatingConfig& cfg = {},
                             std::optional<std::vector<double>> init = std::nullopt);

/// Generalized problem: concave line search over tau0 wrapped around the
/// alternating time/energy steps. `iterations` and `objective_trace` describe
/// the alternation at the returned tau0.
SolveReport solve_p1(const NetworkInstance& net, const AlternatingConfig& cfg = {},
                     std::optional<std::vector<double>> init = std::nullopt);

/// Conventional TDMA: no harvesting (tau0 = 0), energy caps E^b_i.
SolveReport solve_p2(const NetworkInstance& net, const AlternatingConfig& cfg = {});

/// Harvest-only closed form. Requires E^b = 0 and no E_max.
SolveReport solve_p3(const NetworkInstance& net);

enum class P4Regime { HarvesterOnly, Shared, LegacyOnly };

struct P4Thresholds {
  /// E_max at or below which only harvesters transmit.
  double lower = 0.0;
  /// E_max above which only legacy nodes transmit.
  double upper = 0.0;
  /// x1* - 1 with f(x1*) = A1 - (a/N) A2 (0 when harvesters are not competitive).
  double x1_excess = 0.0;
  /// A1 >= (a/N) A2.
  bool harvesters_competitive = false;
};

P4Thresholds p4_thresholds(const HeteroInstance& net);
P4Regime p4_regime(const HeteroInstance& net);

/// Closed-form optimum for harvest-only + legacy nodes sharing E_max.
SolveReport solve_p4(const HeteroInstance& net);

}  // namespace wpcn
