#pragma once

// Max-min throughput. At a fixed harvesting time tau0 the largest common
// rate t is either time-limited (every user spends its whole cap) or
// energy-limited (least total energy to give everyone rate t equals E_max);
// the outer problem is a concave line search over tau0.

#include <optional>
#include <span>
#include <vector>

#include "wpcn/model.hpp"
#include "wpcn/problem.hpp"

namespace wpcn {

struct MaxminConfig {
  /// Relative tolerance on the common rate.
  double t_tol = 1e-9;
  /// Relative tolerance of the inner root searches.
  double inner_tol = 1e-12;
  /// Probe count of the line search over tau0.
  int tau0_grid = 64;
  /// Width at which the tau0 line search stops.
  double tau0_tol = 1e-9;

  void check() const;
};

struct MinEnergy {
  bool feasible = false;
  double total = 0.0;
  std::vector<double> tau;
  std::vector<double> energy;
};

/// Energy to reach rate t with coefficient alpha in time tau: (tau/alpha)(2^(t/tau) - 1).
double energy_for_rate(double t, double tau, double alpha);

/// Least total energy that gives every user rate t within `uplink_time`,
/// with E_i <= caps_i. Infeasible when the caps cannot be met in time.
MinEnergy min_energy_for_rate(std::span<const double> alpha, std::span<const double> caps, double uplink_time,
                              double t, const MaxminConfig& cfg = {});

/// Same for a network at harvesting time tau0; also infeasible when the
/// minimum exceeds E_max.
MinEnergy min_energy_for_rate(const NetworkInstance& net, double t, double tau0, const MaxminConfig& cfg = {});

struct CommonRate {
  double rate = 0.0;
  std::vector<double> tau;
  std::vector<double> energy;
  bool energy_limited = false;
};

/// Largest t such that every user reaches rate t with sum tau <= uplink_time,
/// E_i <= caps_i and sum E <= budget. Every returned rate equals t.
CommonRate max_common_rate(std::span<const double> alpha, std::span<const double> caps, double uplink_time,
                           std::optional<double> budget, const MaxminConfig& cfg = {});

SolveReport solve_p1_maxmin(const NetworkInstance& net, const MaxminConfig& cfg = {});
SolveReport solve_p2_maxmin(const NetworkInstance& net, const MaxminConfig& cfg = {});
/// Requires E^b = 0 and no E_max.
SolveReport solve_p3_maxmin(const NetworkInstance& net, const MaxminConfig& cfg = {});
SolveReport solve_p4_maxmin(const HeteroInstance& net, const MaxminConfig& cfg = {});

/// Dispatches P2/P3 on `net`, or P4 after splitting `net` by `types`.
SolveReport solve_special_maxmin(Problem variant, const NetworkInstance& net, const MaxminConfig& cfg = {},
                                 std::span<const NodeType> types = {});

}  // namespace wpcn
