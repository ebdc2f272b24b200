#pragma once

// Brute-force reference optimizer for small networks (K <= 3). A grid over
// the unit cube is mapped onto feasible allocations (time fractions of the
// remaining slot, energy fractions of the remaining cap/budget with the last
// user taking what is left), then recentered and shrunk around the best
// point each round.

#include <vector>

#include "wpcn/model.hpp"
#include "wpcn/problem.hpp"

namespace wpcn {

inline constexpr std::size_t kOracleMaxUsers = 3;

struct GridSpec {
  int points_per_dim = 21;
  int refine_rounds = 14;
  double shrink_factor = 0.6;

  void check() const;
};

/// Best grid allocation. `residual` holds the final grid spacing as a
/// fraction of the unit range; `objective_trace` the incumbent per round.
/// P3 requires E^b = 0 and no E_max.
SolveReport grid_best(ProblemKind kind, const NetworkInstance& net, const GridSpec& spec = {});
SolveReport grid_best(Objective objective, const HeteroInstance& net, const GridSpec& spec = {});

/// Sum rate or minimum rate of a report.
double objective_value(const SolveReport& report, Objective objective);

struct Certificate {
  bool pass = false;
  /// solver objective - (oracle objective - rel_tol * max(1, |oracle|)).
  double margin = 0.0;
  std::vector<Violation> violations;
};

Certificate certify(const NetworkInstance& net, Objective objective, const SolveReport& solver,
                    const SolveReport& oracle, double rel_tol);
Certificate certify(const HeteroInstance& net, Objective objective, const SolveReport& solver,
                    const SolveReport& oracle, double rel_tol);

}  // namespace wpcn
