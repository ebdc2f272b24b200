#include "wpcn/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "wpcn/error.hpp"
#include "wpcn/units.hpp"

namespace wpcn {

void GridSpec::check() const {
  if (points_per_dim < 3) throw DomainError("GridSpec: points_per_dim must be >= 3");
  if (refine_rounds < 1) throw DomainError("GridSpec: refine_rounds must be >= 1");
  if (!(shrink_factor > 0.0 && shrink_factor < 1.0)) throw DomainError("GridSpec: shrink_factor must lie in (0,1)");
}

namespace {

struct GridOutcome {
  std::vector<double> best_x;
  double best_value = -std::numeric_limits<double>::infinity();
  std::vector<double> trace;
  double spacing = 0.0;
};

// `eval(x)` scores a point of [0,1]^dims. Each round scans a regular grid
// around the incumbent, then the window shrinks.
template <class Eval>
GridOutcome refine_grid(std::size_t dims, const GridSpec& spec, Eval&& eval) {
  GridOutcome out;
  std::vector<double> center(dims, 0.5);
  double half = 0.5;
  const int n = spec.points_per_dim;
  out.best_x = center;
  std::vector<double> x(dims);
  std::vector<int> idx(dims);
  for (int round = 0; round <= spec.refine_rounds; ++round) {
    std::fill(idx.begin(), idx.end(), 0);
    const double step = 2.0 * half / (n - 1);
    while (true) {
      for (std::size_t d = 0; d < dims; ++d) x[d] = std::clamp(center[d] - half + step * idx[d], 0.0, 1.0);
      const double v = eval(x);
      if (v > out.best_value) {
        out.best_value = v;
        out.best_x = x;
      }
      std::size_t d = 0;
      while (d < dims && ++idx[d] == n) idx[d++] = 0;
      if (d == dims) break;
    }
    out.trace.push_back(out.best_value);
    out.spacing = step;
    center = out.best_x;
    half *= spec.shrink_factor;
    if (dims == 0) break;
  }
  return out;
}

double score(std::span<const double> rates, Objective objective) {
  if (objective == Objective::Sum) {
    double s = 0.0;
    for (double r : rates) s += r;
    return s;
  }
  double m = std::numeric_limits<double>::infinity();
  for (double r : rates) m = std::min(m, r);
  return m;
}

// Fills tau[0..k-1] from tau0 and k-1 fractions of the remaining time.
void decode_times(double tau0, const double* frac, std::size_t k, std::vector<double>& tau) {
  double left = std::max(0.0, 1.0 - tau0);
  for (std::size_t i = 0; i + 1 < k; ++i) {
    tau[i] = frac[i] * left;
    left = std::max(0.0, left - tau[i]);
  }
  tau[k - 1] = left;
}

void check_size(std::size_t k) {
  if (k == 0 || k > kOracleMaxUsers) {
    throw DimensionError("grid oracle supports 1.." + std::to_string(kOracleMaxUsers) + " users, got " +
                         std::to_string(k));
  }
}

}  // namespace

SolveReport grid_best(ProblemKind kind, const NetworkInstance& net, const GridSpec& spec) {
  spec.check();
  const std::size_t k = net.size();
  check_size(k);
  if (kind.problem == Problem::P4) {
    throw DomainError("grid_best: P4 needs a heterogeneous instance");
  }
  if (kind.problem == Problem::P3) {
    for (std::size_t i = 0; i < k; ++i) {
      if (net.e_budget(i) != 0.0) throw DomainError("grid_best: P3 requires zero supply energy");
    }
    if (net.e_max()) throw DomainError("grid_best: P3 requires no system energy cap");
  }
  const bool has_tau0 = kind.problem != Problem::P2;
  const bool free_energy = kind.problem != Problem::P3;
  const std::size_t dims = (has_tau0 ? 1 : 0) + (k - 1) + (free_energy ? k - 1 : 0);
  const double budget = net.e_max().value_or(std::numeric_limits<double>::infinity());

  Allocation alloc = Allocation::zeros(k);
  std::vector<double> rates(k);
  auto decode = [&](const std::vector<double>& x) {
    std::size_t d = 0;
    alloc.tau0 = has_tau0 ? x[d++] : 0.0;
    decode_times(alloc.tau0, x.data() + d, k, alloc.tau);
    d += k - 1;
    double left = budget;
    for (std::size_t i = 0; i < k; ++i) {
      const double room = std::max(0.0, std::min(net.energy_cap(i, alloc.tau0), left));
      double e = room;
      if (free_energy && i + 1 < k) e = x[d++] * room;
      alloc.energy[i] = e;
      left -= e;
    }
  };
  auto eval = [&](const std::vector<double>& x) {
    decode(x);
    for (std::size_t i = 0; i < k; ++i) rates[i] = rate_unchecked(alloc.energy[i], alloc.tau[i], net.alpha(i));
    return score(rates, kind.objective);
  };
  const GridOutcome g = refine_grid(dims, spec, eval);
  decode(g.best_x);
  SolveReport rep = report_from_allocation(net, alloc);
  rep.residual = g.spacing;
  rep.objective_trace = g.trace;
  rep.iterations = g.trace.size();
  return rep;
}

SolveReport grid_best(Objective objective, const HeteroInstance& net, const GridSpec& spec) {
  spec.check();
  const std::size_t m = net.harvesters();
  const std::size_t n = net.legacy();
  const std::size_t k = m + n;
  check_size(k);
  double tau0_max = 0.0;
  if (m > 0 && net.a() > 0.0) tau0_max = std::min(1.0, net.e_max() / net.a());
  const bool has_tau0 = tau0_max > 0.0;
  const std::size_t dims = (has_tau0 ? 1 : 0) + (k - 1);

  Allocation alloc = Allocation::zeros(k);
  std::vector<double> rates(k);
  auto decode = [&](const std::vector<double>& x) {
    alloc.tau0 = has_tau0 ? x[0] * tau0_max : 0.0;
    decode_times(alloc.tau0, x.data() + (has_tau0 ? 1 : 0), k, alloc.tau);
    const double shared = n ? std::max(0.0, net.e_max() - net.a() * alloc.tau0) / static_cast<double>(n) : 0.0;
    alloc.shared_energy = shared;
    for (std::size_t i = 0; i < m; ++i) alloc.energy[i] = net.harvest_rates()[i] * alloc.tau0;
    for (std::size_t j = 0; j < n; ++j) alloc.energy[m + j] = shared;
  };
  auto eval = [&](const std::vector<double>& x) {
    decode(x);
    for (std::size_t i = 0; i < m; ++i) {
      rates[i] = rate_unchecked(alloc.tau0, alloc.tau[i], net.gammas()[i]);
    }
    for (std::size_t j = 0; j < n; ++j) {
      rates[m + j] = rate_unchecked(alloc.energy[m + j], alloc.tau[m + j], net.thetas()[j]);
    }
    return score(rates, objective);
  };
  const GridOutcome g = refine_grid(dims, spec, eval);
  decode(g.best_x);
  SolveReport rep = report_from_allocation(net, alloc);
  rep.residual = g.spacing;
  rep.objective_trace = g.trace;
  rep.iterations = g.trace.size();
  return rep;
}

double objective_value(const SolveReport& report, Objective objective) {
  return objective == Objective::Sum ? report.sum_rate : report.min_rate;
}

namespace {

template <class Instance>
Certificate certify_impl(const Instance& net, Objective objective, const SolveReport& solver,
                         const SolveReport& oracle, double rel_tol) {
  if (!(rel_tol >= 0.0)) throw DomainError("certify: rel_tol must be >= 0");
  if (solver.allocation.tau.size() != net.size() || oracle.allocation.tau.size() != net.size()) {
    throw DimensionError("certify: reports do not match the instance");
  }
  Certificate c;
  const double ref = objective_value(oracle, objective);
  c.margin = objective_value(solver, objective) - (ref - rel_tol * std::max(1.0, std::abs(ref)));
  c.violations = validate(net, solver.allocation);
  c.pass = c.margin >= 0.0 && c.violations.empty();
  return c;
}

}  // namespace

Certificate certify(const NetworkInstance& net, Objective objective, const SolveReport& solver,
                    const SolveReport& oracle, double rel_tol) {
  return certify_impl(net, objective, solver, oracle, rel_tol);
}

Certificate certify(const HeteroInstance& net, Objective objective, const SolveReport& solver,
                    const SolveReport& oracle, double rel_tol) {
  return certify_impl(net, objective, solver, oracle, rel_tol);
}

}  // namespace wpcn
