#include "wpcn/sum_solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "wpcn/error.hpp"
#include "wpcn/scalar.hpp"
#include "wpcn/units.hpp"

namespace wpcn {

void AlternatingConfig::check() const {
  if (max_iters < 1) throw DomainError("AlternatingConfig: max_iters must be >= 1");
  if (!(step_tol > 0.0) || !(objective_tol > 0.0) || !(tau0_tol > 0.0)) {
    throw DomainError("AlternatingConfig: tolerances must be > 0");
  }
  if (tau0_probes < 2) throw DomainError("AlternatingConfig: tau0_probes must be >= 2");
}

std::vector<double> split_uplink_time(std::span<const double> alpha, std::span<const double> energy,
                                      double uplink_time) {
  if (alpha.size() != energy.size()) throw DimensionError("split_uplink_time: size mismatch");
  const std::size_t k = alpha.size();
  std::vector<double> tau(k, 0.0);
  if (k == 0) return tau;
  double weight = 0.0;
  for (std::size_t i = 0; i < k; ++i) weight += alpha[i] * std::max(energy[i], 0.0);
  if (!(weight > 0.0)) {
    std::fill(tau.begin(), tau.end(), uplink_time / static_cast<double>(k));
    return tau;
  }
  for (std::size_t i = 0; i < k; ++i) tau[i] = uplink_time * (alpha[i] * std::max(energy[i], 0.0) / weight);
  return tau;
}

TimeSplit time_step(const NetworkInstance& net, std::span<const double> energy) {
  const std::size_t k = net.size();
  if (energy.size() != k) throw DimensionError("time_step: energy vector size mismatch");
  double total = 0.0;
  double deficit = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double e = energy[i];
    if (!(e >= 0.0) || !std::isfinite(e)) throw DomainError("time_step: energies must be finite and >= 0");
    const double full_cap = net.energy_cap(i, 1.0);
    if (e > full_cap * (1.0 + 1e-12) + kEnergyTolerance) {
      throw DomainError("time_step: energy of user " + std::to_string(i) + " exceeds what one slot can supply");
    }
    total += e;
    const double need = e - net.e_budget(i);
    if (need > 0.0) {
      const double c = net.harvest_rate(i);
      deficit = std::max(deficit, c > 0.0 ? need / c : std::numeric_limits<double>::infinity());
    }
  }
  if (net.e_max() && total > *net.e_max() * (1.0 + 1e-12) + kEnergyTolerance) {
    throw DomainError("time_step: energies exceed the system energy cap");
  }
  TimeSplit out;
  out.tau0 = std::min(deficit, 1.0);
  out.tau = split_uplink_time(net.alphas(), energy, 1.0 - out.tau0);
  double weight = 0.0;
  for (std::size_t i = 0; i < k; ++i) weight += net.alpha(i) * energy[i];
  out.degenerate = !(weight > 0.0);
  return out;
}

WaterFill water_fill(std::span<const double> tau, std::span<const double> alpha, std::span<const double> caps,
                     std::optional<double> budget) {
  const std::size_t k = tau.size();
  if (alpha.size() != k || caps.size() != k) throw DimensionError("water_fill: size mismatch");
  WaterFill out;
  out.energy.assign(k, 0.0);
  out.level = std::numeric_limits<double>::infinity();

  double scheduled_caps = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    if (tau[i] > 0.0) scheduled_caps += std::max(caps[i], 0.0);
  }
  if (!budget || *budget >= scheduled_caps) {
    for (std::size_t i = 0; i < k; ++i) {
      if (tau[i] > 0.0) out.energy[i] = std::max(caps[i], 0.0);
    }
    return out;
  }

  std::vector<std::size_t> active;
  double active_caps = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    if (tau[i] > 0.0 && alpha[i] > 0.0 && caps[i] > 0.0) {
      active.push_back(i);
      active_caps += caps[i];
    }
  }
  const double target = std::max(*budget, 0.0);
  if (target >= active_caps) {
    for (std::size_t i : active) out.energy[i] = caps[i];
    return out;
  }
  out.budget_binding = true;
  if (target == 0.0) {
    out.level = 0.0;
    return out;
  }

  auto filled = [&](double nu) {
    double s = 0.0;
    for (std::size_t i : active) s += std::clamp(tau[i] * (nu - 1.0 / alpha[i]), 0.0, caps[i]);
    return s;
  };
  // The total is piecewise linear in nu with kinks where a user starts
  // receiving energy (1/alpha) or saturates (1/alpha + cap/tau).
  std::vector<double> kinks;
  kinks.reserve(2 * active.size());
  for (std::size_t i : active) {
    kinks.push_back(1.0 / alpha[i]);
    kinks.push_back(1.0 / alpha[i] + caps[i] / tau[i]);
  }
  std::sort(kinks.begin(), kinks.end());
  std::size_t lo = 0;
  std::size_t hi = kinks.size() - 1;  // filled(kinks[hi]) = active_caps > target
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (filled(kinks[mid]) >= target) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  // No kink lies strictly inside (kinks[lo], kinks[hi]), so the midpoint
  // tells which users are empty, saturated or free on this segment. The
  // free users then share what the saturated ones leave, which keeps the
  // total exact instead of interpolated.
  const double mid = 0.5 * (kinks[lo] + kinks[hi]);
  std::vector<std::size_t> free;
  double rest = target;
  double free_tau = 0.0;
  double free_inv = 0.0;
  for (std::size_t i : active) {
    const double start = 1.0 / alpha[i];
    if (mid >= start + caps[i] / tau[i]) {
      out.energy[i] = caps[i];
      rest -= caps[i];
    } else if (mid > start) {
      free.push_back(i);
      free_tau += tau[i];
      free_inv += tau[i] * start;
    }
  }
  if (free.empty() || !(rest > 0.0)) {
    const double s_lo = filled(kinks[lo]);
    const double s_hi = filled(kinks[hi]);
    double nu = kinks[hi];
    if (s_hi > s_lo) nu = kinks[lo] + (target - s_lo) * (kinks[hi] - kinks[lo]) / (s_hi - s_lo);
    out.level = nu;
    double total = 0.0;
    for (std::size_t i : active) {
      out.energy[i] = std::clamp(tau[i] * (nu - 1.0 / alpha[i]), 0.0, caps[i]);
      total += out.energy[i];
    }
    if (total > target) {
      for (std::size_t i : active) out.energy[i] *= target / total;
    }
    return out;
  }
  const double nu = (rest + free_inv) / free_tau;
  out.level = nu;
  std::size_t largest = free.front();
  for (std::size_t i : free) {
    out.energy[i] = std::clamp(tau[i] * (nu - 1.0 / alpha[i]), 0.0, caps[i]);
    if (out.energy[i] > out.energy[largest]) largest = i;
  }
  double total = 0.0;
  for (std::size_t i = 0; i < k; ++i) total += out.energy[i];
  out.energy[largest] = std::clamp(out.energy[largest] + (target - total), 0.0, caps[largest]);
  return out;
}

namespace {

std::vector<double> caps_at(const NetworkInstance& net, double tau0) {
  std::vector<double> caps(net.size());
  for (std::size_t i = 0; i < net.size(); ++i) caps[i] = net.energy_cap(i, tau0);
  return caps;
}

double sum_rate_of(std::span<const double> alpha, std::span<const double> tau, std::span<const double> energy) {
  double s = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) s += rate_unchecked(energy[i], tau[i], alpha[i]);
  return s;
}

double relative_change(std::span<const double> prev, std::span<const double> next) {
  double diff = 0.0;
  double scale = 0.0;
  for (std::size_t i = 0; i < prev.size(); ++i) {
    diff = std::max(diff, std::abs(next[i] - prev[i]));
    scale = std::max(scale, std::abs(next[i]));
  }
  if (diff == 0.0) return 0.0;
  return scale > 0.0 ? diff / scale : std::numeric_limits<double>::infinity();
}

struct InnerRun {
  double tau0 = 0.0;
  std::vector<double> tau;
  std::vector<double> energy;
  double objective = 0.0;
  std::vector<double> trace;
  std::size_t iterations = 0;
  double residual = 0.0;
  bool converged = true;
  bool degenerate = false;
};

InnerRun alternate(const NetworkInstance& net, double tau0, const AlternatingConfig& cfg,
                   const std::optional<std::vector<double>>& init) {
  const std::size_t k = net.size();
  const auto& alpha = net.alphas();
  const std::vector<double> caps = caps_at(net, tau0);
  const double uplink = std::max(0.0, 1.0 - tau0);
  InnerRun run;
  run.tau0 = tau0;

  // Strictly interior start: half of each cap, scaled under E_max.
  std::vector<double> energy(k, 0.0);
  auto start_from = [&](auto&& pick) {
    double total = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      energy[i] = std::clamp(pick(i), 0.0, caps[i]);
      total += energy[i];
    }
    if (net.e_max() && total > *net.e_max() && total > 0.0) {
      for (double& e : energy) e *= *net.e_max() / total;
    }
  };
  if (init) start_from([&](std::size_t i) { return (*init)[i]; });
  double weight = 0.0;
  for (std::size_t i = 0; i < k; ++i) weight += alpha[i] * energy[i];
  if (!(weight > 0.0)) {
    start_from([&](std::size_t i) { return 0.5 * caps[i]; });
    weight = 0.0;
    for (std::size_t i = 0; i < k; ++i) weight += alpha[i] * energy[i];
  }

  if (!(weight > 0.0) || uplink == 0.0) {
    run.degenerate = !(weight > 0.0);
    run.tau = split_uplink_time(alpha, std::vector<double>(k, 0.0), uplink);
    run.energy = uplink == 0.0 ? std::vector<double>(k, 0.0) : water_fill(run.tau, alpha, caps, net.e_max()).energy;
    run.objective = sum_rate_of(alpha, run.tau, run.energy);
    run.trace.push_back(run.objective);
    return run;
  }

  std::vector<double> tau(k, 0.0);
  double prev_objective = 0.0;
  run.converged = false;
  for (int it = 1; it <= cfg.max_iters; ++it) {
    std::vector<double> next_tau = split_uplink_time(alpha, energy, uplink);
    std::vector<double> next_energy = water_fill(next_tau, alpha, caps, net.e_max()).energy;
    const double objective = sum_rate_of(alpha, next_tau, next_energy);
    const double change = std::max(relative_change(tau, next_tau), relative_change(energy, next_energy));
    tau = std::move(next_tau);
    energy = std::move(next_energy);
    run.trace.push_back(objective);
    run.iterations = static_cast<std::size_t>(it);
    run.residual = change;
    if (it > 1) {
      const double gain = std::abs(objective - prev_objective);
      if (change < cfg.step_tol || gain <= cfg.objective_tol * std::max(std::abs(objective), 1e-300)) {
        run.converged = true;
        prev_objective = objective;
        break;
      }
    }
    prev_objective = objective;
  }
  run.tau = std::move(tau);
  run.energy = std::move(energy);
  run.objective = prev_objective;
  return run;
}

void check_init(const NetworkInstance& net, const std::optional<std::vector<double>>& init) {
  if (!init) return;
  if (init->size() != net.size()) throw DimensionError("initial energy vector size mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i < net.size(); ++i) {
    const double e = (*init)[i];
    if (!(e >= 0.0) || !std::isfinite(e)) throw DomainError("initial energies must be finite and >= 0");
    if (!(e < net.energy_cap(i, 1.0)) && net.energy_cap(i, 1.0) > 0.0) {
      throw DomainError("initial energy of user " + std::to_string(i) + " must stay below E^b + eta P_B h");
    }
    total += e;
  }
  if (net.e_max() && total > *net.e_max() * (1.0 + 1e-12)) {
    throw DomainError("initial energies exceed the system energy cap");
  }
}

SolveReport report_from_run(const NetworkInstance& net, InnerRun run) {
  Allocation alloc{run.tau0, std::move(run.tau), std::move(run.energy), {}};
  SolveReport rep = report_from_allocation(net, alloc);
  rep.iterations = run.iterations;
  rep.residual = run.residual;
  rep.objective_trace = std::move(run.trace);
  rep.converged = run.converged;
  if (run.degenerate) {
    rep.degenerate = true;
    rep.notes.emplace_back("no user can transmit (all alpha_i * cap_i are zero)");
  }
  if (!run.converged) rep.notes.emplace_back("alternation hit max_iters before converging");
  return rep;
}

}  // namespace

std::vector<double> energy_step(const NetworkInstance& net, double tau0, std::span<const double> tau) {
  if (tau.size() != net.size()) throw DimensionError("energy_step: tau vector size mismatch");
  if (tau0 < 0.0 || tau0 > 1.0) throw DomainError("energy_step: tau0 outside [0,1]");
  return water_fill(tau, net.alphas(), caps_at(net, tau0), net.e_max()).energy;
}

double fixed_tau0_optimum(const NetworkInstance& net, double tau0) {
  const double uplink = 1.0 - tau0;
  if (!(uplink > 0.0)) return 0.0;
  std::vector<std::size_t> order(net.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return net.alpha(a) > net.alpha(b); });
  double left = net.e_max().value_or(std::numeric_limits<double>::infinity());
  double weighted = 0.0;
  for (std::size_t i : order) {
    if (!(net.alpha(i) > 0.0) || !(left > 0.0)) break;
    const double e = std::min(net.energy_cap(i, tau0), left);
    weighted += net.alpha(i) * e;
    left -= e;
  }
  return uplink * std::log2(1.0 + weighted / uplink);
}

SolveReport solve_fixed_tau0(const NetworkInstance& net, double tau0, const AlternatingConfig& cfg,
                             std::optional<std::vector<double>> init) {
  cfg.check();
  if (!(tau0 >= 0.0 && tau0 <= 1.0)) throw DomainError("solve_fixed_tau0: tau0 outside [0,1]");
  check_init(net, init);
  return report_from_run(net, alternate(net, tau0, cfg, init));
}

SolveReport solve_p1(const NetworkInstance& net, const AlternatingConfig& cfg, std::optional<std::vector<double>> init) {
  cfg.check();
  check_init(net, init);
  InnerRun best;
  bool have_best = false;
  bool all_converged = true;
  auto value = [&](double tau0) {
    InnerRun run = alternate(net, tau0, cfg, init);
    all_converged = all_converged && run.converged;
    const double v = run.objective;
    if (!have_best || v > best.objective) {
      best = std::move(run);
      have_best = true;
    }
    return v;
  };
  // Without harvesting the caps do not grow, so time spent harvesting is wasted.
  const bool harvesting_helps =
      std::any_of(net.harvest_rates().begin(), net.harvest_rates().end(), [](double c) { return c > 0.0; });
  LineSearchResult search;
  if (harvesting_helps) {
    search = maximize_concave(value, 0.0, 1.0, cfg.tau0_probes, cfg.tau0_tol);
  } else {
    value(0.0);
  }
  SolveReport rep = report_from_run(net, std::move(best));
  rep.converged = rep.converged && all_converged;
  if (harvesting_helps) {
    rep.notes.push_back("tau0 line search: " + std::to_string(search.evaluations) + " evaluations, final width " +
                        std::to_string(search.width));
  }
  return rep;
}

SolveReport solve_p2(const NetworkInstance& net, const AlternatingConfig& cfg) {
  cfg.check();
  return report_from_run(net, alternate(net, 0.0, cfg, std::nullopt));
}

SolveReport solve_p3(const NetworkInstance& net) {
  for (std::size_t i = 0; i < net.size(); ++i) {
    if (net.e_budget(i) != 0.0) throw DomainError("solve_p3: requires zero supply energy (use harvest_only())");
  }
  if (net.e_max()) throw DomainError("solve_p3: requires no system energy cap (use harvest_only())");
  const std::size_t k = net.size();
  const double a = std::accumulate(net.gammas().begin(), net.gammas().end(), 0.0);
  Allocation alloc = Allocation::zeros(k);
  if (!(a > 0.0)) {
    std::fill(alloc.tau.begin(), alloc.tau.end(), 1.0 / static_cast<double>(k));
    SolveReport rep = report_from_allocation(net, alloc);
    rep.degenerate = true;
    rep.notes.emplace_back("all gamma_i are zero; every rate is zero");
    return rep;
  }
  const double y = solve_f_excess(a);
  alloc.tau0 = y / (a + y);
  for (std::size_t i = 0; i < k; ++i) {
    alloc.tau[i] = net.gamma(i) / (a + y);
    alloc.energy[i] = net.harvest_rate(i) * alloc.tau0;
  }
  SolveReport rep = report_from_allocation(net, alloc);
  rep.residual = f_of_excess(y) - a;
  return rep;
}

P4Thresholds p4_thresholds(const HeteroInstance& net) {
  P4Thresholds t;
  const double n = static_cast<double>(net.legacy());
  if (net.harvesters() == 0) return t;
  if (net.legacy() == 0) {
    t.harvesters_competitive = true;
    t.lower = t.upper = std::numeric_limits<double>::infinity();
    return t;
  }
  const double target = net.a1() - (net.a() / n) * net.a2();
  t.harvesters_competitive = target >= 0.0;
  if (!t.harvesters_competitive) return t;
  t.x1_excess = solve_f_excess(target);
  t.lower = net.a() * t.x1_excess / (net.a1() + t.x1_excess);
  if (net.a1() + t.x1_excess == 0.0) t.lower = 0.0;
  t.upper = net.a2() > 0.0 ? (n / net.a2()) * t.x1_excess : std::numeric_limits<double>::infinity();
  return t;
}

P4Regime p4_regime(const HeteroInstance& net) {
  if (net.harvesters() == 0) return P4Regime::LegacyOnly;
  if (net.legacy() == 0) return P4Regime::HarvesterOnly;
  const P4Thresholds t = p4_thresholds(net);
  if (!t.harvesters_competitive) return P4Regime::LegacyOnly;
  if (net.e_max() <= t.lower) return P4Regime::HarvesterOnly;
  if (net.e_max() <= t.upper) return P4Regime::Shared;
  return P4Regime::LegacyOnly;
}

SolveReport solve_p4(const HeteroInstance& net) {
  const std::size_t m = net.harvesters();
  const std::size_t nn = net.legacy();
  const double n = static_cast<double>(nn);
  const double e_max = net.e_max();
  const double a = net.a();
  const double a1 = net.a1();
  const double a2 = net.a2();
  Allocation alloc = Allocation::zeros(m + nn);
  alloc.shared_energy = 0.0;
  bool degenerate = false;
  std::string regime_note;

  switch (p4_regime(net)) {
    case P4Regime::HarvesterOnly: {
      regime_note = "regime: harvesters only";
      if (!(a1 > 0.0)) {
        degenerate = true;
        for (std::size_t i = 0; i < m; ++i) alloc.tau[i] = 1.0 / static_cast<double>(m);
        break;
      }
      const double y = solve_f_excess(a1);
      alloc.tau0 = std::min(y / (a1 + y), e_max / a);
      for (std::size_t i = 0; i < m; ++i) {
        const double g = net.gammas()[i];
        alloc.tau[i] = std::max(g / (a1 + y), (g / a1) * (1.0 - e_max / a));
      }
      break;
    }
    case P4Regime::Shared: {
      regime_note = "regime: shared";
      const P4Thresholds t = p4_thresholds(net);
      const double y1 = t.x1_excess;
      const double d = n * (y1 + a1) - a * a2;
      const double time_part = n * y1 - e_max * a2;
      const double legacy_part = e_max * (y1 + a1) - a * y1;
      alloc.tau0 = time_part / d;
      for (std::size_t i = 0; i < m; ++i) alloc.tau[i] = net.gammas()[i] * time_part / (y1 * d);
      for (std::size_t j = 0; j < nn; ++j) alloc.tau[m + j] = net.thetas()[j] * legacy_part / (y1 * d);
      alloc.shared_energy = legacy_part / d;
      break;
    }
    case P4Regime::LegacyOnly: {
      regime_note = "regime: legacy only";
      if (!(a2 > 0.0)) {
        degenerate = true;
        for (std::size_t j = 0; j < nn; ++j) alloc.tau[m + j] = 1.0 / n;
      } else {
        for (std::size_t j = 0; j < nn; ++j) alloc.tau[m + j] = net.thetas()[j] / a2;
      }
      alloc.shared_energy = e_max / n;
      break;
    }
  }
  for (std::size_t i = 0; i < m; ++i) alloc.energy[i] = net.harvest_rates()[i] * alloc.tau0;
  for (std::size_t j = 0; j < nn; ++j) alloc.energy[m + j] = *alloc.shared_energy;

  SolveReport rep = report_from_allocation(net, alloc);
  rep.notes.push_back(regime_note);
  if (degenerate) {
    rep.degenerate = true;
    rep.notes.emplace_back("all link coefficients of the scheduled node type are zero");
  }
  return rep;
}

}  // namespace wpcn
