#include "wpcn/maxmin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "wpcn/error.hpp"
#include "wpcn/scalar.hpp"
#include "wpcn/units.hpp"

namespace wpcn {

namespace {

constexpr double kLn2 = std::numbers::ln2;
// Keeps tau0 strictly below 1 so every user retains some uplink time.
constexpr double kTau0Margin = 1e-9;

// G(z) = ln((e^z - 1) / z): energy-to-minimum-energy ratio at exponent z = t ln2 / tau.
double log_growth(double z) {
  if (z <= 0.0) return 0.0;
  if (z < 1.0) return std::log(std::expm1(z) / z);
  return z + std::log1p(-std::exp(-z)) - std::log(z);
}

double log_growth_slope(double z) {
  if (z < 1e-4) return 0.5 + z / 12.0;
  return 1.0 / (-std::expm1(-z)) - 1.0 / z;
}

// Root of G(z) = target (> 0). G is convex with slope in [1/2, 1), so Newton
// from z = 2 target approaches the root monotonically from the right.
double solve_log_growth(double target) {
  double z = 2.0 * target;
  for (int it = 0; it < kMaxRootIterations; ++it) {
    const double g = log_growth(z) - target;
    if (g <= 0.0) break;
    const double next = z - g / log_growth_slope(z);
    if (!(next < z) || !(next > 0.0)) break;
    if (z - next <= 4.0 * std::numeric_limits<double>::epsilon() * z) {
      z = next;
      break;
    }
    z = next;
  }
  return z;
}

// ln(phi(z)) with phi(z) = e^z (z - 1) + 1 = f(e^z), and its slope
// z / (z - 1 + e^-z). Concave and increasing in z.
struct LogPhi {
  double value;
  double slope;
};

LogPhi log_phi(double z) {
  double rest;  // z - 1 + e^-z
  if (z < 0.1) {
    double term = z * z / 2.0;
    rest = 0.0;
    for (int n = 2; n <= 14; ++n) {
      rest += (n % 2 == 0) ? term : -term;
      term *= z / (n + 1.0);
    }
  } else {
    rest = std::expm1(-z) + z;
  }
  return {z + std::log(rest), z / rest};
}

// z > 0 with ln phi(z) = target, by Newton from `guess`. On a concave
// increasing function Newton steps from the right land left of the root and
// then climb monotonically; non-positive steps are replaced by halving.
double solve_log_phi(double target, double guess) {
  double z = guess > 0.0 ? guess : 1.0;
  for (int it = 0; it < kMaxRootIterations; ++it) {
    const LogPhi p = log_phi(z);
    const double g = p.value - target;
    if (g == 0.0) break;
    double next = z - g / p.slope;
    if (!(next > 0.0)) next = 0.5 * z;
    if (std::abs(next - z) <= 4.0 * std::numeric_limits<double>::epsilon() * z) {
      z = next;
      break;
    }
    z = next;
  }
  return z;
}

// Shortest time in which a user with coefficient alpha reaches rate t using
// at most `cap` joules; +inf when no finite time suffices.
double min_time_for_rate(double t, double alpha, double cap) {
  if (t <= 0.0) return 0.0;
  if (!(alpha > 0.0) || !(cap > 0.0)) return std::numeric_limits<double>::infinity();
  const double ratio_log = std::log(cap * alpha / (t * kLn2));
  if (!(ratio_log > 0.0)) return std::numeric_limits<double>::infinity();
  return t * kLn2 / solve_log_growth(ratio_log);
}

std::vector<double> even_split(std::size_t k, double uplink) {
  return std::vector<double>(k, k ? uplink / static_cast<double>(k) : 0.0);
}

}  // namespace

void MaxminConfig::check() const {
  if (!(t_tol > 0.0) || !(inner_tol > 0.0) || !(tau0_tol > 0.0)) {
    throw DomainError("MaxminConfig: tolerances must be > 0");
  }
  if (tau0_grid < 2) throw DomainError("MaxminConfig: tau0_grid must be >= 2");
}

double energy_for_rate(double t, double tau, double alpha) {
  if (t <= 0.0) return 0.0;
  if (!(tau > 0.0) || !(alpha > 0.0)) return std::numeric_limits<double>::infinity();
  return tau / alpha * std::expm1(t * kLn2 / tau);
}

MinEnergy min_energy_for_rate(std::span<const double> alpha, std::span<const double> caps, double uplink_time,
                              double t, const MaxminConfig& cfg) {
  const std::size_t k = alpha.size();
  if (caps.size() != k) throw DimensionError("min_energy_for_rate: size mismatch");
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("min_energy_for_rate: t must be finite and >= 0");
  if (!(uplink_time >= 0.0)) throw DomainError("min_energy_for_rate: negative uplink time");
  MinEnergy out;
  if (t == 0.0) {
    out.feasible = true;
    out.tau = even_split(k, uplink_time);
    out.energy.assign(k, 0.0);
    return out;
  }
  std::vector<double> z_cap(k);
  double min_total_time = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double tm = min_time_for_rate(t, alpha[i], caps[i]);
    if (!std::isfinite(tm)) return out;
    z_cap[i] = t * kLn2 / tm;
    min_total_time += tm;
  }
  if (min_total_time > uplink_time) return out;
  out.feasible = true;

  std::vector<double> z(k);
  if (min_total_time < uplink_time) {
    // Equal marginal energy: f(e^{z_i}) = alpha_i mu, with z_i capped at the
    // cap-implied exponent. Solved in s = ln mu.
    std::vector<double> s_cap(k);
    std::vector<double> log_alpha(k);
    for (std::size_t i = 0; i < k; ++i) {
      log_alpha[i] = std::log(alpha[i]);
      s_cap[i] = log_phi(z_cap[i]).value - log_alpha[i];
    }
    const double z_even = t * kLn2 * static_cast<double>(k) / uplink_time;
    for (std::size_t i = 0; i < k; ++i) z[i] = std::min(z_even, z_cap[i]);
    // z keeps the previous iterate as the Newton warm start.
    auto exponents = [&](double s) {
      for (std::size_t i = 0; i < k; ++i) {
        z[i] = s >= s_cap[i] ? z_cap[i] : std::min(z_cap[i], solve_log_phi(s + log_alpha[i], z[i]));
      }
    };
    auto surplus = [&](double s) {  // increasing in s
      exponents(s);
      double used = 0.0;
      for (std::size_t i = 0; i < k; ++i) used += t * kLn2 / z[i];
      return uplink_time - used;
    };
    const double s_hi = *std::max_element(s_cap.begin(), s_cap.end());
    double s_lo = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < k; ++i) {
      s_lo = std::min(s_lo, log_phi(std::min(z_even, z_cap[i])).value - log_alpha[i]);
    }
    double f_lo = surplus(s_lo);
    for (int guard = 0; f_lo > 0.0 && guard < 200; ++guard) {
      s_lo -= 1.0;
      f_lo = surplus(s_lo);
    }
    const double f_hi = surplus(s_hi);
    if (f_lo <= 0.0 && f_hi >= 0.0 && s_lo < s_hi) {
      const Bracket b = illinois_increasing(surplus, Bracket{s_lo, s_hi, f_lo, f_hi},
                                            std::numeric_limits<double>::epsilon(),
                                            cfg.inner_tol * 1e-3 * uplink_time);
      // The upper end never overspends the uplink time.
      exponents(b.hi);
    } else {
      exponents(s_hi);
    }
  } else {
    z = z_cap;
  }

  out.tau.resize(k);
  out.energy.resize(k);
  double used = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    out.tau[i] = t * kLn2 / z[i];
    used += out.tau[i];
  }
  if (used > uplink_time) {
    for (double& tau : out.tau) tau *= uplink_time / used;
  }
  for (std::size_t i = 0; i < k; ++i) {
    out.energy[i] = std::min(energy_for_rate(t, out.tau[i], alpha[i]), caps[i]);
    out.total += out.energy[i];
  }
  return out;
}

MinEnergy min_energy_for_rate(const NetworkInstance& net, double t, double tau0, const MaxminConfig& cfg) {
  if (!(tau0 >= 0.0 && tau0 < 1.0)) throw DomainError("min_energy_for_rate: tau0 must lie in [0,1)");
  std::vector<double> caps(net.size());
  for (std::size_t i = 0; i < net.size(); ++i) caps[i] = net.energy_cap(i, tau0);
  MinEnergy out = min_energy_for_rate(net.alphas(), caps, 1.0 - tau0, t, cfg);
  if (out.feasible && net.e_max() && out.total > *net.e_max()) out.feasible = false;
  return out;
}

CommonRate max_common_rate(std::span<const double> alpha, std::span<const double> caps, double uplink_time,
                           std::optional<double> budget, const MaxminConfig& cfg) {
  const std::size_t k = alpha.size();
  if (caps.size() != k) throw DimensionError("max_common_rate: size mismatch");
  CommonRate out;
  out.tau = even_split(k, std::max(uplink_time, 0.0));
  out.energy.assign(k, 0.0);
  if (k == 0 || !(uplink_time > 0.0)) return out;
  if (budget && !(*budget > 0.0)) return out;
  double t_up = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < k; ++i) {
    if (!(alpha[i] > 0.0) || !(caps[i] > 0.0)) return out;
    t_up = std::min(t_up, uplink_time * std::log1p(alpha[i] * caps[i] / uplink_time) / kLn2);
  }
  if (!(t_up > 0.0)) return out;

  // Time-limited rate: every user spends its whole cap.
  auto time_excess = [&](double t) {
    double total = 0.0;
    for (std::size_t i = 0; i < k; ++i) total += min_time_for_rate(t, alpha[i], caps[i]);
    return total - uplink_time;
  };
  double f_up = time_excess(t_up);
  if (!std::isfinite(f_up)) f_up = uplink_time;
  const Bracket tb = illinois_increasing(time_excess, Bracket{0.0, t_up, -uplink_time, std::max(f_up, 0.0)},
                                         cfg.inner_tol);
  const double t_time = tb.lo;
  const double cap_total = std::accumulate(caps.begin(), caps.end(), 0.0);

  double t_star = t_time;
  if (budget && cap_total > *budget) {
    out.energy_limited = true;
    auto energy_excess = [&](double t) {
      const MinEnergy m = min_energy_for_rate(alpha, caps, uplink_time, t, cfg);
      return m.feasible ? m.total - *budget : cap_total - *budget;
    };
    const double f_top = energy_excess(t_time);
    if (f_top > 0.0) {
      const Bracket eb = illinois_increasing(energy_excess, Bracket{0.0, t_time, -*budget, f_top}, cfg.t_tol * 1e-3);
      t_star = eb.lo;
    }
  }
  if (!(t_star > 0.0)) return out;
  MinEnergy m = min_energy_for_rate(alpha, caps, uplink_time, t_star, cfg);
  if (!m.feasible) return out;
  if (budget && m.total > *budget) {
    for (double& e : m.energy) e *= *budget / m.total;
  }
  out.rate = t_star;
  out.tau = std::move(m.tau);
  out.energy = std::move(m.energy);
  return out;
}

namespace {

struct Tau0Search {
  double tau0 = 0.0;
  LineSearchResult search;
};

template <class Value>
Tau0Search search_tau0(Value&& value, double hi, const MaxminConfig& cfg) {
  Tau0Search s;
  if (!(hi > 0.0)) {
    s.search = maximize_concave(value, 0.0, 0.0, cfg.tau0_grid, cfg.tau0_tol);
    return s;
  }
  s.search = maximize_concave(value, 0.0, hi, cfg.tau0_grid, cfg.tau0_tol);
  s.tau0 = s.search.x;
  return s;
}

void attach_search(SolveReport& rep, const LineSearchResult& search) {
  rep.iterations = static_cast<std::size_t>(search.evaluations);
  rep.residual = search.width;
  rep.objective_trace = search.incumbent_trace;
}

void flag_zero_gain(SolveReport& rep, std::span<const double> alpha) {
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (!(alpha[i] > 0.0)) {
      rep.degenerate = true;
      rep.notes.push_back("user " + std::to_string(i) + " has zero uplink gain; common rate is 0");
    }
  }
}

std::vector<double> caps_at(const NetworkInstance& net, double tau0) {
  std::vector<double> caps(net.size());
  for (std::size_t i = 0; i < net.size(); ++i) caps[i] = net.energy_cap(i, tau0);
  return caps;
}

SolveReport network_report(const NetworkInstance& net, double tau0, const CommonRate& r) {
  Allocation alloc{tau0, r.tau, r.energy, {}};
  SolveReport rep = report_from_allocation(net, alloc);
  rep.notes.push_back(r.energy_limited ? "limited by E_max" : "limited by per-user energy and time");
  return rep;
}

}  // namespace

SolveReport solve_p1_maxmin(const NetworkInstance& net, const MaxminConfig& cfg) {
  cfg.check();
  const std::size_t k = net.size();
  auto value = [&](double tau0) {
    return max_common_rate(net.alphas(), caps_at(net, tau0), 1.0 - tau0, net.e_max(), cfg).rate;
  };
  const bool harvesting =
      std::any_of(net.harvest_rates().begin(), net.harvest_rates().end(), [](double c) { return c > 0.0; });
  const double hi = harvesting ? std::max(0.0, 1.0 - static_cast<double>(k) * kTau0Margin) : 0.0;
  const Tau0Search s = search_tau0(value, hi, cfg);
  const CommonRate best = max_common_rate(net.alphas(), caps_at(net, s.tau0), 1.0 - s.tau0, net.e_max(), cfg);
  SolveReport rep = network_report(net, s.tau0, best);
  attach_search(rep, s.search);
  flag_zero_gain(rep, net.alphas());
  return rep;
}

SolveReport solve_p2_maxmin(const NetworkInstance& net, const MaxminConfig& cfg) {
  cfg.check();
  const CommonRate best = max_common_rate(net.alphas(), caps_at(net, 0.0), 1.0, net.e_max(), cfg);
  SolveReport rep = network_report(net, 0.0, best);
  flag_zero_gain(rep, net.alphas());
  return rep;
}

SolveReport solve_p3_maxmin(const NetworkInstance& net, const MaxminConfig& cfg) {
  cfg.check();
  for (std::size_t i = 0; i < net.size(); ++i) {
    if (net.e_budget(i) != 0.0) throw DomainError("solve_p3_maxmin: requires zero supply energy");
  }
  if (net.e_max()) throw DomainError("solve_p3_maxmin: requires no system energy cap");
  const std::size_t k = net.size();
  auto value = [&](double tau0) {
    return max_common_rate(net.alphas(), caps_at(net, tau0), 1.0 - tau0, std::nullopt, cfg).rate;
  };
  const Tau0Search s = search_tau0(value, std::max(0.0, 1.0 - static_cast<double>(k) * kTau0Margin), cfg);
  const CommonRate best = max_common_rate(net.alphas(), caps_at(net, s.tau0), 1.0 - s.tau0, std::nullopt, cfg);
  SolveReport rep = network_report(net, s.tau0, best);
  attach_search(rep, s.search);
  flag_zero_gain(rep, net.alphas());
  // Harvest-only structure: every user spends all it harvested.
  for (std::size_t i = 0; i < k && best.rate > 0.0; ++i) {
    const double cap = net.energy_cap(i, s.tau0);
    if (std::abs(rep.allocation.energy[i] - cap) > 1e-9 * std::max(cap, 1e-300)) {
      rep.notes.push_back("user " + std::to_string(i) + " leaves harvested energy unused");
    }
  }
  return rep;
}

SolveReport solve_p4_maxmin(const HeteroInstance& net, const MaxminConfig& cfg) {
  cfg.check();
  const std::size_t m = net.harvesters();
  const std::size_t n = net.legacy();
  const std::size_t k = m + n;
  std::vector<double> alpha(k);
  for (std::size_t i = 0; i < m; ++i) alpha[i] = net.harvester_alpha(i);
  for (std::size_t j = 0; j < n; ++j) alpha[m + j] = net.thetas()[j];
  auto caps_for = [&](double tau0) {
    std::vector<double> caps(k);
    for (std::size_t i = 0; i < m; ++i) caps[i] = net.harvest_rates()[i] * tau0;
    const double shared = n ? std::max(0.0, net.e_max() - net.a() * tau0) / static_cast<double>(n) : 0.0;
    for (std::size_t j = 0; j < n; ++j) caps[m + j] = shared;
    return caps;
  };
  auto value = [&](double tau0) {
    return max_common_rate(alpha, caps_for(tau0), 1.0 - tau0, std::nullopt, cfg).rate;
  };
  double hi = 0.0;
  if (m > 0 && net.a() > 0.0) {
    hi = std::min(std::max(0.0, 1.0 - static_cast<double>(k) * kTau0Margin), net.e_max() / net.a());
  }
  const Tau0Search s = search_tau0(value, hi, cfg);
  const std::vector<double> caps = caps_for(s.tau0);
  const CommonRate best = max_common_rate(alpha, caps, 1.0 - s.tau0, std::nullopt, cfg);
  Allocation alloc{s.tau0, best.tau, best.energy, n ? std::optional<double>(caps[m]) : std::optional<double>(0.0)};
  SolveReport rep = report_from_allocation(net, alloc);
  attach_search(rep, s.search);
  flag_zero_gain(rep, alpha);
  return rep;
}

SolveReport solve_special_maxmin(Problem variant, const NetworkInstance& net, const MaxminConfig& cfg,
                                 std::span<const NodeType> types) {
  switch (variant) {
    case Problem::P2: return solve_p2_maxmin(net, cfg);
    case Problem::P3: return solve_p3_maxmin(net, cfg);
    case Problem::P4: return solve_p4_maxmin(HeteroInstance::from_network(net, types), cfg);
    case Problem::P1: break;
  }
  throw DomainError("solve_special_maxmin: variant must be P2, P3 or P4");
}

}  // namespace wpcn
