#include "wpcn/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "wpcn/error.hpp"
#include "wpcn/units.hpp"

namespace wpcn {

namespace {

void require_finite_nonneg(double v, const char* what) {
  if (!std::isfinite(v) || v < 0.0) {
    throw DomainError(std::string(what) + " must be finite and >= 0, got " + std::to_string(v));
  }
}

}  // namespace

NetworkInstance::NetworkInstance(std::vector<UserParams> users, ChannelRealization channels,
                                 double p_b, double gamma_gap, double sigma2,
                                 std::optional<double> e_max)
    : users_(std::move(users)),
      channels_(std::move(channels)),
      p_b_(p_b),
      gamma_gap_(gamma_gap),
      sigma2_(sigma2),
      e_max_(e_max) {
  if (users_.empty()) throw DimensionError("NetworkInstance: at least one user required");
  if (channels_.h.size() != users_.size() || channels_.g.size() != users_.size()) {
    throw DimensionError("NetworkInstance: channel vectors must have one gain per user");
  }
  if (!(p_b_ > 0.0)) throw DomainError("NetworkInstance: P_B must be positive");
  if (!(gamma_gap_ >= 1.0)) throw DomainError("NetworkInstance: SNR gap must be >= 1 (linear)");
  if (!(sigma2_ > 0.0)) throw DomainError("NetworkInstance: noise power must be positive");
  if (e_max_ && !(*e_max_ > 0.0 && std::isfinite(*e_max_))) {
    throw DomainError("NetworkInstance: E_max must be positive when present");
  }
  const std::size_t k = users_.size();
  alpha_.resize(k);
  harvest_rate_.resize(k);
  gamma_.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    const UserParams& u = users_[i];
    if (!(u.eta > 0.0 && u.eta < 1.0)) {
      throw DomainError("NetworkInstance: eta of user " + std::to_string(i) + " must lie in (0,1)");
    }
    require_finite_nonneg(u.e_budget, "e_budget");
    if (!(u.distance > 0.0)) throw DomainError("NetworkInstance: distance must be positive");
    require_finite_nonneg(channels_.h[i], "downlink gain h");
    require_finite_nonneg(channels_.g[i], "uplink gain g");
    alpha_[i] = channels_.g[i] / (gamma_gap_ * sigma2_);
    harvest_rate_[i] = u.eta * p_b_ * channels_.h[i];
    gamma_[i] = u.eta * channels_.h[i] * channels_.g[i] * p_b_ / (gamma_gap_ * sigma2_);
  }
}

NetworkInstance NetworkInstance::from_coefficients(std::span<const double> alpha,
                                                   std::span<const double> harvest_rate,
                                                   std::span<const double> e_budget,
                                                   std::optional<double> e_max) {
  if (alpha.size() != harvest_rate.size() || alpha.size() != e_budget.size()) {
    throw DimensionError("from_coefficients: alpha, harvest_rate and e_budget lengths differ");
  }
  constexpr double kEta = 0.5;
  std::vector<UserParams> users;
  ChannelRealization ch;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    users.push_back(UserParams{kEta, e_budget[i], 1.0});
    ch.h.push_back(harvest_rate[i] / kEta);
    ch.g.push_back(alpha[i]);
  }
  return NetworkInstance(std::move(users), std::move(ch), 1.0, 1.0, 1.0, e_max);
}

NetworkInstance NetworkInstance::with_e_max(std::optional<double> e_max) const {
  return NetworkInstance(users_, channels_, p_b_, gamma_gap_, sigma2_, e_max);
}

NetworkInstance NetworkInstance::with_e_budgets(std::span<const double> e_budget) const {
  if (e_budget.size() != users_.size()) throw DimensionError("with_e_budgets: wrong length");
  auto users = users_;
  for (std::size_t i = 0; i < users.size(); ++i) users[i].e_budget = e_budget[i];
  return NetworkInstance(std::move(users), channels_, p_b_, gamma_gap_, sigma2_, e_max_);
}

NetworkInstance NetworkInstance::harvest_only() const {
  auto users = users_;
  for (auto& u : users) u.e_budget = 0.0;
  return NetworkInstance(std::move(users), channels_, p_b_, gamma_gap_, sigma2_, std::nullopt);
}

HeteroInstance::HeteroInstance(std::vector<double> gamma, std::vector<double> harvest_rate,
                               std::vector<double> theta, double e_max)
    : gamma_(std::move(gamma)),
      harvest_rate_(std::move(harvest_rate)),
      theta_(std::move(theta)),
      e_max_(e_max) {
  if (gamma_.size() != harvest_rate_.size()) {
    throw DimensionError("HeteroInstance: gamma and harvest_rate lengths differ");
  }
  if (gamma_.empty() && theta_.empty()) throw DimensionError("HeteroInstance: no users");
  if (!(e_max_ > 0.0) || !std::isfinite(e_max_)) throw DomainError("HeteroInstance: E_max must be positive");
  for (double v : gamma_) require_finite_nonneg(v, "gamma");
  for (double v : harvest_rate_) require_finite_nonneg(v, "harvest rate");
  for (double v : theta_) require_finite_nonneg(v, "theta");
  a_ = std::accumulate(harvest_rate_.begin(), harvest_rate_.end(), 0.0);
  a1_ = std::accumulate(gamma_.begin(), gamma_.end(), 0.0);
  a2_ = std::accumulate(theta_.begin(), theta_.end(), 0.0);
}

HeteroInstance HeteroInstance::from_network(const NetworkInstance& net, std::span<const NodeType> types) {
  if (types.size() != net.size()) throw DimensionError("from_network: one node type per user required");
  if (!net.e_max()) throw DomainError("from_network: heterogeneous networks need an E_max");
  std::vector<double> gamma, harvest, theta;
  for (std::size_t i = 0; i < net.size(); ++i) {
    if (types[i] == NodeType::Harvest) {
      gamma.push_back(net.gamma(i));
      harvest.push_back(net.harvest_rate(i));
    } else {
      theta.push_back(net.alpha(i));
    }
  }
  return HeteroInstance(std::move(gamma), std::move(harvest), std::move(theta), *net.e_max());
}

double HeteroInstance::harvester_alpha(std::size_t i) const {
  const double hr = harvest_rate_.at(i);
  return hr > 0.0 ? gamma_.at(i) / hr : 0.0;
}

HeteroInstance HeteroInstance::with_e_max(double e_max) const {
  return HeteroInstance(gamma_, harvest_rate_, theta_, e_max);
}

std::string Violation::to_string() const {
  std::ostringstream os;
  os << constraint << " (user " << user << ") exceeded by " << margin;
  return os.str();
}

namespace {

void check_times(double tau0, std::span<const double> tau, std::vector<Violation>& out) {
  if (tau0 < -kTimeTolerance) out.push_back({"nonnegative-time", 0, -tau0});
  double total = tau0;
  for (std::size_t i = 0; i < tau.size(); ++i) {
    if (tau[i] < -kTimeTolerance || !std::isfinite(tau[i])) out.push_back({"nonnegative-time", i, -tau[i]});
    total += tau[i];
  }
  if (!(total <= 1.0 + kTimeTolerance)) out.push_back({"slot-time", 0, total - 1.0});
}

// Absolute tolerance for joule-scale values, relative for large ones.
double energy_slack(double reference) { return kEnergyTolerance * std::max(1.0, std::abs(reference)); }

}  // namespace

std::vector<Violation> validate(const NetworkInstance& net, const Allocation& alloc) {
  const std::size_t k = net.size();
  if (alloc.tau.size() != k || alloc.energy.size() != k) {
    throw DimensionError("validate: allocation has " + std::to_string(alloc.tau.size()) +
                         " times and " + std::to_string(alloc.energy.size()) + " energies for " +
                         std::to_string(k) + " users");
  }
  std::vector<Violation> out;
  check_times(alloc.tau0, alloc.tau, out);
  double total_energy = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double e = alloc.energy[i];
    if (e < -kEnergyTolerance || !std::isfinite(e)) out.push_back({"nonnegative-energy", i, -e});
    const double cap = net.energy_cap(i, std::max(alloc.tau0, 0.0));
    if (e > cap + energy_slack(cap)) out.push_back({"energy-cap", i, e - cap});
    total_energy += e;
  }
  if (net.e_max() && total_energy > *net.e_max() + energy_slack(*net.e_max())) {
    out.push_back({"system-energy", 0, total_energy - *net.e_max()});
  }
  return out;
}

std::vector<Violation> validate(const HeteroInstance& net, const Allocation& alloc) {
  const std::size_t m = net.harvesters();
  const std::size_t k = net.size();
  if (alloc.tau.size() != k || alloc.energy.size() != k) {
    throw DimensionError("validate: allocation size does not match the heterogeneous network");
  }
  std::vector<Violation> out;
  check_times(alloc.tau0, alloc.tau, out);
  const double e_bar = alloc.shared_energy.value_or(0.0);
  if (e_bar < -kEnergyTolerance) out.push_back({"nonnegative-energy", m, -e_bar});
  for (std::size_t i = 0; i < m; ++i) {
    const double cap = net.harvest_rates()[i] * std::max(alloc.tau0, 0.0);
    if (alloc.energy[i] < -kEnergyTolerance) out.push_back({"nonnegative-energy", i, -alloc.energy[i]});
    if (alloc.energy[i] > cap + energy_slack(cap)) out.push_back({"energy-cap", i, alloc.energy[i] - cap});
  }
  for (std::size_t j = m; j < k; ++j) {
    if (alloc.energy[j] > e_bar + energy_slack(e_bar)) out.push_back({"shared-energy", j, alloc.energy[j] - e_bar});
  }
  const double used = net.a() * alloc.tau0 + static_cast<double>(net.legacy()) * e_bar;
  if (used > net.e_max() + energy_slack(net.e_max())) out.push_back({"system-energy", 0, used - net.e_max()});
  return out;
}

double harvested_energy(const NetworkInstance& net, std::size_t user, double tau0) {
  if (user >= net.size()) throw DimensionError("harvested_energy: user index out of range");
  if (tau0 < 0.0 || tau0 > 1.0) throw DomainError("harvested_energy: tau0 outside [0,1]");
  return net.harvest_rate(user) * tau0;
}

void finalize_aggregates(SolveReport& report) {
  const auto& r = report.per_user_rate;
  report.sum_rate = std::accumulate(r.begin(), r.end(), 0.0);
  report.min_rate = r.empty() ? 0.0 : *std::min_element(r.begin(), r.end());
  const Fairness f = r.empty() ? Fairness{} : jain_index(r);
  report.jfi = f.index;
  report.jfi_degenerate = f.degenerate;
}

namespace {

[[noreturn]] void throw_invalid(const std::vector<Violation>& v) {
  std::string msg = "allocation violates constraints:";
  for (const auto& x : v) msg += " " + x.to_string() + ";";
  throw InvalidAllocation(msg);
}

}  // namespace

SolveReport report_from_allocation(const NetworkInstance& net, const Allocation& alloc) {
  if (auto v = validate(net, alloc); !v.empty()) throw_invalid(v);
  SolveReport rep;
  rep.allocation = alloc;
  rep.per_user_rate.resize(net.size());
  for (std::size_t i = 0; i < net.size(); ++i) {
    rep.per_user_rate[i] = rate_unchecked(std::max(alloc.energy[i], 0.0), std::max(alloc.tau[i], 0.0), net.alpha(i));
  }
  finalize_aggregates(rep);
  if (rep.jfi_degenerate) rep.notes.emplace_back("all rates zero; fairness index reported as 1");
  return rep;
}

SolveReport report_from_allocation(const HeteroInstance& net, const Allocation& alloc) {
  if (auto v = validate(net, alloc); !v.empty()) throw_invalid(v);
  SolveReport rep;
  rep.allocation = alloc;
  const std::size_t m = net.harvesters();
  rep.per_user_rate.resize(net.size());
  for (std::size_t i = 0; i < m; ++i) {
    // Harvesters spend what they collected: SNR numerator gamma_i * tau0.
    const double used = net.harvest_rates()[i] > 0.0 ? alloc.energy[i] / net.harvest_rates()[i] : 0.0;
    rep.per_user_rate[i] = rate_unchecked(std::max(used, 0.0), std::max(alloc.tau[i], 0.0), net.gammas()[i]);
  }
  for (std::size_t j = 0; j < net.legacy(); ++j) {
    rep.per_user_rate[m + j] =
        rate_unchecked(std::max(alloc.energy[m + j], 0.0), std::max(alloc.tau[m + j], 0.0), net.thetas()[j]);
  }
  finalize_aggregates(rep);
  if (rep.jfi_degenerate) rep.notes.emplace_back("all rates zero; fairness index reported as 1");
  return rep;
}

}  // namespace wpcn
