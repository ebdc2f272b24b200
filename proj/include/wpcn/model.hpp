#pragma once

// Network instances, allocations and solve reports, plus feasibility checks
// for the slot-time budget, the per-slot system energy cap and the per-user
// energy causality cap.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace wpcn {

inline constexpr double kTimeTolerance = 1e-9;
inline constexpr double kEnergyTolerance = 1e-12;

struct UserParams {
  double eta = 0.5;        // harvesting efficiency, (0,1)
  double e_budget = 0.0;   // constant supply energy per slot, joules
  double distance = 1.0;   // meters
};

/// Channel power gains of one slot. h: downlink (BS -> user), g: uplink.
struct ChannelRealization {
  std::vector<double> h;
  std::vector<double> g;
};

/// Harvest-then-transmit network for one slot with cached link coefficients
/// alpha_i = g_i / (Gamma sigma^2), harvest rate eta_i P_B h_i and
/// gamma_i = alpha_i * harvest_rate_i.
class NetworkInstance {
 public:
  NetworkInstance(std::vector<UserParams> users, ChannelRealization channels, double p_b,
                  double gamma_gap, double sigma2, std::optional<double> e_max);

  /// Builds an instance directly from solver coefficients. Physical fields
  /// are filled with a consistent normalisation (P_B = Gamma = sigma^2 = 1,
  /// eta = 0.5).
  static NetworkInstance from_coefficients(std::span<const double> alpha,
                                           std::span<const double> harvest_rate,
                                           std::span<const double> e_budget,
                                           std::optional<double> e_max);

  std::size_t size() const noexcept { return users_.size(); }
  const std::vector<UserParams>& users() const noexcept { return users_; }
  const ChannelRealization& channels() const noexcept { return channels_; }
  double p_b() const noexcept { return p_b_; }
  double gamma_gap() const noexcept { return gamma_gap_; }
  double sigma2() const noexcept { return sigma2_; }
  const std::optional<double>& e_max() const noexcept { return e_max_; }

  double alpha(std::size_t i) const { return alpha_.at(i); }
  double harvest_rate(std::size_t i) const { return harvest_rate_.at(i); }
  double gamma(std::size_t i) const { return gamma_.at(i); }
  double e_budget(std::size_t i) const { return users_.at(i).e_budget; }
  const std::vector<double>& alphas() const noexcept { return alpha_; }
  const std::vector<double>& harvest_rates() const noexcept { return harvest_rate_; }
  const std::vector<double>& gammas() const noexcept { return gamma_; }

  /// Energy available to user i when harvesting for tau0.
  double energy_cap(std::size_t i, double tau0) const {
    return users_.at(i).e_budget + harvest_rate_.at(i) * tau0;
  }

  NetworkInstance with_e_max(std::optional<double> e_max) const;
  NetworkInstance with_e_budgets(std::span<const double> e_budget) const;
  /// Harvest-only reduction: zero supply energy and no system energy cap.
  NetworkInstance harvest_only() const;

 private:
  std::vector<UserParams> users_;
  ChannelRealization channels_;
  double p_b_;
  double gamma_gap_;
  double sigma2_;
  std::optional<double> e_max_;
  std::vector<double> alpha_;
  std::vector<double> harvest_rate_;
  std::vector<double> gamma_;
};

enum class NodeType { Harvest, Legacy };

/// Network with harvest-only (type I) and supply-only legacy (type II)
/// nodes. Legacy nodes all draw the same per-slot energy E-bar.
class HeteroInstance {
 public:
  /// gamma/harvest_rate describe the M harvesting nodes, theta the N legacy ones.
  HeteroInstance(std::vector<double> gamma, std::vector<double> harvest_rate,
                 std::vector<double> theta, double e_max);

  /// Splits a network by node type. Requires an E_max.
  static HeteroInstance from_network(const NetworkInstance& net, std::span<const NodeType> types);

  std::size_t harvesters() const noexcept { return gamma_.size(); }
  std::size_t legacy() const noexcept { return theta_.size(); }
  std::size_t size() const noexcept { return gamma_.size() + theta_.size(); }
  const std::vector<double>& gammas() const noexcept { return gamma_; }
  const std::vector<double>& harvest_rates() const noexcept { return harvest_rate_; }
  const std::vector<double>& thetas() const noexcept { return theta_; }
  double e_max() const noexcept { return e_max_; }
  /// Total harvest rate a = sum_i eta_i P_B h_1i.
  double a() const noexcept { return a_; }
  double a1() const noexcept { return a1_; }
  double a2() const noexcept { return a2_; }
  /// Uplink coefficient of harvester i, gamma_i / harvest_rate_i.
  double harvester_alpha(std::size_t i) const;

  HeteroInstance with_e_max(double e_max) const;

 private:
  std::vector<double> gamma_;
  std::vector<double> harvest_rate_;
  std::vector<double> theta_;
  double e_max_;
  double a_ = 0.0;
  double a1_ = 0.0;
  double a2_ = 0.0;
};

/// Decision variables. For hetero instances tau/energy list the harvesters
/// first, then the legacy nodes, and shared_energy holds E-bar.
struct Allocation {
  double tau0 = 0.0;
  std::vector<double> tau;
  std::vector<double> energy;
  std::optional<double> shared_energy;

  static Allocation zeros(std::size_t users) {
    return Allocation{0.0, std::vector<double>(users, 0.0), std::vector<double>(users, 0.0), {}};
  }
};

struct Violation {
  std::string constraint;  // "slot-time", "energy-cap", "system-energy", ...
  std::size_t user = 0;    // meaningful for per-user constraints
  double margin = 0.0;     // amount by which the constraint is exceeded
  std::string to_string() const;
};

std::vector<Violation> validate(const NetworkInstance& net, const Allocation& alloc);
std::vector<Violation> validate(const HeteroInstance& net, const Allocation& alloc);

/// eta_i P_B h_i tau0.
double harvested_energy(const NetworkInstance& net, std::size_t user, double tau0);

struct SolveReport {
  Allocation allocation;
  std::vector<double> per_user_rate;
  double sum_rate = 0.0;
  double min_rate = 0.0;
  double jfi = 1.0;
  bool jfi_degenerate = false;
  std::size_t iterations = 0;
  double residual = 0.0;
  std::vector<double> objective_trace;
  bool converged = true;
  /// Set for degenerate inputs (all-zero channels, zero-gain user in a
  /// max-min solve, ...). `notes` says which.
  bool degenerate = false;
  std::vector<std::string> notes;
};

/// Evaluates per-user rates and aggregates. Throws InvalidAllocation when
/// validate() reports violations.
SolveReport report_from_allocation(const NetworkInstance& net, const Allocation& alloc);
SolveReport report_from_allocation(const HeteroInstance& net, const Allocation& alloc);

/// Fills per_user_rate-derived aggregates (sum, min, JFI) in place.
void finalize_aggregates(SolveReport& report);

}  // namespace wpcn
