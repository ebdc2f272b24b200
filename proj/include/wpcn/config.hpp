#pragma once

// TOML scenario files. Sections:
//   [network]  p_b_dbm, sigma2_dbm_hz, bandwidth_hz, gamma_db, beta,
//              pathloss_const, e_max_joules (number or "matched"),
//              fading ("rayleigh" | "none"), reciprocal
//   [[users]]  eta, e_budget_joules, type ("harvest" | "legacy"), and one of
//              d_meters | h + g | alpha + harvest_rate
//   [sweep]    param, values, realizations, seed, problems
// Unknown keys are rejected. dBm/dB values stay in the Scenario and are
// converted when instances are built.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wpcn/experiments.hpp"

namespace wpcn {

struct SweepSection {
  SweepParam param = SweepParam::Beta;
  std::vector<double> values;
  std::size_t realizations = 200;
  std::uint64_t seed = 42;
  std::vector<ProblemKind> problems;
};

struct Config {
  Scenario scenario;
  std::optional<SweepSection> sweep;
  /// True when users were given as solver coefficients (alpha, harvest_rate).
  bool coefficient_users = false;
};

/// Parses a TOML document. `overrides` are "dotted.key=value" strings with
/// TOML values ("network.beta=3", "users.0.eta=0.4", "sweep.problems=[\"p1\"]"),
/// applied before validation. Throws ConfigError.
Config parse_config(std::string_view text, const std::vector<std::string>& overrides = {},
                    std::string_view source = "config");
Config load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides = {});

/// Single instance for `solve`/`certify`: pinned channels, or realization 0
/// of the channel model under `seed`. A matched E_max is the harvest-only
/// optimum of that same realization.
NetworkInstance instance_from_config(const Config& config, std::uint64_t seed);

/// Sweep spec from the [sweep] section (throws ConfigError when absent).
ExperimentSpec experiment_from_config(const Config& config);

}  // namespace wpcn
