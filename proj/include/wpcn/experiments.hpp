#pragma once

// Monte-Carlo sweeps: per sweep point, draw common random channels, match
// E_max to the mean harvest of the harvest-only network when asked, solve
// each requested problem on every realization and average.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wpcn/channel.hpp"
#include "wpcn/maxmin.hpp"
#include "wpcn/model.hpp"
#include "wpcn/problem.hpp"
#include "wpcn/sum_solvers.hpp"

namespace wpcn {

enum class SweepParam { Beta, PbDbm, EMax, EBudget, D1, Mix, GainRatio };

std::string to_string(SweepParam p);
std::optional<SweepParam> parse_sweep_param(std::string_view text);

enum class EmaxMode {
  /// No system energy cap (P4 rows need one and fail).
  None,
  /// Fixed value from the scenario.
  Fixed,
  /// Mean harvested energy of the harvest-only network, per sweep point.
  Matched,
};

/// Physical network template in the units of the config file.
struct Scenario {
  double p_b_dbm = 30.0;
  double sigma2_dbm_hz = -160.0;
  double bandwidth_hz = 1e6;
  double gamma_db = 9.8;
  EmaxMode e_max_mode = EmaxMode::Matched;
  double e_max = 0.0;  // used when e_max_mode == Fixed
  ChannelModel channel;
  std::vector<UserParams> users;
  std::vector<NodeType> types;  // empty: user 0 harvests, the rest are legacy
  /// Optional pinned gains (h_i, g_i); bypasses the channel model.
  std::optional<ChannelRealization> fixed_channels;

  void check() const;
};

/// Deterministic single-harvester/single-legacy sweep over E_max (P4 only).
struct RegimeScenario {
  double a = 5.0;
  double theta = 20.0;
};

struct SeriesAxis {
  SweepParam param = SweepParam::EBudget;
  std::vector<double> values;
};

struct ExperimentSpec {
  std::string scenario = "custom";
  Scenario base;
  SweepParam swept_param = SweepParam::Beta;
  std::vector<double> values;
  /// One curve per value; labels like "P1/e_budget=3e-07".
  std::optional<SeriesAxis> series;
  std::size_t realizations = 200;
  std::uint64_t seed = 42;
  std::vector<ProblemKind> problems;
  MaxminConfig maxmin;
  AlternatingConfig alternating;
  /// Set for the E_max regime sweep (fig3); realizations are ignored.
  std::optional<RegimeScenario> regime;

  void check() const;
};

struct SweepRow {
  SweepParam swept_param = SweepParam::Beta;
  double value = 0.0;
  std::string problem;  // "P1" or "P1/e_budget=3e-07"
  Objective objective = Objective::Sum;
  double mean_sum_rate = 0.0;
  double mean_min_rate = 0.0;
  /// Jain index of the realization-averaged per-user rates.
  double mean_jfi = 0.0;
  std::size_t realizations = 0;
  std::uint64_t seed = 0;
  std::size_t failures = 0;
};

struct MatchedEmax {
  double value = 0.0;      // sweep value
  std::string series;      // "" or "e_budget=3e-07"
  Objective objective = Objective::Sum;
  double e_max = 0.0;      // joules
};

/// Extra per-point detail table (fig3 time allocations).
struct DetailTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> labels;  // one per row
};

struct SweepResult {
  ExperimentSpec spec;
  std::vector<SweepRow> rows;
  std::vector<MatchedEmax> matched;
  std::optional<DetailTable> detail;
  /// Per-row, per-realization objective values (sum or min rate), kept for
  /// per-realization checks. Failed realizations hold NaN.
  std::vector<std::vector<double>> per_realization;
};

/// Mean harvested energy sum_i eta_i P_B h_i tau0* of the harvest-only
/// network over the given instances (sum or max-min optimum).
double matched_emax(const std::vector<NetworkInstance>& instances, Objective objective = Objective::Sum,
                    const MaxminConfig& cfg = {});

/// Builds the network of one realization.
NetworkInstance build_instance(const Scenario& scenario, const ChannelRealization& channels,
                               std::optional<double> e_max);

/// Node types of a scenario (defaulted when unset).
std::vector<NodeType> node_types(const Scenario& scenario);

/// Applies one sweep/series coordinate to a scenario.
void apply(Scenario& scenario, SweepParam param, double value);

SweepResult run_sweep(const ExperimentSpec& spec);

ExperimentSpec figure_preset(std::string_view name);
std::vector<std::string> figure_names();

}  // namespace wpcn
