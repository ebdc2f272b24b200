#include "wpcn/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "wpcn/error.hpp"
#include "wpcn/parallel.hpp"
#include "wpcn/units.hpp"

namespace wpcn {

std::string to_string(SweepParam p) {
  switch (p) {
    case SweepParam::Beta: return "beta";
    case SweepParam::PbDbm: return "p_b_dbm";
    case SweepParam::EMax: return "e_max";
    case SweepParam::EBudget: return "e_budget";
    case SweepParam::D1: return "d1";
    case SweepParam::Mix: return "mix";
    case SweepParam::GainRatio: return "gain_ratio";
  }
  return "?";
}

std::optional<SweepParam> parse_sweep_param(std::string_view text) {
  for (SweepParam p : {SweepParam::Beta, SweepParam::PbDbm, SweepParam::EMax, SweepParam::EBudget, SweepParam::D1,
                       SweepParam::Mix, SweepParam::GainRatio}) {
    if (to_string(p) == text) return p;
  }
  return std::nullopt;
}

void Scenario::check() const {
  if (users.empty()) throw DomainError("scenario: at least one user required");
  if (!types.empty() && types.size() != users.size()) throw DomainError("scenario: one node type per user required");
  if (!(bandwidth_hz > 0.0)) throw DomainError("scenario: bandwidth must be positive");
  if (e_max_mode == EmaxMode::Fixed && !(e_max > 0.0)) throw DomainError("scenario: fixed E_max must be positive");
  channel.check();
  if (fixed_channels && (fixed_channels->h.size() != users.size() || fixed_channels->g.size() != users.size())) {
    throw DomainError("scenario: pinned channels need one h and one g per user");
  }
}

void ExperimentSpec::check() const {
  if (values.empty()) throw DomainError("experiment: sweep values must be non-empty");
  if (realizations < 1) throw DomainError("experiment: realizations must be >= 1");
  if (problems.empty()) throw DomainError("experiment: no problems requested");
  if (series && series->values.empty()) throw DomainError("experiment: series values must be non-empty");
  maxmin.check();
  alternating.check();
  if (regime) {
    for (const auto& p : problems) {
      if (p.problem != Problem::P4) throw DomainError("experiment: the E_max regime sweep only solves P4");
    }
    if (swept_param != SweepParam::EMax) throw DomainError("experiment: the regime sweep runs over e_max");
    return;
  }
  if (swept_param == SweepParam::GainRatio || (series && series->param == SweepParam::GainRatio)) {
    throw DomainError("experiment: gain_ratio only applies to the E_max regime sweep");
  }
  base.check();
}

std::vector<NodeType> node_types(const Scenario& scenario) {
  if (!scenario.types.empty()) return scenario.types;
  std::vector<NodeType> t(scenario.users.size(), NodeType::Legacy);
  t[0] = NodeType::Harvest;
  return t;
}

void apply(Scenario& sc, SweepParam param, double value) {
  switch (param) {
    case SweepParam::Beta: sc.channel.beta = value; break;
    case SweepParam::PbDbm: sc.p_b_dbm = value; break;
    case SweepParam::EMax:
      sc.e_max_mode = EmaxMode::Fixed;
      sc.e_max = value;
      break;
    case SweepParam::EBudget:
      for (auto& u : sc.users) u.e_budget = value;
      break;
    case SweepParam::D1:
      if (sc.users.empty()) throw DomainError("d1 sweep needs at least one user");
      sc.users[0].distance = value;
      break;
    case SweepParam::Mix: {
      const double n = std::round(value);
      if (n != value || n < 0 || n > static_cast<double>(sc.users.size())) {
        throw DomainError("mix value must be an integer legacy-node count in [0, K]");
      }
      const auto legacy = static_cast<std::size_t>(n);
      sc.types.assign(sc.users.size(), NodeType::Harvest);
      for (std::size_t j = sc.users.size() - legacy; j < sc.users.size(); ++j) sc.types[j] = NodeType::Legacy;
      break;
    }
    case SweepParam::GainRatio: throw DomainError("gain_ratio only applies to the E_max regime sweep");
  }
}

NetworkInstance build_instance(const Scenario& sc, const ChannelRealization& channels, std::optional<double> e_max) {
  return NetworkInstance(sc.users, channels, dbm_to_watts(sc.p_b_dbm), db_to_linear(sc.gamma_db),
                         noise_power(sc.sigma2_dbm_hz, sc.bandwidth_hz), e_max);
}

double matched_emax(const std::vector<NetworkInstance>& instances, Objective objective, const MaxminConfig& cfg) {
  if (instances.empty()) throw DomainError("matched_emax: no instances");
  std::vector<double> harvested(instances.size(), 0.0);
  parallel_for(instances.size(), [&](std::size_t r) {
    const NetworkInstance& net = instances[r];
    const SolveReport rep = objective == Objective::Sum ? solve_p3(net) : solve_p3_maxmin(net, cfg);
    double total = 0.0;
    for (std::size_t i = 0; i < net.size(); ++i) total += net.harvest_rate(i) * rep.allocation.tau0;
    harvested[r] = total;
  });
  double sum = 0.0;
  for (double h : harvested) sum += h;
  return sum / static_cast<double>(instances.size());
}

namespace {

std::string format_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string series_label(const std::optional<SeriesAxis>& series, double value) {
  if (!series) return "";
  return to_string(series->param) + "=" + format_value(value);
}

struct Outcome {
  bool ok = false;
  double sum = 0.0;
  double min = 0.0;
  double jfi = 0.0;
  std::vector<double> rates;
};

Outcome solve_one(const ProblemKind& kind, const NetworkInstance& net, const std::vector<NodeType>& types,
                  const ExperimentSpec& spec) {
  SolveReport rep;
  const bool sum = kind.objective == Objective::Sum;
  switch (kind.problem) {
    case Problem::P1: rep = sum ? solve_p1(net, spec.alternating) : solve_p1_maxmin(net, spec.maxmin); break;
    case Problem::P2: rep = sum ? solve_p2(net, spec.alternating) : solve_p2_maxmin(net, spec.maxmin); break;
    case Problem::P3: {
      const NetworkInstance h = net.harvest_only();
      rep = sum ? solve_p3(h) : solve_p3_maxmin(h, spec.maxmin);
      break;
    }
    case Problem::P4: {
      const HeteroInstance h = HeteroInstance::from_network(net, types);
      rep = sum ? solve_p4(h) : solve_p4_maxmin(h, spec.maxmin);
      break;
    }
  }
  if (!std::isfinite(rep.sum_rate) || !std::isfinite(rep.min_rate) || !std::isfinite(rep.jfi)) return {};
  return {true, rep.sum_rate, rep.min_rate, rep.jfi, rep.per_user_rate};
}

std::string harvest_key(const Scenario& sc) {
  std::ostringstream os;
  os.precision(17);
  os << sc.p_b_dbm << '|' << sc.sigma2_dbm_hz << '|' << sc.bandwidth_hz << '|' << sc.gamma_db << '|'
     << sc.channel.beta << '|' << sc.channel.pathloss_const << '|' << sc.channel.reciprocal << '|'
     << sc.channel.pinned_fading.value_or(-1.0);
  for (const auto& u : sc.users) os << '|' << u.eta << ',' << u.distance;
  return os.str();
}

SweepResult run_regime(const ExperimentSpec& spec) {
  SweepResult out;
  out.spec = spec;
  const RegimeScenario& rs = *spec.regime;
  const std::vector<double> ratios = spec.series ? spec.series->values : std::vector<double>{1.0};
  DetailTable detail;
  detail.columns = {"gain_ratio", "e_max", "tau0", "tau_harvester", "tau_legacy", "e_bar", "sum_rate", "min_rate"};
  for (double ratio : ratios) {
    const double gamma = rs.a * rs.theta * ratio;
    for (const auto& kind : spec.problems) {
      const std::string label = to_string(kind.problem) + (spec.series ? "/" + series_label(spec.series, ratio) : "");
      for (double e_max : spec.values) {
        SweepRow row{spec.swept_param, e_max, label, kind.objective, 0.0, 0.0, 0.0, 0, spec.seed, 0};
        try {
          const HeteroInstance inst({gamma}, {rs.a}, {rs.theta}, e_max);
          const SolveReport rep = kind.objective == Objective::Sum ? solve_p4(inst) : solve_p4_maxmin(inst, spec.maxmin);
          row.mean_sum_rate = rep.sum_rate;
          row.mean_min_rate = rep.min_rate;
          row.mean_jfi = rep.jfi;
          row.realizations = 1;
          out.per_realization.push_back({kind.objective == Objective::Sum ? rep.sum_rate : rep.min_rate});
          detail.labels.push_back(label + "-" + to_string(kind.objective));
          detail.rows.push_back({ratio, e_max, rep.allocation.tau0, rep.allocation.tau[0], rep.allocation.tau[1],
                                 rep.allocation.shared_energy.value_or(0.0), rep.sum_rate, rep.min_rate});
        } catch (const Error&) {
          row.failures = 1;
          out.per_realization.push_back({std::numeric_limits<double>::quiet_NaN()});
        }
        out.rows.push_back(row);
      }
    }
  }
  out.detail = std::move(detail);
  return out;
}

}  // namespace

SweepResult run_sweep(const ExperimentSpec& spec) {
  spec.check();
  if (spec.regime) return run_regime(spec);

  SweepResult out;
  out.spec = spec;
  const std::size_t reps = spec.realizations;
  const std::vector<double> series_values = spec.series ? spec.series->values : std::vector<double>{0.0};
  bool need_sum = false;
  bool need_maxmin = false;
  for (const auto& p : spec.problems) (p.objective == Objective::Sum ? need_sum : need_maxmin) = true;
  std::map<std::pair<std::string, int>, double> matched_cache;

  for (double sv : series_values) {
    const std::string series = series_label(spec.series, sv);
    for (double v : spec.values) {
      Scenario sc = spec.base;
      if (spec.series) apply(sc, spec.series->param, sv);
      apply(sc, spec.swept_param, v);
      sc.check();
      std::vector<double> distances;
      for (const auto& u : sc.users) distances.push_back(u.distance);
      std::vector<ChannelRealization> channels =
          sc.fixed_channels ? std::vector<ChannelRealization>(reps, *sc.fixed_channels)
                            : batch(sc.channel, distances, spec.seed, reps);
      std::vector<NetworkInstance> base;
      base.reserve(reps);
      for (const auto& ch : channels) base.push_back(build_instance(sc, ch, std::nullopt));

      std::optional<double> e_sum;
      std::optional<double> e_maxmin;
      if (sc.e_max_mode == EmaxMode::Fixed) {
        e_sum = e_maxmin = sc.e_max;
      } else if (sc.e_max_mode == EmaxMode::Matched) {
        std::vector<NetworkInstance> harvest;
        harvest.reserve(reps);
        for (const auto& n : base) harvest.push_back(n.harvest_only());
        const std::string key = harvest_key(sc);
        auto matched = [&](Objective o) {
          const auto k = std::make_pair(key, static_cast<int>(o));
          auto it = matched_cache.find(k);
          if (it == matched_cache.end()) it = matched_cache.emplace(k, matched_emax(harvest, o, spec.maxmin)).first;
          out.matched.push_back({v, series, o, it->second});
          return it->second;
        };
        if (need_sum) e_sum = matched(Objective::Sum);
        if (need_maxmin) e_maxmin = matched(Objective::Maxmin);
      }

      const std::vector<NodeType> types = node_types(sc);
      const std::size_t np = spec.problems.size();
      std::vector<Outcome> results(np * reps);
      parallel_for(reps, [&](std::size_t r) {
        for (std::size_t p = 0; p < np; ++p) {
          const ProblemKind& kind = spec.problems[p];
          try {
            const auto e = kind.objective == Objective::Sum ? e_sum : e_maxmin;
            const NetworkInstance net = base[r].with_e_max(e);
            results[p * reps + r] = solve_one(kind, net, types, spec);
          } catch (const Error&) {
            results[p * reps + r] = Outcome{};
          }
        }
      });

      for (std::size_t p = 0; p < np; ++p) {
        const ProblemKind& kind = spec.problems[p];
        SweepRow row{spec.swept_param, v, to_string(kind.problem) + (series.empty() ? "" : "/" + series),
                     kind.objective, 0.0, 0.0, 0.0, 0, spec.seed, 0};
        std::vector<double> objective(reps, std::numeric_limits<double>::quiet_NaN());
        std::vector<double> mean_rates;
        for (std::size_t r = 0; r < reps; ++r) {
          const Outcome& o = results[p * reps + r];
          if (!o.ok) {
            ++row.failures;
            continue;
          }
          row.mean_sum_rate += o.sum;
          row.mean_min_rate += o.min;
          if (mean_rates.empty()) mean_rates.assign(o.rates.size(), 0.0);
          for (std::size_t i = 0; i < mean_rates.size() && i < o.rates.size(); ++i) mean_rates[i] += o.rates[i];
          ++row.realizations;
          objective[r] = kind.objective == Objective::Sum ? o.sum : o.min;
        }
        if (row.realizations > 0) {
          const double n = static_cast<double>(row.realizations);
          row.mean_sum_rate /= n;
          row.mean_min_rate /= n;
          for (double& m : mean_rates) m /= n;
          // Fairness of the averaged per-user throughputs, as the curves are
          // built from averaged rates.
          row.mean_jfi = jain_index(mean_rates).index;
        }
        out.rows.push_back(row);
        out.per_realization.push_back(std::move(objective));
      }
    }
  }
  return out;
}

std::vector<std::string> figure_names() {
  return {"fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9_mix", "fig10"};
}

namespace {

std::vector<ProblemKind> all_problems(Objective o) {
  return {{Problem::P1, o}, {Problem::P2, o}, {Problem::P3, o}, {Problem::P4, o}};
}

Scenario two_users(double p_b_dbm, double d1, double d2, double e_budget) {
  Scenario sc;
  sc.p_b_dbm = p_b_dbm;
  sc.users = {UserParams{0.5, e_budget, d1}, UserParams{0.5, e_budget, d2}};
  sc.types = {NodeType::Harvest, NodeType::Legacy};
  return sc;
}

const std::vector<double> kBetaValues{2.0, 2.5, 3.0, 3.5, 4.0};
const std::vector<double> kBudgetSeries{3e-7, 7e-7, 5e-6};

}  // namespace

ExperimentSpec figure_preset(std::string_view name) {
  ExperimentSpec s;
  s.scenario = std::string(name);
  s.realizations = 200;
  s.seed = 42;
  if (name == "fig3") {
    s.regime = RegimeScenario{5.0, 20.0};
    s.swept_param = SweepParam::EMax;
    for (int i = 1; i <= 100; ++i) s.values.push_back(0.05 * i);
    s.series = SeriesAxis{SweepParam::GainRatio, {2.0, 2.5, 3.0, 3.5, 4.0}};
    s.problems = {{Problem::P4, Objective::Sum}};
    s.realizations = 1;
    s.base = two_users(30.0, 10.0, 5.0, 0.0);
  } else if (name == "fig4") {
    s.base = two_users(20.0, 5.0, 10.0, 1e-7);
    s.base.e_max_mode = EmaxMode::Fixed;
    s.base.e_max = 1e-6;
    s.swept_param = SweepParam::Beta;
    s.values = kBetaValues;
    s.problems = {{Problem::P1, Objective::Sum}};
  } else if (name == "fig5" || name == "fig7") {
    s.base = two_users(30.0, 10.0, 5.0, 0.0);
    s.swept_param = SweepParam::Beta;
    s.values = kBetaValues;
    s.series = SeriesAxis{SweepParam::EBudget, kBudgetSeries};
    s.problems = all_problems(name == "fig5" ? Objective::Sum : Objective::Maxmin);
  } else if (name == "fig6" || name == "fig8") {
    s.base = two_users(30.0, 10.0, 5.0, 0.0);
    s.base.channel.beta = 2.0;
    s.swept_param = SweepParam::PbDbm;
    s.values = {0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0};
    s.series = SeriesAxis{SweepParam::EBudget, kBudgetSeries};
    s.problems = all_problems(name == "fig6" ? Objective::Sum : Objective::Maxmin);
  } else if (name == "fig10") {
    s.base = two_users(20.0, 10.0, 5.0, 0.0);
    s.base.channel.beta = 2.0;
    s.swept_param = SweepParam::D1;
    s.values = {2.0, 4.0, 6.0, 8.0, 10.0, 12.0, 14.0};
    s.series = SeriesAxis{SweepParam::EBudget, kBudgetSeries};
    s.problems = all_problems(Objective::Sum);
  } else if (name == "fig9_mix") {
    s.base.p_b_dbm = 20.0;
    s.base.channel.beta = 2.0;
    s.base.users.assign(6, UserParams{0.5, 0.0, 10.0 / 6.0});
    s.swept_param = SweepParam::Mix;
    s.values = {0, 1, 2, 3, 4, 5, 6};
    s.problems = {{Problem::P4, Objective::Sum}};
  } else {
    throw DomainError("unknown figure preset '" + std::string(name) + "'");
  }
  return s;
}

}  // namespace wpcn
