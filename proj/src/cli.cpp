#include "wpcn/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "wpcn/config.hpp"
#include "wpcn/error.hpp"
#include "wpcn/experiments.hpp"
#include "wpcn/maxmin.hpp"
#include "wpcn/oracle.hpp"
#include "wpcn/output.hpp"
#include "wpcn/sum_solvers.hpp"

namespace wpcn {

namespace {

namespace fs = std::filesystem;

ProblemKind problem_or_throw(const std::string& text) {
  const auto kind = parse_problem_kind(text);
  if (!kind) throw ConfigError("unknown problem '" + text + "' (expected p1..p4, optionally -sum or -maxmin)");
  return *kind;
}

struct Solved {
  SolveReport report;
  std::vector<Violation> violations;
};

// Solves one instance. P3 runs on the harvest-only reduction, P4 on the
// split by node type.
Solved solve_instance(ProblemKind kind, const NetworkInstance& net, const std::vector<NodeType>& types) {
  const bool sum = kind.objective == Objective::Sum;
  Solved s;
  switch (kind.problem) {
    case Problem::P1:
      s.report = sum ? solve_p1(net) : solve_p1_maxmin(net);
      s.violations = validate(net, s.report.allocation);
      break;
    case Problem::P2:
      s.report = sum ? solve_p2(net) : solve_p2_maxmin(net);
      s.violations = validate(net, s.report.allocation);
      break;
    case Problem::P3: {
      const NetworkInstance h = net.harvest_only();
      s.report = sum ? solve_p3(h) : solve_p3_maxmin(h);
      s.violations = validate(h, s.report.allocation);
      break;
    }
    case Problem::P4: {
      const HeteroInstance h = HeteroInstance::from_network(net, types);
      s.report = sum ? solve_p4(h) : solve_p4_maxmin(h);
      s.violations = validate(h, s.report.allocation);
      break;
    }
  }
  return s;
}

void write_file(const fs::path& path, const std::string& data) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + path.string());
  f << data;
  if (!f) throw ConfigError("write failed for " + path.string());
}

fs::path with_suffix(const fs::path& out, const std::string& suffix) {
  fs::path p = out;
  p.replace_extension();
  return fs::path(p.string() + suffix);
}

ChartMetric chart_metric(const std::string& name, const SweepResult& result) {
  if (name == "objective") return ChartMetric::Objective;
  if (name == "sum") return ChartMetric::SumRate;
  if (name == "min") return ChartMetric::MinRate;
  if (name == "jfi") return ChartMetric::Jfi;
  return result.spec.scenario == "fig4" ? ChartMetric::Jfi : ChartMetric::Objective;
}

int emit_sweep(const CliCommand& cmd, const SweepResult& result, std::ostream& out, std::ostream& err) {
  const std::string csv = sweep_csv(result);
  const ChartMetric metric = chart_metric(cmd.metric, result);
  if (cmd.out_path.empty()) {
    if (cmd.format == "both") throw ConfigError("--format both needs --out");
    out << (cmd.format == "svg" ? sweep_svg(result, metric) : csv);
  } else {
    const fs::path path(cmd.out_path);
    if (cmd.format == "svg") {
      write_file(path, sweep_svg(result, metric));
    } else {
      write_file(path, csv);
      if (cmd.format == "both") write_file(with_suffix(path, ".svg"), sweep_svg(result, metric));
    }
    write_file(with_suffix(path, ".manifest.json"), manifest_json(result));
    if (result.detail) write_file(with_suffix(path, ".alloc.csv"), detail_csv(result));
  }
  std::size_t failures = 0;
  for (const auto& r : result.rows) failures += r.failures;
  if (failures > 0) err << "warning: " << failures << " realization(s) failed; see the failures column\n";
  return kExitOk;
}

void apply_common(const CliCommand& cmd, ExperimentSpec& spec) {
  if (cmd.seed) spec.seed = *cmd.seed;
  if (cmd.realizations) spec.realizations = *cmd.realizations;
  if (!cmd.problems.empty()) {
    spec.problems.clear();
    for (const auto& p : cmd.problems) spec.problems.push_back(problem_or_throw(p));
  }
}

int run_solve(const CliCommand& cmd, std::ostream& out, std::ostream& err) {
  const Config cfg = load_config(cmd.config_path, cmd.overrides);
  const ProblemKind kind = problem_or_throw(cmd.problems.empty() ? "p1" : cmd.problems.front());
  const NetworkInstance net = instance_from_config(cfg, cmd.seed.value_or(42));
  const Solved s = solve_instance(kind, net, node_types(cfg.scenario));
  for (const auto& n : s.report.notes) err << "note: " << n << '\n';
  const std::string csv = report_csv(s.report, kind);
  if (cmd.out_path.empty()) {
    out << csv;
  } else {
    write_file(cmd.out_path, csv);
  }
  if (!s.violations.empty()) {
    for (const auto& v : s.violations) err << "violation: " << v.to_string() << '\n';
    return kExitValidation;
  }
  return kExitOk;
}

int run_certify(const CliCommand& cmd, std::ostream& out, std::ostream& err) {
  const Config cfg = load_config(cmd.config_path, cmd.overrides);
  const ProblemKind kind = problem_or_throw(cmd.problems.empty() ? "p1" : cmd.problems.front());
  if (!(cmd.rel_tol > 0.0)) throw ConfigError("--rel-tol must be positive");
  const NetworkInstance net = instance_from_config(cfg, cmd.seed.value_or(42));
  if (net.size() > kOracleMaxUsers) {
    throw ConfigError("certify supports at most " + std::to_string(kOracleMaxUsers) + " users");
  }
  const std::vector<NodeType> types = node_types(cfg.scenario);
  const Solved s = solve_instance(kind, net, types);
  Certificate cert;
  SolveReport oracle;
  if (kind.problem == Problem::P4) {
    const HeteroInstance h = HeteroInstance::from_network(net, types);
    oracle = grid_best(kind.objective, h);
    cert = certify(h, kind.objective, s.report, oracle, cmd.rel_tol);
  } else {
    const NetworkInstance n = kind.problem == Problem::P3 ? net.harvest_only() : net;
    oracle = grid_best(kind, n);
    cert = certify(n, kind.objective, s.report, oracle, cmd.rel_tol);
  }
  out << "problem,objective,solver,oracle,margin,result\n"
      << to_string(kind.problem) << ',' << to_string(kind.objective) << ','
      << format_number(objective_value(s.report, kind.objective)) << ','
      << format_number(objective_value(oracle, kind.objective)) << ',' << format_number(cert.margin) << ','
      << (cert.pass ? "PASS" : "FAIL") << '\n';
  for (const auto& v : cert.violations) err << "violation: " << v.to_string() << '\n';
  return cert.pass ? kExitOk : kExitValidation;
}

int run_sweep_command(const CliCommand& cmd, std::ostream& out, std::ostream& err) {
  const Config cfg = load_config(cmd.config_path, cmd.overrides);
  ExperimentSpec spec = experiment_from_config(cfg);
  apply_common(cmd, spec);
  return emit_sweep(cmd, run_sweep(spec), out, err);
}

int run_figure(const CliCommand& cmd, std::ostream& out, std::ostream& err) {
  ExperimentSpec spec;
  try {
    spec = figure_preset(cmd.figure);
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  if (!cmd.overrides.empty()) throw ConfigError("--override applies to config files, not presets");
  apply_common(cmd, spec);
  return emit_sweep(cmd, run_sweep(spec), out, err);
}

}  // namespace

int run(const CliCommand& cmd, std::ostream& out, std::ostream& err) {
  try {
    if (cmd.format != "csv" && cmd.format != "svg" && cmd.format != "both") {
      throw ConfigError("--format must be csv, svg or both");
    }
    if (cmd.subcommand == "solve") return run_solve(cmd, out, err);
    if (cmd.subcommand == "certify") return run_certify(cmd, out, err);
    if (cmd.subcommand == "sweep") return run_sweep_command(cmd, out, err);
    if (cmd.subcommand == "figure") return run_figure(cmd, out, err);
    throw ConfigError("unknown subcommand '" + cmd.subcommand + "'");
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DomainError& e) {
    // Instance-level domain problems (missing E_max for P4, ...) are input errors.
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Throughput optimization for harvest-then-transmit networks"};
  app.require_subcommand(1);
  CliCommand cmd;
  std::uint64_t seed = 0;
  std::size_t realizations = 0;

  auto add_common = [&](CLI::App* sub, bool sweep_like) {
    sub->add_option("--seed", seed, "Random seed");
    sub->add_option("--out", cmd.out_path, "Output file (default: standard output)");
    if (sweep_like) {
      sub->add_option("--realizations", realizations, "Channel realizations per sweep point")
          ->check(CLI::PositiveNumber);
      sub->add_option("--format", cmd.format, "csv, svg or both")
          ->check(CLI::IsMember({"csv", "svg", "both"}));
      sub->add_option("--metric", cmd.metric, "Chart metric: auto, objective, sum, min, jfi")
          ->check(CLI::IsMember({"auto", "objective", "sum", "min", "jfi"}));
      sub->add_option("--problem", cmd.problems, "Problems to run, e.g. p1,p3-maxmin")->delimiter(',');
    } else {
      sub->add_option("--problem", cmd.problems, "Problem, e.g. p1 or p4-maxmin")->expected(1);
    }
  };

  auto* solve = app.add_subcommand("solve", "Solve one instance from a config file");
  solve->add_option("--config", cmd.config_path, "TOML config")->required();
  solve->add_option("--override", cmd.overrides, "key=value override (repeatable)");
  add_common(solve, false);

  auto* sweep = app.add_subcommand("sweep", "Run the [sweep] section of a config file");
  sweep->add_option("--config", cmd.config_path, "TOML config")->required();
  sweep->add_option("--override", cmd.overrides, "key=value override (repeatable)");
  add_common(sweep, true);

  auto* figure = app.add_subcommand("figure", "Run a built-in figure preset");
  figure->add_option("name", cmd.figure, "Preset name")->required();
  add_common(figure, true);

  auto* cert = app.add_subcommand("certify", "Compare a solver with the grid oracle (K <= 3)");
  cert->add_option("--config", cmd.config_path, "TOML config")->required();
  cert->add_option("--override", cmd.overrides, "key=value override (repeatable)");
  cert->add_option("--rel-tol", cmd.rel_tol, "Relative tolerance")->check(CLI::PositiveNumber);
  add_common(cert, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }
  for (auto* sub : {solve, sweep, figure, cert}) {
    if (sub->parsed()) {
      cmd.subcommand = sub->get_name();
      if (sub->count("--seed")) cmd.seed = seed;
      if (sub->get_option_no_throw("--realizations") && sub->count("--realizations")) cmd.realizations = realizations;
    }
  }
  return run(cmd, out, err);
}

}  // namespace wpcn
