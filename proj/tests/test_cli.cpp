#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "wpcn/cli.hpp"
#include "wpcn/config.hpp"
#include "wpcn/error.hpp"
#include "wpcn/output.hpp"
#include "wpcn/units.hpp"

using namespace wpcn;
namespace fs = std::filesystem;

namespace {

const char* kSingleUser = R"(
[network]
p_b_dbm = 30
sigma2_dbm_hz = -160
bandwidth_hz = 1e6
gamma_db = 9.8
fading = "none"

[[users]]
eta = 0.5
d_meters = 5
)";

const char* kTwoUsers = R"(
[network]
p_b_dbm = 30
sigma2_dbm_hz = -160
bandwidth_hz = 1e6
gamma_db = 9.8
e_max_joules = 2e-6

[[users]]
eta = 0.5
e_budget_joules = 3e-7
d_meters = 10
type = "harvest"

[[users]]
eta = 0.5
e_budget_joules = 3e-7
d_meters = 5
type = "legacy"

[sweep]
param = "beta"
values = [2, 3]
realizations = 8
seed = 3
problems = ["p1", "p2-sum", "p4-maxmin"]
)";

const char* kGammaOne = R"(
[network]
p_b_dbm = 30
sigma2_dbm_hz = -160
bandwidth_hz = 1e6
gamma_db = 9.8

[[users]]
eta = 0.5
alpha = 1.0
harvest_rate = 1.0
)";

fs::path scratch_dir() {
  const fs::path d = fs::temp_directory_path() / ("wpcn_cli_test_" + std::to_string(::getpid()));
  fs::create_directories(d);
  return d;
}

fs::path write(const std::string& name, const std::string& text) {
  const fs::path p = scratch_dir() / name;
  std::ofstream(p) << text;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int cli(std::vector<std::string> args, std::string* out_text = nullptr, std::string* err_text = nullptr) {
  args.insert(args.begin(), "wpcn");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  if (out_text) *out_text = out.str();
  if (err_text) *err_text = err.str();
  return code;
}

std::string config_error(const std::string& text, std::vector<std::string> overrides = {}) {
  try {
    parse_config(text, overrides);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Config, MinimalSingleUser) {
  const Config c = parse_config(kSingleUser);
  const NetworkInstance net = instance_from_config(c, 1);
  const double g = 1e-3 * std::pow(5.0, -2.0);
  EXPECT_NEAR(net.alpha(0), g / (db_to_linear(9.8) * 1e-13), 1e-6 * net.alpha(0));
  EXPECT_DOUBLE_EQ(net.harvest_rate(0), 0.5 * 1.0 * g);
  EXPECT_FALSE(net.e_max().has_value());
}

TEST(Config, RejectsOutOfRangeEta) {
  std::string t = kSingleUser;
  t.replace(t.find("eta = 0.5"), 9, "eta = 1.5");
  const std::string msg = config_error(t);
  EXPECT_NE(msg.find("eta"), std::string::npos) << msg;
  EXPECT_NE(msg.find("line 10"), std::string::npos) << msg;
}

TEST(Config, RejectsUnknownKeys) {
  const std::string msg = config_error(std::string(kSingleUser) + "foo = 1\n");
  EXPECT_NE(msg.find("'foo'"), std::string::npos) << msg;
  EXPECT_NE(config_error(kSingleUser, {"network.bar=2"}).find("'bar'"), std::string::npos);
  EXPECT_NE(config_error(std::string(kSingleUser) + "[extra]\n").find("'extra'"), std::string::npos);
}

TEST(Config, ReportsParseErrorLines) {
  const std::string msg = config_error("[network]\np_b_dbm = \n");
  EXPECT_NE(msg.find("line 2"), std::string::npos) << msg;
}

TEST(Config, MissingAndMalformedFields) {
  std::string t = kSingleUser;
  t.erase(t.find("gamma_db = 9.8"), 14);
  EXPECT_NE(config_error(t).find("gamma_db"), std::string::npos);
  std::string mixed = kTwoUsers;
  mixed.replace(mixed.find("d_meters = 5"), 12, "alpha = 1.0\nharvest_rate = 1.0");
  EXPECT_NE(config_error(mixed).find("same channel description"), std::string::npos);
  EXPECT_NE(config_error(kSingleUser, {"users.0.type=robot"}).find("type"), std::string::npos);
  EXPECT_NE(config_error(kSingleUser, {"network.beta=\"x\""}).find("beta"), std::string::npos);
}

TEST(Config, OverridesAndSweep) {
  const Config c = parse_config(kTwoUsers, {"network.beta=3", "users.1.eta=0.4", "sweep.seed=11"});
  EXPECT_DOUBLE_EQ(c.scenario.channel.beta, 3.0);
  EXPECT_DOUBLE_EQ(c.scenario.users[1].eta, 0.4);
  const ExperimentSpec s = experiment_from_config(c);
  EXPECT_EQ(s.seed, 11u);
  EXPECT_EQ(s.realizations, 8u);
  ASSERT_EQ(s.problems.size(), 3u);
  EXPECT_EQ(s.problems[2], (ProblemKind{Problem::P4, Objective::Maxmin}));
  EXPECT_EQ(c.scenario.e_max_mode, EmaxMode::Fixed);
  EXPECT_THROW(experiment_from_config(parse_config(kSingleUser)), ConfigError);
}

TEST(Config, CoefficientUsersReproduceGamma) {
  const NetworkInstance net = instance_from_config(parse_config(kGammaOne), 0);
  EXPECT_NEAR(net.gamma(0), 1.0, 1e-12);
}

TEST(Output, NumberFormatting) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(-0.0), "0");
  EXPECT_EQ(format_number(3e-7), "3e-07");
  EXPECT_THROW(format_number(NAN), DomainError);
}

TEST(Output, CsvSvgManifest) {
  const ExperimentSpec s = experiment_from_config(parse_config(kTwoUsers));
  const SweepResult r = run_sweep(s);
  const std::string csv = sweep_csv(r);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), kSweepCsvHeader);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 2 * 3);
  EXPECT_EQ(csv, sweep_csv(run_sweep(s)));  // byte-identical rerun

  const std::string svg = sweep_svg(r);
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  std::size_t lines = 0;
  for (std::size_t p = svg.find("<polyline"); p != std::string::npos; p = svg.find("<polyline", p + 1)) ++lines;
  EXPECT_EQ(lines, 3u);

  const auto j = nlohmann::json::parse(manifest_json(r));
  EXPECT_EQ(j["seed"], 3);
  EXPECT_EQ(j["rows"], 6);
}

TEST(Cli, SolveAnalyticCase) {
  const fs::path cfg = write("gamma_one.toml", kGammaOne);
  std::string out;
  ASSERT_EQ(cli({"solve", "--config", cfg.string(), "--problem", "p3"}, &out), kExitOk);
  EXPECT_NE(out.find("P3,sum,0.63212055882"), std::string::npos) << out;
}

TEST(Cli, CertifyPasses) {
  const fs::path cfg = write("two.toml", kTwoUsers);
  std::string out;
  EXPECT_EQ(cli({"certify", "--config", cfg.string(), "--problem", "p1", "--rel-tol", "1e-3"}, &out), kExitOk);
  EXPECT_NE(out.find("PASS"), std::string::npos);
}

TEST(Cli, SweepWritesDeterministicFiles) {
  const fs::path cfg = write("sweep.toml", kTwoUsers);
  const fs::path a = scratch_dir() / "a.csv", b = scratch_dir() / "b.csv";
  ASSERT_EQ(cli({"sweep", "--config", cfg.string(), "--out", a.string(), "--format", "both"}), kExitOk);
  ASSERT_EQ(cli({"sweep", "--config", cfg.string(), "--out", b.string(), "--format", "both"}), kExitOk);
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_TRUE(fs::exists(scratch_dir() / "a.svg"));
  EXPECT_TRUE(fs::exists(scratch_dir() / "a.manifest.json"));
}

TEST(Cli, ExitCodes) {
  std::string err;
  EXPECT_EQ(cli({"solve", "--config", "/nonexistent.toml"}, nullptr, &err), kExitConfig);
  EXPECT_NE(err.find("config error"), std::string::npos);
  EXPECT_EQ(cli({"figure", "fig99"}), kExitConfig);
  EXPECT_EQ(cli({"bogus"}), kExitConfig);
  EXPECT_EQ(cli({"--help"}), kExitOk);
  const fs::path cfg = write("single.toml", kSingleUser);
  // P4 without an energy cap is an input problem.
  EXPECT_EQ(cli({"solve", "--config", cfg.string(), "--problem", "p4"}), kExitConfig);
  EXPECT_EQ(cli({"solve", "--config", cfg.string(), "--problem", "p9"}), kExitConfig);
  const fs::path big = write("big.toml", std::string(kSingleUser) + "[[users]]\neta = 0.5\nd_meters = 3\n"
                                                                      "[[users]]\neta = 0.5\nd_meters = 4\n"
                                                                      "[[users]]\neta = 0.5\nd_meters = 6\n");
  EXPECT_EQ(cli({"certify", "--config", big.string()}), kExitConfig);
}

TEST(Cli, FigureToStdout) {
  std::string out;
  ASSERT_EQ(cli({"figure", "fig4", "--realizations", "3", "--seed", "1"}, &out), kExitOk);
  EXPECT_EQ(out.substr(0, out.find('\n')), kSweepCsvHeader);
  EXPECT_NE(out.find(",3,1,0\n"), std::string::npos);
}
