#pragma once

// Command-line driver: solve / sweep / figure / certify.
// Exit codes: 0 success, 1 validation failure, 2 config or usage error.
// Data goes to files or `out`; diagnostics go to `err`.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace wpcn {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitConfig = 2;

struct CliCommand {
  std::string subcommand;  // solve | sweep | figure | certify
  std::string config_path;
  std::string figure;  // preset name for `figure`
  std::vector<std::string> overrides;
  std::string out_path;  // empty: standard output
  std::string format = "csv";  // csv | svg | both
  std::string metric = "auto";  // auto | objective | sum | min | jfi
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> realizations;
  std::vector<std::string> problems;
  double rel_tol = 1e-3;
};

int run(const CliCommand& command, std::ostream& out, std::ostream& err);

/// Parses argv with CLI11 and runs the command.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace wpcn
