#pragma once

// Problem identifiers shared by the solvers, oracle, experiments and CLI.
//   P1: supply + harvesting (general), P2: supply only (tau0 = 0),
//   P3: harvesting only, P4: harvest-only nodes mixed with legacy nodes.

#include <optional>
#include <string>
#include <string_view>

namespace wpcn {

enum class Problem { P1, P2, P3, P4 };
enum class Objective { Sum, Maxmin };

struct ProblemKind {
  Problem problem = Problem::P1;
  Objective objective = Objective::Sum;
  bool operator==(const ProblemKind&) const = default;
};

std::string to_string(Problem p);
std::string to_string(Objective o);
/// "P1", "P1-sum", "p1-maxmin", ...
std::string to_string(ProblemKind k);

std::optional<Problem> parse_problem(std::string_view text);
/// Accepts "p3", "P3-sum", "p3-maxmin", "p3_maxmin". A bare problem name means sum.
std::optional<ProblemKind> parse_problem_kind(std::string_view text);

}  // namespace wpcn
