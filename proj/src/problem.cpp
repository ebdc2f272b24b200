#include "wpcn/problem.hpp"

#include <algorithm>
#include <cctype>

namespace wpcn {

std::string to_string(Problem p) {
  switch (p) {
    case Problem::P1: return "P1";
    case Problem::P2: return "P2";
    case Problem::P3: return "P3";
    case Problem::P4: return "P4";
  }
  return "?";
}

std::string to_string(Objective o) { return o == Objective::Sum ? "sum" : "maxmin"; }

std::string to_string(ProblemKind k) { return to_string(k.problem) + "-" + to_string(k.objective); }

std::optional<Problem> parse_problem(std::string_view text) {
  if (text.size() != 2 || (text[0] != 'p' && text[0] != 'P')) return std::nullopt;
  switch (text[1]) {
    case '1': return Problem::P1;
    case '2': return Problem::P2;
    case '3': return Problem::P3;
    case '4': return Problem::P4;
    default: return std::nullopt;
  }
}

std::optional<ProblemKind> parse_problem_kind(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  const auto sep = lower.find_first_of("-_");
  const auto p = parse_problem(std::string_view(lower).substr(0, sep));
  if (!p) return std::nullopt;
  if (sep == std::string::npos) return ProblemKind{*p, Objective::Sum};
  const std::string rest = lower.substr(sep + 1);
  if (rest == "sum") return ProblemKind{*p, Objective::Sum};
  if (rest == "maxmin") return ProblemKind{*p, Objective::Maxmin};
  return std::nullopt;
}

}  // namespace wpcn
