#include "wpcn/scalar.hpp"

#include <algorithm>
#include <cmath>

namespace wpcn {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Upper end of a bracket for f(1 + y) = target, starting from the small-target
// asymptote y ~ sqrt(2 target) or the large-target one y ~ target / ln target.
double excess_upper_bound(double target) {
  double guess = std::sqrt(2.0 * target);
  if (target > 2.0) guess = std::max(guess, target / std::log(target));
  const Bracket b = expand_bracket_upward(f_of_excess, target, 0.0, std::max(guess, 1e-300));
  return b.hi;
}

double excess_by_bisection(double target, double tol, int* iterations) {
  double lo = 0.0;
  double hi = excess_upper_bound(target);
  int it = 0;
  for (; it < kMaxRootIterations; ++it) {
    if (hi - lo <= std::max(0.25 * tol, 2.0 * kEps) * hi) break;
    // hi starts within a factor of two of the root, so plain halving reaches
    // full relative precision even for roots near 1e-150.
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (f_of_excess(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  if (iterations) *iterations = it;
  return 0.5 * (lo + hi);
}

double excess_by_newton(double target) {
  // f(1 + y) is convex and increasing, so Newton started right of the root
  // decreases monotonically onto it.
  double lo = 0.0;
  double y = excess_upper_bound(target);
  for (int it = 0; it < kMaxRootIterations; ++it) {
    const double g = f_of_excess(y) - target;
    if (g <= 0.0) return y;
    const double slope = std::log1p(y);
    double next = slope > 0.0 ? y - g / slope : 0.5 * (lo + y);
    if (!(next < y)) return y;  // no further progress in floating point
    if (!(next > lo)) next = 0.5 * (lo + y);
    if (y - next <= 2.0 * kEps * y) return next;
    y = next;
  }
  return y;
}

}  // namespace

double f_transcendental(double x) {
  if (x == 0.0) return 1.0;  // limit of x ln x
  if (x < 1.0 + 1e-8 && x >= 1.0) {
    const double d = x - 1.0;
    return 0.5 * d * d;
  }
  return x * std::log(x) - x + 1.0;
}

double f_of_excess(double y) {
  if (y < 1e-2) {
    // (1+y) ln(1+y) - y = sum_{n>=2} (-1)^n y^n / (n (n-1))
    double term = y * y;
    double sum = 0.0;
    for (int n = 2; n <= 12; ++n) {
      const double contribution = term / (n * (n - 1.0));
      sum += (n % 2 == 0) ? contribution : -contribution;
      term *= y;
    }
    return sum;
  }
  return (1.0 + y) * std::log1p(y) - y;
}

RootResult solve_f_equals(double target, double tol) {
  if (!(target >= 0.0) || !std::isfinite(target)) {
    throw DomainError("solve_f_equals: target must be finite and >= 0, got " + std::to_string(target));
  }
  if (target == 0.0) return {1.0, 0.0, 0};
  int iterations = 0;
  const double y = excess_by_bisection(target, tol, &iterations);
  const double x = 1.0 + y;
  return {x, f_of_excess(y) - target, iterations};
}

double solve_f_excess(double target, RootMethod method) {
  if (!(target >= 0.0) || !std::isfinite(target)) {
    throw DomainError("solve_f_excess: target must be finite and >= 0, got " + std::to_string(target));
  }
  if (target == 0.0) return 0.0;
  if (method == RootMethod::SafeguardedNewton) return excess_by_newton(target);
  return excess_by_bisection(target, kDefaultRootTol, nullptr);
}

}  // namespace wpcn
