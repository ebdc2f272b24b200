#pragma once

// Bracketed scalar root finding: the transcendental equation
// x ln x - x + 1 = A that drives every closed-form time allocation, plus
// generic monotone bisection and upward bracket expansion.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "wpcn/error.hpp"

namespace wpcn {

inline constexpr int kMaxRootIterations = 200;
inline constexpr double kDefaultRootTol = 1e-12;

struct Bracket {
  double lo = 0.0;
  double hi = 0.0;
  double f_lo = 0.0;
  double f_hi = 0.0;
};

struct RootResult {
  double root = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

enum class RootMethod {
  Bisection,
  /// Newton iterates from the right of the root, falling back to bisection
  /// whenever a step leaves the bracket. Used in solver inner loops.
  SafeguardedNewton,
};

/// f(x) = x ln x - x + 1, strictly increasing on [1, inf) with f(1) = 0.
double f_transcendental(double x);

/// f(1 + y), accurate for tiny y (series below 1e-2).
double f_of_excess(double y);

/// Unique x >= 1 with f(x) = target. Throws DomainError for target < 0.
RootResult solve_f_equals(double target, double tol = kDefaultRootTol);

/// The excess y = x - 1 of solve_f_equals, resolved to full relative
/// precision (matters when the target is tiny and x is close to 1).
double solve_f_excess(double target, RootMethod method = RootMethod::Bisection);

/// Evaluates f at both ends of [lo, hi].
template <class F>
Bracket make_bracket(F&& f, double lo, double hi) {
  return Bracket{lo, hi, f(lo), f(hi)};
}

/// Root of a monotone f inside `b`. Stops when |f(root)| <= tol or the
/// bracket is narrower than tol * max(1, |root|).
template <class F>
RootResult bisect_monotone(F&& f, Bracket b, double tol = kDefaultRootTol) {
  if (!(b.lo <= b.hi)) throw BracketError("bisect_monotone: lo > hi");
  if (!std::isfinite(b.f_lo) || !std::isfinite(b.f_hi)) {
    throw EvaluationError("bisect_monotone: non-finite function value at bracket end");
  }
  if (b.f_lo == 0.0) return {b.lo, 0.0, 0};
  if (b.f_hi == 0.0) return {b.hi, 0.0, 0};
  if ((b.f_lo < 0.0) == (b.f_hi < 0.0)) {
    throw BracketError("bisect_monotone: no sign change on [" + std::to_string(b.lo) + ", " +
                       std::to_string(b.hi) + "]");
  }
  const bool increasing = b.f_lo < 0.0;
  double lo = b.lo;
  double hi = b.hi;
  double mid = 0.5 * (lo + hi);
  double f_mid = f(mid);
  int it = 1;
  for (; it < kMaxRootIterations; ++it) {
    if (!std::isfinite(f_mid)) throw EvaluationError("bisect_monotone: non-finite f(" + std::to_string(mid) + ")");
    if (std::abs(f_mid) <= tol || (hi - lo) <= tol * std::max(1.0, std::abs(mid))) break;
    if ((f_mid < 0.0) == increasing) {
      lo = mid;
    } else {
      hi = mid;
    }
    mid = 0.5 * (lo + hi);
    f_mid = f(mid);
  }
  if (!std::isfinite(f_mid)) throw EvaluationError("bisect_monotone: non-finite f(" + std::to_string(mid) + ")");
  return {mid, f_mid, it};
}

/// Doubles `hi_start` (> 0) until f(hi) >= target. The returned bracket holds the
/// values f - target at both ends; lo is kept at the caller's lower end.
/// A target already met at `lo` yields the degenerate bracket [lo, lo].
template <class F>
Bracket expand_bracket_upward(F&& f, double target, double lo, double hi_start) {
  const double f_lo = f(lo) - target;
  if (!std::isfinite(f_lo)) throw EvaluationError("expand_bracket_upward: non-finite f(lo)");
  if (f_lo == 0.0) return {lo, lo, 0.0, 0.0};
  if (f_lo > 0.0) throw BracketError("expand_bracket_upward: f(lo) already exceeds target");
  if (!(hi_start > 0.0) || !(hi_start > lo)) {
    throw BracketError("expand_bracket_upward: hi_start must be positive and above lo");
  }
  double hi = hi_start;
  for (int k = 0; k <= kMaxRootIterations; ++k) {
    const double f_hi = f(hi) - target;
    if (std::isnan(f_hi)) throw EvaluationError("expand_bracket_upward: NaN at hi");
    if (f_hi >= 0.0) return {lo, hi, f_lo, f_hi};
    hi *= 2.0;
  }
  throw UnboundedRootError("expand_bracket_upward: doubling limit exceeded");
}

/// Root of an increasing continuous f with f(lo) <= 0 <= f(hi), by the
/// Illinois variant of regula falsi with a bisection step every few
/// iterations. Stops once |f| <= f_tol or the bracket is narrower than
/// x_rel_tol relative. Returns the final bracket (lo stays on the
/// non-positive side).
template <class F>
Bracket illinois_increasing(F&& f, Bracket b, double x_rel_tol, double f_tol = 0.0,
                            int max_iters = kMaxRootIterations) {
  if (!(b.lo <= b.hi)) throw BracketError("illinois_increasing: lo > hi");
  if (!(b.f_lo <= 0.0) || !(b.f_hi >= 0.0)) throw BracketError("illinois_increasing: no sign change");
  int side = 0;
  for (int it = 0; it < max_iters; ++it) {
    if (b.f_lo == 0.0) return {b.lo, b.lo, 0.0, 0.0};
    if (b.f_hi == 0.0) return {b.hi, b.hi, 0.0, 0.0};
    if (b.hi - b.lo <= x_rel_tol * std::max(std::abs(b.lo), std::abs(b.hi))) break;
    double x = 0.5 * (b.lo + b.hi);
    if (it % 6 != 5) {
      const double secant = b.lo - b.f_lo * (b.hi - b.lo) / (b.f_hi - b.f_lo);
      if (secant > b.lo && secant < b.hi) x = secant;
    }
    if (!(x > b.lo && x < b.hi)) break;
    const double fx = f(x);
    if (std::isnan(fx)) throw EvaluationError("illinois_increasing: NaN");
    if (std::abs(fx) <= f_tol) return {x, x, fx, fx};
    if (fx <= 0.0) {
      b.lo = x;
      b.f_lo = fx;
      if (side == -1) b.f_hi *= 0.5;
      side = -1;
    } else {
      b.hi = x;
      b.f_hi = fx;
      if (side == 1) b.f_lo *= 0.5;
      side = 1;
    }
  }
  return b;
}

struct LineSearchResult {
  double x = 0.0;
  double value = 0.0;
  int evaluations = 0;
  /// Final bracket width around x.
  double width = 0.0;
  /// Best value seen after each evaluation (non-decreasing).
  std::vector<double> incumbent_trace;
};

/// Maximizes a concave function on [lo, hi]: `probes` + 1 evenly spaced
/// evaluations locate the peak cell, then golden-section search refines it
/// until the bracket is narrower than x_tol.
template <class F>
LineSearchResult maximize_concave(F&& f, double lo, double hi, int probes, double x_tol,
                                  int max_golden_iters = kMaxRootIterations) {
  if (!(lo <= hi)) throw BracketError("maximize_concave: lo > hi");
  if (probes < 2) probes = 2;
  LineSearchResult out;
  double best_x = lo;
  double best_v = -std::numeric_limits<double>::infinity();
  auto eval = [&](double x) {
    const double v = f(x);
    if (std::isnan(v)) throw EvaluationError("maximize_concave: NaN objective");
    ++out.evaluations;
    if (v > best_v) {
      best_v = v;
      best_x = x;
    }
    out.incumbent_trace.push_back(best_v);
    return v;
  };
  if (hi == lo) {
    eval(lo);
    out.x = best_x;
    out.value = best_v;
    return out;
  }
  const double step = (hi - lo) / probes;
  std::size_t k_best = 0;
  double v_best_probe = -std::numeric_limits<double>::infinity();
  for (int k = 0; k <= probes; ++k) {
    const double x = (k == probes) ? hi : lo + step * k;
    const double v = eval(x);
    if (v > v_best_probe) {
      v_best_probe = v;
      k_best = static_cast<std::size_t>(k);
    }
  }
  double a = k_best == 0 ? lo : lo + step * (static_cast<double>(k_best) - 1.0);
  double b = static_cast<int>(k_best) >= probes ? hi : std::min(hi, lo + step * (static_cast<double>(k_best) + 1.0));
  constexpr double kInvPhi = 0.6180339887498949;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = eval(c);
  double fd = eval(d);
  for (int it = 0; it < max_golden_iters && (b - a) > x_tol; ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = eval(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = eval(d);
    }
  }
  out.x = best_x;
  out.value = best_v;
  out.width = b - a;
  return out;
}

}  // namespace wpcn
