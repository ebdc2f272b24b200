#pragma once

// Serialization of sweep results and solve reports. Numbers are written with
// the shortest round-trip representation, so identical results give
// byte-identical files.

#include <string>

#include "wpcn/experiments.hpp"
#include "wpcn/model.hpp"
#include "wpcn/problem.hpp"

namespace wpcn {

inline constexpr const char* kSweepCsvHeader =
    "swept_param,value,problem,objective,mean_sum_rate_bps_hz,mean_min_rate_bps_hz,mean_jfi,realizations,seed,"
    "failures";

std::string format_number(double v);

std::string sweep_csv(const SweepResult& result);

/// Allocation detail of the E_max regime sweep (empty string when absent).
std::string detail_csv(const SweepResult& result);

/// Spec echo, matched E_max values and failure totals as JSON.
std::string manifest_json(const SweepResult& result);

enum class ChartMetric { Objective, SumRate, MinRate, Jfi };

/// Self-contained SVG line chart, one polyline per (problem, objective) row
/// label. Objective plots the sum rate for sum rows and the min rate for
/// max-min rows.
std::string sweep_svg(const SweepResult& result, ChartMetric metric = ChartMetric::Objective,
                      const std::string& title = "");

/// Summary row plus one row per user.
std::string report_csv(const SolveReport& report, ProblemKind kind);

}  // namespace wpcn
