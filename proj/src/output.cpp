#include "wpcn/output.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

#include <json.hpp>

#include "wpcn/error.hpp"

namespace wpcn {

std::string format_number(double v) {
  if (!std::isfinite(v)) throw DomainError("refusing to serialize a non-finite number");
  if (v == 0.0) return "0";  // also folds -0
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string sweep_csv(const SweepResult& result) {
  std::string out = kSweepCsvHeader;
  out += '\n';
  for (const auto& r : result.rows) {
    out += to_string(r.swept_param) + ',' + format_number(r.value) + ',' + r.problem + ',' + to_string(r.objective) +
           ',' + format_number(r.mean_sum_rate) + ',' + format_number(r.mean_min_rate) + ',' +
           format_number(r.mean_jfi) + ',' + std::to_string(r.realizations) + ',' + std::to_string(r.seed) + ',' +
           std::to_string(r.failures) + '\n';
  }
  return out;
}

std::string detail_csv(const SweepResult& result) {
  if (!result.detail) return {};
  const DetailTable& d = result.detail.value();
  std::string out = "label";
  for (const auto& c : d.columns) out += ',' + c;
  out += '\n';
  for (std::size_t i = 0; i < d.rows.size(); ++i) {
    out += i < d.labels.size() ? d.labels[i] : std::string();
    for (double v : d.rows[i]) out += ',' + format_number(v);
    out += '\n';
  }
  return out;
}

std::string manifest_json(const SweepResult& result) {
  using nlohmann::json;
  const ExperimentSpec& s = result.spec;
  json j;
  j["scenario"] = s.scenario;
  j["swept_param"] = to_string(s.swept_param);
  j["values"] = s.values;
  if (s.series) j["series"] = {{"param", to_string(s.series->param)}, {"values", s.series->values}};
  j["realizations"] = s.realizations;
  j["seed"] = s.seed;
  json problems = json::array();
  for (const auto& p : s.problems) problems.push_back(to_string(p));
  j["problems"] = problems;
  json matched = json::array();
  for (const auto& m : result.matched) {
    matched.push_back(
        {{"value", m.value}, {"series", m.series}, {"objective", to_string(m.objective)}, {"e_max_joules", m.e_max}});
  }
  j["matched_e_max"] = matched;
  std::size_t failures = 0;
  for (const auto& r : result.rows) failures += r.failures;
  j["rows"] = result.rows.size();
  j["failures"] = failures;
  return j.dump(2) + "\n";
}

namespace {

double metric_value(const SweepRow& r, ChartMetric m) {
  switch (m) {
    case ChartMetric::SumRate: return r.mean_sum_rate;
    case ChartMetric::MinRate: return r.mean_min_rate;
    case ChartMetric::Jfi: return r.mean_jfi;
    case ChartMetric::Objective: break;
  }
  return r.objective == Objective::Sum ? r.mean_sum_rate : r.mean_min_rate;
}

std::string metric_label(ChartMetric m) {
  switch (m) {
    case ChartMetric::SumRate: return "mean sum rate (bits/s/Hz)";
    case ChartMetric::MinRate: return "mean min rate (bits/s/Hz)";
    case ChartMetric::Jfi: return "Jain fairness index";
    case ChartMetric::Objective: break;
  }
  return "mean objective (bits/s/Hz)";
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fixed(double v, int digits = 2) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(digits);
  os << v;
  return os.str();
}

std::string tick_label(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b",
                          "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#637939"};

}  // namespace

std::string sweep_svg(const SweepResult& result, ChartMetric metric, const std::string& title) {
  // Series in first-appearance order.
  std::vector<std::string> names;
  std::map<std::string, std::vector<std::pair<double, double>>> series;
  for (const auto& r : result.rows) {
    const std::string name = r.problem + (r.objective == Objective::Maxmin ? " maxmin" : "");
    if (!series.count(name)) names.push_back(name);
    if (r.realizations > 0) series[name].emplace_back(r.value, metric_value(r, metric));
  }
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  bool first = true;
  for (const auto& [name, pts] : series) {
    for (const auto& [x, y] : pts) {
      if (first) {
        x0 = x1 = x;
        y1 = y;
        first = false;
      }
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y1 = std::max(y1, y);
      y0 = std::min(y0, y);
    }
  }
  if (x1 <= x0) x1 = x0 + 1.0;
  if (y1 <= y0) y1 = y0 + 1.0;
  y1 += 0.05 * (y1 - y0);

  const double w = 760, h = 460, left = 70, right = 200, top = 40, bottom = 60;
  const double pw = w - left - right, ph = h - top - bottom;
  auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return top + ph - (y - y0) / (y1 - y0) * ph; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" viewBox=\"0 0 " << w
     << ' ' << h << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  const std::string heading = title.empty() ? result.spec.scenario : title;
  os << "<text x=\"" << left + pw / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << escape_xml(heading)
     << "</text>\n";
  os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double xv = x0 + (x1 - x0) * i / 5.0;
    const double yv = y0 + (y1 - y0) * i / 5.0;
    os << "<line x1=\"" << fixed(px(xv)) << "\" y1=\"" << top + ph << "\" x2=\"" << fixed(px(xv)) << "\" y2=\""
       << top + ph + 5 << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << fixed(px(xv)) << "\" y=\"" << top + ph + 20 << "\" text-anchor=\"middle\">"
       << tick_label(xv) << "</text>\n";
    os << "<line x1=\"" << left - 5 << "\" y1=\"" << fixed(py(yv)) << "\" x2=\"" << left + pw << "\" y2=\""
       << fixed(py(yv)) << "\" stroke=\"#dddddd\"/>\n";
    os << "<text x=\"" << left - 8 << "\" y=\"" << fixed(py(yv) + 4) << "\" text-anchor=\"end\">" << tick_label(yv)
       << "</text>\n";
  }
  os << "<text x=\"" << left + pw / 2 << "\" y=\"" << h - 15 << "\" text-anchor=\"middle\">"
     << escape_xml(to_string(result.spec.swept_param)) << "</text>\n";
  os << "<text transform=\"translate(18," << top + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
     << escape_xml(metric_label(metric)) << "</text>\n";

  for (std::size_t s = 0; s < names.size(); ++s) {
    const char* color = kPalette[s % (sizeof kPalette / sizeof kPalette[0])];
    const auto& pts = series[names[s]];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      os << (i ? " " : "") << fixed(px(pts[i].first)) << ',' << fixed(py(pts[i].second));
    }
    os << "\"/>\n";
    for (const auto& [x, y] : pts) {
      os << "<circle cx=\"" << fixed(px(x)) << "\" cy=\"" << fixed(py(y)) << "\" r=\"3\" fill=\"" << color
         << "\"/>\n";
    }
    const double ly = top + 10 + 18.0 * static_cast<double>(s);
    os << "<line x1=\"" << left + pw + 12 << "\" y1=\"" << ly << "\" x2=\"" << left + pw + 32 << "\" y2=\"" << ly
       << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << left + pw + 38 << "\" y=\"" << ly + 4 << "\">" << escape_xml(names[s]) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string report_csv(const SolveReport& report, ProblemKind kind) {
  std::string out =
      "problem,objective,tau0,sum_rate_bps_hz,min_rate_bps_hz,jfi,iterations,residual,converged,shared_energy_joules\n";
  out += to_string(kind.problem) + ',' + to_string(kind.objective) + ',' + format_number(report.allocation.tau0) +
         ',' + format_number(report.sum_rate) + ',' + format_number(report.min_rate) + ',' +
         format_number(report.jfi) + ',' + std::to_string(report.iterations) + ',' +
         format_number(report.residual) + ',' + (report.converged ? "1" : "0") + ',' +
         (report.allocation.shared_energy ? format_number(*report.allocation.shared_energy) : std::string()) + '\n';
  out += "\nuser,tau,energy_joules,rate_bps_hz\n";
  const Allocation& a = report.allocation;
  for (std::size_t i = 0; i < a.tau.size(); ++i) {
    const double e = i < a.energy.size() ? a.energy[i] : 0.0;
    const double r = i < report.per_user_rate.size() ? report.per_user_rate[i] : 0.0;
    out += std::to_string(i) + ',' + format_number(a.tau[i]) + ',' + format_number(e) + ',' + format_number(r) + '\n';
  }
  return out;
}

}  // namespace wpcn
