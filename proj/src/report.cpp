#include "hcarleson/report.hpp"

#include <fmt/format.h>

#include <cmath>
#include <ostream>

namespace hc {

#ifndef HC_VERSION
#define HC_VERSION "0.0.0"
#endif

std::string version_string() { return HC_VERSION; }

json number_json(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

namespace {

json numbers(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(number_json(x));
  return a;
}

}  // namespace

json report_to_json(const VerdictReport& r) {
  json cases = json::array();
  for (const CaseRecord& c : r.cases) {
    cases.push_back({{"id", c.id},
                     {"level", c.level},
                     {"lhs", number_json(c.lhs)},
                     {"rhs", number_json(c.rhs)},
                     {"ratio", number_json(c.ratio)}});
  }
  json j{{"theorem_id", r.theorem_id},
         {"params", r.params},
         {"window", r.window},
         {"family", r.family},
         {"cases", cases},
         {"kappa", number_json(r.kappa)},
         {"sup_ratio", number_json(r.sup_ratio)},
         {"min_ratio", number_json(r.min_ratio)},
         {"spread", number_json(r.spread)},
         {"levels", r.levels},
         {"level_max", numbers(r.level_max)},
         {"trend", numbers(r.trend)},
         {"verdict", verdict_name(r.verdict)},
         {"expected", r.expected ? json(verdict_name(*r.expected)) : json(nullptr)},
         {"as_expected", r.as_expected()},
         {"trend_tol", r.trend_tol},
         {"growth_floor", number_json(r.growth_floor)},
         {"sustained_levels", r.sustained_levels},
         {"window_change", r.window_change ? number_json(*r.window_change) : json(nullptr)},
         {"tolerance_met", r.tolerance_met},
         {"flags", r.flags},
         {"extra", r.extra}};
  return j;
}

json carleson_to_json(const CarlesonReport& r, bool include_ratios) {
  json j{{"exponent", r.exponent},
         {"sup_ratio", number_json(r.sup_ratio)},
         {"argmax", r.argmax},
         {"levels", r.levels},
         {"level_max", numbers(r.level_max)},
         {"trend", numbers(r.trend)}};
  if (include_ratios) j["ratios"] = numbers(r.ratios);
  return j;
}

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string csv_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return fmt::format("{:.17g}", x);
}

void write_cases_csv(const VerdictReport& r, std::ostream& out) {
  out << "case_id,lhs,rhs,ratio,level\r\n";
  for (const CaseRecord& c : r.cases) {
    out << csv_field(c.id) << ',' << csv_number(c.lhs) << ',' << csv_number(c.rhs) << ',' << csv_number(c.ratio)
        << ',' << c.level << "\r\n";
  }
}

PlotData plot_data(const json& result) {
  PlotData p;
  std::vector<double> scales;
  std::vector<double> values;
  if (result.contains("extra") && result["extra"].contains("sweep")) {
    const json& s = result["extra"]["sweep"];
    scales = s.at("scales").get<std::vector<double>>();
    values = s.at("values").get<std::vector<double>>();
    p.label = result.value("theorem_id", "sweep");
  } else if (result.contains("sweep")) {
    scales = result["sweep"].at("scales").get<std::vector<double>>();
    values = result["sweep"].at("values").get<std::vector<double>>();
    p.label = result.value("kind", "sweep");
  } else if (result.contains("carleson")) {
    const json& c = result["carleson"];
    const auto levels = c.at("levels").get<std::vector<int>>();
    for (std::size_t i = 0; i < levels.size(); ++i) {
      const json& v = c.at("level_max")[i];
      if (!v.is_number()) continue;
      scales.push_back(1.5 * std::ldexp(1.0, levels[i]));
      values.push_back(v.get<double>());
    }
    p.label = "carleson";
  } else {
    throw ParameterError("plot data needs a report that contains a sweep");
  }
  if (scales.empty() || scales.size() != values.size()) throw ParameterError("plot data: the sweep is empty");
  std::vector<double> sc, va;
  for (std::size_t i = 0; i < scales.size(); ++i) {
    if (!(scales[i] > 0.0) || !(values[i] > 0.0)) continue;
    sc.push_back(scales[i]);
    va.push_back(values[i]);
    p.log_scale.push_back(std::log(scales[i]));
    p.log_value.push_back(std::log(values[i]));
  }
  if (p.log_scale.empty()) throw ParameterError("plot data: the sweep has no positive values");
  if (sc.size() >= 3) {
    const SlopeFit fit = fit_power_law(sc, va);
    p.slope = fit.slope;
    p.intercept = fit.intercept;
  }
  return p;
}

void write_plot_csv(const PlotData& p, std::ostream& out) {
  out << "log_scale,log_value,fit\r\n";
  for (std::size_t i = 0; i < p.log_scale.size(); ++i) {
    out << csv_number(p.log_scale[i]) << ',' << csv_number(p.log_value[i]) << ','
        << csv_number(p.intercept + p.slope * p.log_scale[i]) << "\r\n";
  }
}

}  // namespace hc
