#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "hcarleson/measures.hpp"
#include "hcarleson/verifiers.hpp"

namespace hc {

using json = nlohmann::json;

/// Version of the report layout; bumped whenever a field changes meaning.
inline constexpr const char* kReportSchema = "hcarleson-report/1";

std::string version_string();

/// JSON numbers cannot hold inf or nan; those become the strings "inf",
/// "-inf" and "nan".
json number_json(double x);

json report_to_json(const VerdictReport& r);
json carleson_to_json(const CarlesonReport& r, bool include_ratios = false);

/// Pretty-printed JSON with sorted keys and a trailing newline.
std::string dump_json(const json& j);

/// RFC 4180 field quoting.
std::string csv_field(const std::string& s);
std::string csv_number(double x);

/// Header case_id,lhs,rhs,ratio,level and one row per case.
void write_cases_csv(const VerdictReport& r, std::ostream& out);

struct PlotData {
  std::string label;
  std::vector<double> log_scale;
  std::vector<double> log_value;
  double slope = 0.0;
  double intercept = 0.0;
};

/// Plot rows for a report that carries a sweep: either result.sweep
/// {scales, values} or a Carleson level profile. Throws ParameterError for
/// anything else, including an empty sweep.
PlotData plot_data(const json& result);

/// Header log_scale,log_value,fit; the last column is the fitted line.
void write_plot_csv(const PlotData& p, std::ostream& out);

}  // namespace hc
