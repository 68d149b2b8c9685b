#include <cmath>
#include <limits>
#include <sstream>

#include "doctest.h"
#include "hcarleson/report.hpp"

using namespace hc;

TEST_CASE("non-finite numbers in JSON") {
  CHECK(number_json(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(number_json(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(number_json(std::nan("")) == "nan");
  CHECK(number_json(1.5) == 1.5);
}

TEST_CASE("CSV quoting and case rows") {
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_number(0.1) == "0.10000000000000001");
  VerdictReport r;
  r.cases.push_back({"f0@-1", -1, 1.0, 2.0, 0.5});
  r.cases.push_back({"x,y", 0, 0.0, 0.0, 0.0});
  std::ostringstream out;
  write_cases_csv(r, out);
  CHECK(out.str() == "case_id,lhs,rhs,ratio,level\r\nf0@-1,1,2,0.5,-1\r\n\"x,y\",0,0,0,0\r\n");
}

TEST_CASE("report JSON carries the verdict") {
  VerdictReport r;
  r.theorem_id = "T1/sufficiency";
  r.verdict = Verdict::kBounded;
  r.expected = Verdict::kBounded;
  const json j = report_to_json(r);
  CHECK(j["verdict"] == "bounded");
  CHECK(j["as_expected"] == true);
  CHECK(j["window_change"].is_null());
  CHECK(dump_json(j).back() == '\n');
}

TEST_CASE("plot data") {
  json res{{"sweep", {{"scales", {1.0, 2.0, 4.0}}, {"values", {1.0, 0.5, 0.25}}}}, {"kind", "omit"}};
  const PlotData p = plot_data(res);
  CHECK(p.slope == doctest::Approx(-1.0));
  CHECK(p.label == "omit");
  std::ostringstream out;
  write_plot_csv(p, out);
  CHECK(out.str().rfind("log_scale,log_value,fit\r\n", 0) == 0);
  CHECK_THROWS_AS(plot_data(json{{"verdict", "bounded"}}), ParameterError);
  CHECK_THROWS_AS(plot_data(json{{"sweep", {{"scales", json::array()}, {"values", json::array()}}}}), ParameterError);
}
