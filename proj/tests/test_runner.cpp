#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "hcarleson/runner.hpp"

using namespace hc;
namespace fs = std::filesystem;

namespace {

json base_config() {
  return json::parse(R"({
    "window": {"n": 2, "level_range": [-2, 0], "x_half_width": 1},
    "quadrature": {"nodes": 2, "depth": 2, "rel_tol": 1e-2},
    "tasks": [
      {"type": "decompose"},
      {"type": "carleson", "name": "flat", "measure": {"kind": "m_lambda", "gamma": 3}, "exponent": 6,
       "expect": "bounded"}
    ]
  })");
}

std::string config_error(const json& j) {
  try {
    parse_run_config(j);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("hcarleson_test_" + name);
  fs::remove_all(p);
  return p;
}

int cli(const std::string& args) {
  const int rc = std::system((std::string(HC_CLI_PATH) + " " + args + " > /dev/null 2>&1").c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

TEST_CASE("defaults are resolved into the config") {
  const RunConfig cfg = parse_run_config(base_config());
  REQUIRE(cfg.tasks.size() == 2);
  CHECK(cfg.tasks[0].name == "00_decompose");
  CHECK(cfg.resolved["seed"] == 1);
  CHECK(cfg.resolved["output"]["formats"] == json::array({"json"}));
  CHECK(cfg.resolved["tasks"][1]["trend_tol"] == 0.1);
}

TEST_CASE("schema errors name the path") {
  json j = base_config();
  j["tasks"][1]["bogus"] = 1;
  CHECK(config_error(j) == "$.tasks[1].bogus: unknown key");
  j = base_config();
  j["tasks"][1].erase("measure");
  CHECK(config_error(j) == "$.tasks[1].measure: required key missing");
  j = base_config();
  j["quadrature"]["nodes"] = "many";
  CHECK(config_error(j) == "$.quadrature.nodes: expected an integer");
  j = base_config();
  j["window"]["x_half_width"] = 1.5;
  CHECK(config_error(j).rfind("$.window: ", 0) == 0);
  j = base_config();
  j["tasks"][1]["name"] = "00_decompose";
  CHECK(config_error(j).find("duplicate task name") != std::string::npos);
  j = base_config();
  j["tasks"][1]["name"] = "../escape";
  CHECK(config_error(j).rfind("$.tasks[1].name", 0) == 0);
  j = base_config();
  j["output"] = {{"formats", {"xml"}}};
  CHECK(config_error(j) == "$.output.formats[0]: must be \"json\" or \"csv\"");
  j = base_config();
  j["tasks"] = json::array();
  CHECK(config_error(j) == "$.tasks: expected a nonempty array");
  j = base_config();
  j["tasks"][0] = {{"type", "norm"}, {"norm", "A"}, {"p", 2}, {"q", 2},
                   {"function", {{"kind", "test"}, {"w", {0, 0, 1}}, {"l", 2}}}};
  CHECK(config_error(j) == "$.tasks[0].q: not used by the A norm");
  j = base_config();
  j["tasks"][0] = {{"type", "verify"}, {"mode", "theorem7"}, {"p", 2}, {"q", 1}, {"alpha", 0.5},
                   {"measure", {{"kind", "zero"}}}};
  CHECK(config_error(j).find("constraint violated: 0 < p < q") != std::string::npos);
  j = base_config();
  j["tasks"][0] = {{"type", "verify"}, {"mode", "necessity"}, {"theorem", "T8"}, {"epsilon", 0},
                   {"params", {{"p", 2}, {"q", 4}}}};
  CHECK(config_error(j) == "$.tasks[0].epsilon: constraint violated: epsilon > 0");
}

TEST_CASE("run writes reports and maps verdicts to exit codes") {
  const fs::path dir = scratch("run");
  std::ostringstream out, err;
  RunOptions opts;
  opts.out_dir = dir.string();
  RunResult r = run(parse_run_config(base_config()), opts, out, err);
  CHECK(r.exit_code == 0);
  CHECK(fs::exists(dir / "00_decompose.json"));
  CHECK(fs::exists(dir / "00_decompose.cubes.csv"));
  CHECK(fs::exists(dir / "flat.plot.csv"));
  const json rep = json::parse(slurp(dir / "flat.json"));
  CHECK(rep["schema"] == "hcarleson-report/1");
  CHECK(rep["status"]["ok"] == true);
  CHECK(rep["result"]["verdict"] == "bounded");
  CHECK(rep["config"]["tasks"][1]["name"] == "flat");

  json j = base_config();
  j["tasks"][1]["expect"] = "diverging";
  r = run(parse_run_config(j), opts, out, err);
  CHECK(r.exit_code == 1);
}

TEST_CASE("reports are byte-identical across runs") {
  json j = base_config();
  j["output"] = {{"formats", {"json", "csv"}}};
  j["tasks"].push_back(json::parse(R"({"type": "verify", "mode": "equivalence", "lemma": "dis"})"));
  const RunConfig cfg = parse_run_config(j);
  std::ostringstream out, err;
  RunOptions a, b;
  a.out_dir = scratch("rep_a").string();
  b.out_dir = scratch("rep_b").string();
  const RunResult ra = run(cfg, a, out, err);
  const RunResult rb = run(cfg, b, out, err);
  REQUIRE(ra.files.size() == rb.files.size());
  for (std::size_t i = 0; i < ra.files.size(); ++i) {
    CHECK(fs::path(ra.files[i]).filename() == fs::path(rb.files[i]).filename());
    CHECK(slurp(ra.files[i]) == slurp(rb.files[i]));
  }
}

TEST_CASE("command line exit codes") {
  const fs::path dir = scratch("cli");
  fs::create_directories(dir);
  const auto write = [&](const std::string& name, const json& j) {
    std::ofstream(dir / name) << j.dump();
    return (dir / name).string();
  };
  const std::string good = write("good.json", base_config());
  json bad_verdict = base_config();
  bad_verdict["tasks"][1]["expect"] = "diverging";
  const std::string mismatch = write("mismatch.json", bad_verdict);
  json bad = base_config();
  bad["tasks"][0] = {{"type", "verify"}, {"mode", "theorem7"}, {"p", 3}, {"q", 2}, {"alpha", 0.5},
                     {"measure", {{"kind", "zero"}}}};
  const std::string invalid = write("invalid.json", bad);
  const std::string out = (dir / "reports").string();
  CHECK(cli("--config " + good + " --out " + out) == 0);
  CHECK(cli("--config " + mismatch + " --out " + out) == 1);
  CHECK(cli("--config " + invalid + " --out " + out) == 2);
  CHECK(cli("--list-theorems") == 0);
  CHECK(cli("--no-such-flag") == 2);
  CHECK(cli("") == 2);
  const std::string msg_file = (dir / "msg.txt").string();
  std::system((std::string(HC_CLI_PATH) + " --config " + invalid + " --out " + out + " 2> " + msg_file).c_str());
  CHECK(slurp(msg_file).find("0 < p < q") != std::string::npos);
}
