#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "hcarleson/errors.hpp"
#include "hcarleson/geometry.hpp"
#include "hcarleson/quadrature.hpp"
#include "hcarleson/verifiers.hpp"

namespace hc {

using json = nlohmann::json;

/// Schema violation; the message starts with the JSON path of the offending
/// entry, e.g. "$.tasks[1].params.p: expected a number".
class ConfigError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

/// One verdict a task contributes to the exit status.
struct TaskCheck {
  std::string label;
  Verdict verdict = Verdict::kInconclusive;
  std::optional<Verdict> expected;

  /// exact_pass always passes; bounded and diverging pass when they match
  /// the expectation (or none is set); inconclusive and fail never pass.
  bool ok() const;
};

struct TaskOutput {
  json result = json::object();
  std::vector<TaskCheck> checks;
  /// Extra files as (suffix, content), written next to the JSON report.
  std::vector<std::pair<std::string, std::string>> files;
  /// Per-case rows for the CSV format.
  std::optional<VerdictReport> cases;
};

struct Task {
  std::string name;
  std::string type;
  std::function<TaskOutput()> run;
};

struct RunConfig {
  Window window;
  QuadratureConfig quad;
  std::uint64_t seed = 1;
  std::string directory = "reports";
  std::vector<std::string> formats{"json"};
  /// The input with every default filled in; embedded in each report.
  json resolved = json::object();
  std::vector<Task> tasks;
};

/// Validates the whole config and binds every task. No numerical work happens
/// here; throws ConfigError naming the failing path.
RunConfig parse_run_config(const json& root);

struct RunOptions {
  std::optional<std::string> out_dir;
  bool verbose = false;
};

struct RunResult {
  int exit_code = 0;
  std::vector<std::string> files;
  std::string error;
};

/// Runs the tasks in order. Exit code 0 when every check passes, 1 on a
/// verdict mismatch, 2 on a configuration or evaluation error.
RunResult run(const RunConfig& cfg, const RunOptions& opts, std::ostream& out, std::ostream& err);

/// Reads, parses and runs a config file; parse errors map to exit code 2.
RunResult run_config_file(const std::string& path, const RunOptions& opts, std::ostream& out, std::ostream& err);

/// Human-readable list of theorem, lemma and task identifiers.
std::string list_theorems();

}  // namespace hc
