#include <iostream>

#include "CLI11.hpp"
#include "hcarleson/report.hpp"
#include "hcarleson/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Carleson measure and embedding checks for harmonic function spaces"};
  app.set_version_flag("--version", hc::version_string());
  std::string config;
  std::string out_dir;
  bool list = false;
  bool verbose = false;
  app.add_option("--config,-c", config, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--out,-o", out_dir, "report directory (overrides output.directory)");
  app.add_flag("--list-theorems", list, "list theorem, lemma and task identifiers");
  app.add_flag("--verbose,-v", verbose, "progress and timing on stderr");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  if (list) {
    std::cout << hc::list_theorems();
    return 0;
  }
  if (config.empty()) {
    std::cerr << "error: --config is required (see --help)\n";
    return 2;
  }
  hc::RunOptions opts;
  if (!out_dir.empty()) opts.out_dir = out_dir;
  opts.verbose = verbose;
  return hc::run_config_file(config, opts, std::cout, std::cerr).exit_code;
}
