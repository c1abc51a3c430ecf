#include <CLI11.hpp>
#include <iostream>

#include "weylab_cli/builders.hpp"
#include "weylab_cli/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"weylab: config-driven experiments for weighted phase-space calculus"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "run the experiment described by a config file");
  run->add_option("config", config_path, "config file")->required();

  app.add_subcommand("list-builders", "print weight, operator, potential and symbol builders");

  std::string manifest_path;
  auto* rep = app.add_subcommand("reproduce", "re-run a recorded experiment and compare its CSV outputs");
  rep->add_option("manifest", manifest_path, "manifest.json of a previous run")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : weylab::cli::kExitError;
  }

  if (app.got_subcommand("list-builders")) {
    std::cout << weylab::cli::list_builders_text();
    return 0;
  }
  if (run->parsed()) return weylab::cli::run_file(config_path, std::cerr).exit_code;
  return weylab::cli::reproduce(manifest_path, std::cerr).exit_code;
}
