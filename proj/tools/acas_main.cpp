#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "acas/demo/scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{"acas - context-aware service adaptation runtime"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "replay a scenario script against the demo service");
  std::string strategiesPath, scenarioPath, dataPath;
  bool trace = false;
  std::string mode = "sync";
  run->add_option("--strategies", strategiesPath, "CAS strategy document (XML)")->required();
  run->add_option("--scenario", scenarioPath, "scenario script")->required();
  run->add_option("--data", dataPath, "restaurants dataset (JSON)")->required();
  run->add_flag("--trace", trace, "append weave trace lines to the transcript");
  run->add_option("--mode", mode, "request notification mode")
      ->check(CLI::IsMember({"sync", "async"}));

  CLI11_PARSE(app, argc, argv);

  acas::demo::ScenarioOptions options;
  options.trace = trace;
  options.mode = mode == "async" ? acas::NotifyMode::Async : acas::NotifyMode::Sync;

  const auto result = acas::demo::run_scenario_files(strategiesPath, scenarioPath, dataPath, options);
  std::cout << result.transcript;
  for (const auto& failure : result.failures) {
    std::cerr << failure << "\n";
  }
  return result.exitCode;
}
