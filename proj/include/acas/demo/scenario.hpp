#pragma once

#include <string>
#include <vector>

#include "acas/demo/mtourism.hpp"

namespace acas::demo {

/// One line of a scenario script. Commands execute strictly in order;
/// `expect` applies to the most recent `call` result.
struct ScenarioCommand {
  enum class Kind { Set, Unset, Call, Expect };

  Kind kind = Kind::Set;
  int line = 0;

  std::string path;   // set/unset
  Value value;        // set literal, expect literal
  bool expectAbsent = false;

  std::string service;    // call
  std::string operation;  // call
  Json request;           // call

  std::string pointer;  // expect, /items/0/photoRef style
};

/// Line-oriented script: `#` comments, blank lines ignored.
///   set <path> <json literal>
///   unset <path>
///   call <service>.<operation> <json request>
///   expect <pointer> <json literal | absent>
/// Throws AcasError(ParseError) with the line number on malformed input.
std::vector<ScenarioCommand> parse_scenario(const std::string& text);

struct ScenarioOptions {
  bool trace = false;
  NotifyMode mode = NotifyMode::Sync;
};

struct ScenarioResult {
  int exitCode = 0;  // 0 all expects pass, 1 failed expects, 2 parse/validation errors
  std::string transcript;
  std::vector<std::string> failures;
};

ScenarioResult run_scenario(DemoWorld& world, const std::vector<ScenarioCommand>& commands,
                            const ScenarioOptions& options = {});

/// File-level runner used by the CLI: builds the world from the strategies
/// document and the restaurants dataset, then replays the script. Parse and
/// validation problems in any of the three files yield exit code 2.
ScenarioResult run_scenario_files(const std::string& strategiesPath, const std::string& scenarioPath,
                                  const std::string& dataPath, const ScenarioOptions& options = {});

std::string read_file(const std::string& path);

}  // namespace acas::demo
