#include "acas/demo/scenario.hpp"

#include <fstream>
#include <sstream>

namespace acas::demo {

namespace {

[[noreturn]] void script_fail(int line, const std::string& message) {
  throw AcasError(ErrorCode::ParseError, "scenario line " + std::to_string(line) + ": " + message);
}

Json parse_json_or_fail(int line, const std::string& text, const std::string& what) {
  if (!Json::accept(text)) script_fail(line, what + " is not valid JSON: " + text);
  return Json::parse(text);
}

}  // namespace

std::vector<ScenarioCommand> parse_scenario(const std::string& text) {
  std::vector<ScenarioCommand> commands;
  std::istringstream input(text);
  std::string rawLine;
  int lineNo = 0;
  while (std::getline(input, rawLine)) {
    ++lineNo;
    if (!rawLine.empty() && rawLine.back() == '\r') rawLine.pop_back();
    std::istringstream line(rawLine);
    std::string verb;
    if (!(line >> verb) || verb[0] == '#') continue;

    ScenarioCommand command;
    command.line = lineNo;
    if (verb == "set") {
      command.kind = ScenarioCommand::Kind::Set;
      if (!(line >> command.path)) script_fail(lineNo, "set requires a path");
      std::string rest;
      std::getline(line, rest);
      command.value = parse_json_or_fail(lineNo, rest, "set value");
    } else if (verb == "unset") {
      command.kind = ScenarioCommand::Kind::Unset;
      if (!(line >> command.path)) script_fail(lineNo, "unset requires a path");
    } else if (verb == "call") {
      command.kind = ScenarioCommand::Kind::Call;
      std::string target;
      if (!(line >> target)) script_fail(lineNo, "call requires <service>.<operation>");
      const auto dot = target.rfind('.');
      if (dot == std::string::npos || dot == 0 || dot + 1 == target.size()) {
        script_fail(lineNo, "call target must be <service>.<operation>, got '" + target + "'");
      }
      command.service = target.substr(0, dot);
      command.operation = target.substr(dot + 1);
      std::string rest;
      std::getline(line, rest);
      command.request = parse_json_or_fail(lineNo, rest, "call request");
    } else if (verb == "expect") {
      command.kind = ScenarioCommand::Kind::Expect;
      if (!(line >> command.pointer) || command.pointer.empty() || command.pointer[0] != '/') {
        script_fail(lineNo, "expect requires a /pointer");
      }
      try {
        (void)Json::json_pointer(command.pointer);
      } catch (const Json::exception& e) {
        script_fail(lineNo, std::string("bad pointer '") + command.pointer + "': " + e.what());
      }
      std::string rest;
      std::getline(line, rest);
      const auto first = rest.find_first_not_of(" \t");
      rest = first == std::string::npos ? "" : rest.substr(first);
      if (rest == "absent") {
        command.expectAbsent = true;
      } else {
        command.value = parse_json_or_fail(lineNo, rest, "expect value");
      }
    } else {
      script_fail(lineNo, "unknown command '" + verb + "'");
    }
    commands.push_back(std::move(command));
  }
  return commands;
}

ScenarioResult run_scenario(DemoWorld& world, const std::vector<ScenarioCommand>& commands,
                            const ScenarioOptions& options) {
  ScenarioResult result;
  Json lastResponse;
  bool haveResponse = false;
  int callCount = 0;

  for (const auto& command : commands) {
    switch (command.kind) {
      case ScenarioCommand::Kind::Set:
        world.set_context(command.path, command.value);
        break;
      case ScenarioCommand::Kind::Unset:
        world.unset_context(command.path);
        break;
      case ScenarioCommand::Kind::Call: {
        ++callCount;
        try {
          auto outcome = world.call(command.service, command.operation, command.request, options.mode);
          lastResponse = std::move(outcome.response);
          haveResponse = true;
          result.transcript +=
              ">> call " + std::to_string(callCount) + ": " + lastResponse.dump() + "\n";
          if (options.trace) {
            if (options.mode == NotifyMode::Async) {
              result.transcript +=
                  std::string("-- cache=") + (outcome.decision.cacheHit ? "hit" : "miss") + "\n";
            }
            std::istringstream traceLines(outcome.decision.trace->to_text());
            std::string traceLine;
            while (std::getline(traceLines, traceLine)) {
              result.transcript += "-- " + traceLine + "\n";
            }
          }
        } catch (const AcasError& e) {
          result.failures.push_back("line " + std::to_string(command.line) + ": call failed: " +
                                    e.what());
          haveResponse = false;
        }
        break;
      }
      case ScenarioCommand::Kind::Expect: {
        if (!haveResponse) {
          result.failures.push_back("line " + std::to_string(command.line) +
                                    ": expect without a preceding successful call");
          break;
        }
        const Json::json_pointer pointer(command.pointer);
        const bool present = lastResponse.contains(pointer);
        if (command.expectAbsent) {
          if (present) {
            result.failures.push_back("line " + std::to_string(command.line) + ": " +
                                      command.pointer + " expected absent, actual " +
                                      lastResponse.at(pointer).dump());
          }
        } else if (!present) {
          result.failures.push_back("line " + std::to_string(command.line) + ": " + command.pointer +
                                    " expected " + command.value.dump() + ", actual <missing>");
        } else if (lastResponse.at(pointer) != command.value) {
          result.failures.push_back("line " + std::to_string(command.line) + ": " + command.pointer +
                                    " expected " + command.value.dump() + ", actual " +
                                    lastResponse.at(pointer).dump());
        }
        break;
      }
    }
  }

  result.exitCode = result.failures.empty() ? 0 : 1;
  return result;
}

ScenarioResult run_scenario_files(const std::string& strategiesPath, const std::string& scenarioPath,
                                  const std::string& dataPath, const ScenarioOptions& options) {
  try {
    const std::string strategiesXml = read_file(strategiesPath);
    const std::string restaurantsJson = read_file(dataPath);
    const auto commands = parse_scenario(read_file(scenarioPath));
    DemoWorld world(strategiesXml, restaurantsJson);
    return run_scenario(world, commands, options);
  } catch (const AcasError& e) {
    ScenarioResult result;
    result.exitCode = 2;
    result.failures.push_back(e.what());
    return result;
  } catch (const Json::exception& e) {
    ScenarioResult result;
    result.exitCode = 2;
    result.failures.push_back(std::string("bad document: ") + e.what());
    return result;
  }
}

std::string read_file(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw AcasError(ErrorCode::ParseError, "cannot open file: " + path, path);
  std::ostringstream out;
  out << file.rdbuf();
  return out.str();
}

}  // namespace acas::demo
