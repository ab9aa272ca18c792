#pragma once

#include "errors.hpp"

#include <map>
#include <string>
#include <vector>

namespace bmdim {

struct ParamSpec {
  std::string key;
  std::string default_value;
  std::string help;
  bool is_flag = false;
};

struct CommandSpec {
  std::string name;
  std::string description;
  std::string csv_columns;
  std::vector<ParamSpec> params;
};

/// Every subcommand with its parameters; the CLI builds its options from this.
const std::vector<CommandSpec>& command_specs();
const CommandSpec* find_command(const std::string& name);

/// Subcommand plus its parameters as strings; unset keys take the schema default.
struct RunConfig {
  std::string command;
  std::map<std::string, std::string> params;
};

struct RunReport {
  std::string json;  // summary, embeds the resolved config
  std::string csv;   // detail rows
  bool check_requested = false;
  bool check_passed = true;
};

/// Runs one subcommand. Throws Error for bad input and budget overruns.
RunReport run_command(const RunConfig& config);

/// Parses a key=value file ('#' starts a comment).
std::map<std::string, std::string> parse_config_text(const std::string& text);

}  // namespace bmdim
