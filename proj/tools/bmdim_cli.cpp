// Command-line driver over the bmdim C API.

#include "bmdim/bmdim.h"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

namespace {

enum ExitCode { kOk = 0, kInternal = 1, kConfig = 2, kBudget = 3, kCheckFailed = 4 };

int exit_code(bmd_status s) {
  switch (s) {
    case BMD_OK: return kOk;
    case BMD_ERR_BUDGET: return kBudget;
    case BMD_ERR_INTERNAL: return kInternal;
    default: return kConfig;
  }
}

struct Subcommand {
  std::string name;
  CLI::App* app = nullptr;
  std::map<std::string, std::string> values;
  std::map<std::string, bool> flags;
  std::map<std::string, CLI::Option*> options;
  std::string config_path;
  std::string json_path;
  std::string csv_path;
  std::string format = "json";
};

bool write_file(const std::string& path, const char* text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  return static_cast<bool>(out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Brownian motion, randomness and dimension experiments"};
  app.set_version_flag("--version", std::string(bmd_version()));
  app.require_subcommand(1);

  std::vector<Subcommand> subs(bmd_command_count());
  for (size_t c = 0; c < subs.size(); ++c) {
    auto& sub = subs[c];
    sub.name = bmd_command_name(c);
    sub.app = app.add_subcommand(sub.name, bmd_command_description(c));
    sub.app->footer(std::string("CSV columns: ") + bmd_command_csv_columns(c) +
                    "\nExit codes: 0 ok, 1 internal error, 2 config error, 3 budget error, 4 check failed.");
    for (size_t i = 0; i < bmd_command_param_count(c); ++i) {
      const char* key = nullptr;
      const char* def = nullptr;
      const char* help = nullptr;
      int is_flag = 0;
      bmd_command_param(c, i, &key, &def, &help, &is_flag);
      if (is_flag) {
        sub.options[key] = sub.app->add_flag(std::string("--") + key, sub.flags[key], help);
      } else {
        std::string text = help;
        if (*def) text += " (default: " + std::string(def) + ")";
        sub.options[key] = sub.app->add_option(std::string("--") + key, sub.values[key], text);
      }
    }
    sub.app->add_option("--config", sub.config_path, "key=value file; command-line options take precedence")
        ->check(CLI::ExistingFile);
    sub.app->add_option("--json", sub.json_path, "write the JSON summary to this file");
    sub.app->add_option("--csv", sub.csv_path, "write the CSV detail rows to this file");
    sub.app->add_option("--format", sub.format, "what to print on stdout: json, csv or none (default: json)")
        ->check(CLI::IsMember({"json", "csv", "none"}));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }

  for (auto& sub : subs) {
    if (!sub.app->parsed()) continue;
    bmd_params* params = bmd_params_create();
    bmd_status st = BMD_OK;
    if (!sub.config_path.empty()) st = bmd_params_load(params, sub.config_path.c_str());
    for (const auto& [key, opt] : sub.options) {
      if (st != BMD_OK || opt->count() == 0) continue;
      st = bmd_params_set(params, key.c_str(), sub.flags.count(key) ? "true" : sub.values[key].c_str());
    }
    bmd_report* report = nullptr;
    if (st == BMD_OK) st = bmd_run(sub.name.c_str(), params, &report);
    bmd_params_destroy(params);
    if (st != BMD_OK) {
      std::fprintf(stderr, "bmdim %s: %s: %s\n", sub.name.c_str(), bmd_status_name(st), bmd_last_error());
      return exit_code(st);
    }
    int code = kOk;
    if (!sub.json_path.empty() && !write_file(sub.json_path, bmd_report_json(report))) {
      std::fprintf(stderr, "bmdim: cannot write %s\n", sub.json_path.c_str());
      code = kConfig;
    }
    if (!sub.csv_path.empty() && !write_file(sub.csv_path, bmd_report_csv(report))) {
      std::fprintf(stderr, "bmdim: cannot write %s\n", sub.csv_path.c_str());
      code = kConfig;
    }
    if (sub.format == "json") std::fputs(bmd_report_json(report), stdout);
    if (sub.format == "csv") std::fputs(bmd_report_csv(report), stdout);
    if (code == kOk && bmd_report_check_requested(report) && !bmd_report_check_passed(report)) {
      std::fprintf(stderr, "bmdim %s: check failed\n", sub.name.c_str());
      code = kCheckFailed;
    }
    bmd_report_destroy(report);
    return code;
  }
  return kInternal;
}
