#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "fermigas/fermigas.h"
#include "json.hpp"

namespace {

int exit_code(fg_status status) {
  switch (status) {
    case FG_OK: return 0;
    case FG_ERR_CONFIG:
    case FG_ERR_IO:
    case FG_ERR_UNSUPPORTED: return 2;
    default: return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trapped Fermi gas numerics"};
  app.set_version_flag("--version", std::string(fg_version()));
  std::string command, config_path, out_dir;
  int jobs = 1;
  bool seedless = false;
  app.add_option("command", command, "tf, scatter, semiclass, spectra, husimi, predict, boxes, budget, verify-all");
  app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory (overrides output.directory)");
  app.add_option("--jobs", jobs, "worker threads for sweeps")->check(CLI::PositiveNumber);
  app.add_flag("--seedless", seedless, "assert that no random numbers are drawn");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  fg_run_result* result = nullptr;
  fg_status status;
  const char* out = out_dir.empty() ? nullptr : out_dir.c_str();
  if (!config_path.empty()) {
    std::ifstream is(config_path);
    std::stringstream text;
    text << is.rdbuf();
    std::string config = text.str();
    if (!command.empty()) {
      try {
        auto j = nlohmann::json::parse(config);
        if (!j.is_object()) throw std::runtime_error("configuration must be an object");
        if (j.contains("command") && j["command"] != command) {
          std::cerr << "error: command '" << command << "' conflicts with the configuration file\n";
          return 2;
        }
        j["command"] = command;
        config = j.dump();
      } catch (const std::exception& e) {
        std::cerr << "error: malformed configuration: " << e.what() << "\n";
        return 2;
      }
    }
    status = fg_run(config.c_str(), out, jobs, seedless, &result);
  } else if (!command.empty()) {
    status = fg_run_command(command.c_str(), out, jobs, seedless, &result);
  } else {
    std::cerr << "error: give a command or --config\n";
    return 2;
  }

  if (status != FG_OK) {
    std::cerr << "error: " << fg_last_error() << "\n";
    return exit_code(status);
  }
  std::cout << fg_run_result_summary(result) << "\n";
  const int failures = fg_run_result_failures(result);
  fg_run_result_destroy(result);
  if (failures > 0) {
    std::cerr << failures << " acceptance check(s) failed\n";
    return 1;
  }
  return 0;
}
