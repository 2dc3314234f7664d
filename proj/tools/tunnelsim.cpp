// Command-line front end: tunnelsim <command> --config <path> [--out <prefix>]

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "tunnelling/cli_io.hpp"

namespace {

void write_run_info(const std::string& path, const std::string& command,
                    const std::string& config_path) {
  std::ofstream out(path);
  if (!out) return;
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  out << "command = " << command << "\nconfig = " << config_path << "\nfinished = " << stamp
      << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tunnelling under a time-dependent measurement perturbation"};
  std::string command;
  std::string config_path;
  std::string out_prefix;
  int seed = 0;
  app.add_option("command", command, "model | density | times | oracle | hartman-scan | compare")
      ->required();
  app.add_option("--config", config_path, "Scenario configuration file")->required();
  app.add_option("--out", out_prefix, "Output path prefix (overrides output.prefix)");
  app.add_option("--seed", seed, "Reserved; no command is stochastic");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  const auto cmd = tunnelling::io::parse_command(command);
  if (!cmd) {
    std::cerr << "error: unknown command '" << command << "'\n";
    return 1;
  }
  std::ifstream in(config_path);
  if (!in) {
    std::cerr << "error: cannot read " << config_path << '\n';
    return 1;
  }
  std::stringstream buffer;
  buffer << in.rdbuf();

  tunnelling::io::ScenarioConfig cfg;
  try {
    cfg = tunnelling::io::parse_config(buffer.str());
  } catch (const tunnelling::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  const std::string prefix = app.count("--out") ? out_prefix : cfg.output_prefix;
  const int code = tunnelling::io::run_command(*cmd, cfg, prefix, std::cerr);
  if (code == 0) write_run_info(prefix + "run_info.txt", command, config_path);
  return code;
}
