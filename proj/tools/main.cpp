#include "app/commands.hpp"
#include "app/config.hpp"
#include "app/report.hpp"

#include "iondfs/errors.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  CLI::App cli{"Trapped-ion gate and decoherence-free subspace studies"};
  std::string config_path;
  std::string command;
  std::vector<std::string> overrides;
  cli.add_option("config", config_path, "INI configuration file")->required();
  cli.add_option("-c,--command", command, "modes, design, simulate, noise-scan, refocus or thermal-scan");
  cli.add_option("-s,--set", overrides, "override a key: section.key=value")->take_all();
  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = cli.exit(e);
    return rc == 0 ? 0 : 2;
  }
  if (!command.empty()) overrides.push_back("command=" + command);

  using namespace iondfs;
  try {
    const auto config = app::load_config(config_path, overrides);
    const auto report = app::run_command(config);
    app::emit_report(report, config);
    std::cout << report.summary << '\n';
    return 0;
  } catch (const Error& e) {
    std::cerr << "iondfs: " << e.what() << '\n';
    return app::exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "iondfs: " << e.what() << '\n';
    return 3;
  }
}
