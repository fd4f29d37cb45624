#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cli/commands.hpp"
#include "cli/config.hpp"

int main(int argc, char** argv) {
  using namespace dqlin::cli;
  CLI::App app{"Gaussian-polynomial phase-space quantization of linear systems"};
  app.set_version_flag("--version", std::string(dqlin::kVersion));
  app.require_subcommand(1, 1);

  std::string config_path, out_dir, format;
  std::vector<std::string> overrides;
  const std::vector<std::pair<std::string, std::string>> commands{
      {"simulate", "expectation series per observable, manifest, optional Wigner snapshots"},
      {"verify", "run the invariant checks and write a pass/fail report"},
      {"spectrum", "eigenvalue table of the oscillator or magnetic model"},
      {"models", "list the model catalogue"},
      {"action-data", "tables of Omega(t), B(t), C(t), Delta(t)"},
      {"wigner-grid", "evolved state on a 2-d coordinate grid"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "JSON config file");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--override", overrides, "KEY=VALUE with a dotted key and a JSON value")->take_all();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  std::vector<std::string> all = overrides;
  if (!out_dir.empty()) all.push_back("output.dir=" + nlohmann::json(out_dir).dump());
  if (!format.empty()) all.push_back("output.format=" + nlohmann::json(format).dump());

  RunConfig cfg;
  try {
    cfg = config_path.empty() ? load_config("", all) : load_config_file(config_path, all);
  } catch (const dqlin::InputError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  }
  const std::string name = app.get_subcommands().front()->get_name();
  return run_command(name, cfg, {&std::cout, &std::cerr});
}
