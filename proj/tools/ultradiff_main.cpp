#include <CLI11.hpp>
#include <iostream>

#include "ultradiff/cli/commands.hpp"

int main(int argc, char** argv) {
  using namespace ultradiff;
  CLI::App app{"Difference quotients over the p-adic numbers: identity suites, smoothness probes, gallery"};
  app.set_version_flag("--version", std::string(ULTRADIFF_VERSION));
  app.require_subcommand(1);

  std::string config;
  CliOverrides overrides;
  std::uint64_t seed = 0;
  std::string out_dir, format;

  struct Sub {
    Command command;
    CLI::App* app;
  };
  std::vector<Sub> subs;
  const std::vector<std::pair<Command, std::string>> commands = {
      {Command::Verify, "Run the identity suites"},
      {Command::Probe, "Probe a function for smoothness"},
      {Command::Gallery, "Run a gallery construction"}};
  for (const auto& [command, help] : commands) {
    CLI::App* sub = app.add_subcommand(command_name(command), help);
    sub->add_option("--config", config, "Run configuration (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "Override the configured seed");
    sub->add_option("--out", out_dir, "Override the output directory");
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv", "both"}));
    subs.push_back({command, sub});
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  for (const auto& s : subs) {
    if (!s.app->parsed()) continue;
    if (s.app->count("--seed")) overrides.seed = seed;
    if (s.app->count("--out")) overrides.out_dir = out_dir;
    if (s.app->count("--format")) overrides.format = format;
    return run_cli(s.command, config, overrides, std::cout, std::cerr);
  }
  return 2;
}
