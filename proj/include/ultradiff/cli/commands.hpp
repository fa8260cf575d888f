#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ultradiff/cli/config.hpp"

namespace ultradiff {

struct OutputFile {
  std::string name;
  std::string content;
};

struct RunOutcome {
  int exit_code = 0;
  std::vector<OutputFile> files;
  std::vector<std::string> summary;
};

// Runs a validated configuration and renders every report in memory.
// Exit code 1 means a check failed or could not be decided.
RunOutcome execute(const ValidatedRun& run);

// Writes every file to a temporary name in `dir`, then renames them into
// place, so a failed run leaves no partial reports behind.
void write_outputs(const std::string& dir, const std::vector<OutputFile>& files);

struct CliOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<std::string> format;
};

// Exit codes: 0 success, 1 failed or undecided check, 2 configuration error
// (nothing is written in that case).
int run_cli(Command command, const std::string& config_path, const CliOverrides& overrides,
            std::ostream& out, std::ostream& err);

}  // namespace ultradiff
