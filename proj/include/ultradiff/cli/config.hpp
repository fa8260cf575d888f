#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ultradiff/field/json.hpp"
#include "ultradiff/function/expr.hpp"
#include "ultradiff/probe/probe.hpp"

namespace ultradiff {

enum class Command { Verify, Probe, Gallery };
std::string command_name(Command c);
Command parse_command(const std::string& name);

enum class OutputFormat { Json, Csv, Both };
std::string format_name(OutputFormat f);
OutputFormat parse_format(const std::string& name);

struct VerifyOptions {
  std::vector<std::string> suites;  // empty: all
  bool inject_fault = false;
  // Also rerun every suite in the other backend and compare.
  bool compare_backends = false;
};

struct GalleryOptions {
  std::string name = "thm41";
  json params = json::object();
  unsigned k_max = 10;
  std::size_t flatness_samples = 20;
  Valuation flatness_min_valuation = 2;
  std::size_t overlap_samples = 200;
  std::size_t bound_samples = 20;
  std::size_t bound_max_order = 2;
};

struct OutputOptions {
  std::string dir = ".";
  std::string prefix;  // empty: the command name
  OutputFormat format = OutputFormat::Json;
};

struct RunConfig {
  static constexpr int kSchemaVersion = 1;

  std::uint32_t p = 5;
  std::int64_t precision = 32;
  Backend backend = Backend::ExactRational;
  std::optional<Command> suite;
  std::uint64_t seed = 1;
  VerifyOptions verify;
  std::optional<json> function;
  json probe = json::object();
  GalleryOptions gallery;
  OutputOptions output;

  Field field() const;
  // Normalized echo with every default filled in. The output directory is
  // left out so that reruns into another directory stay byte-identical.
  json to_json() const;
  // Strict: unknown keys, wrong types and out-of-range values throw
  // InvalidArgument.
  static RunConfig from_json(const json& j);
  static RunConfig load(const std::string& path);
};

// A config that passed every check that can be made without computing:
// the function resolves and the probe settings fit its dimension.
struct ValidatedRun {
  Command command;
  RunConfig config;
  std::optional<FunctionExpr> function;
  ProbeConfig probe;
};

// Throws InvalidArgument when the subcommand conflicts with the config's
// suite selector or anything else is inconsistent.
ValidatedRun validate_run(Command command, RunConfig cfg);

}  // namespace ultradiff
