#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ultradiff/field/json.hpp"
#include "ultradiff/field/vector.hpp"
#include "ultradiff/verify/corpus.hpp"

namespace ultradiff {

struct SuiteOptions {
  Field field = Field::exact(5);
  std::uint64_t seed = 1;
  // Perturbs one coefficient on one side of the identity (leibniz and
  // closed_form only) to prove the harness notices.
  bool inject_fault = false;
};

struct SuiteResult {
  std::string name;
  std::string description;
  std::size_t samples = 0;
  std::size_t failures = 0;
  std::size_t indeterminate = 0;
  bool passed = false;
  std::vector<std::string> failing_checks;
  json details = json::object();
  double seconds = 0;

  // Computed values in a fixed order that depends only on the seed, so two
  // backends can be compared entry by entry. Empty entries were undecided.
  std::vector<std::optional<PadicVector>> values;
  // Discrete outcomes (ranks, verdict codes, flags); -1 means undecided.
  std::vector<long> integers;

  // Leaves out the timing so reports stay byte-identical across runs.
  json to_json() const;
};

const std::vector<std::string>& suite_names();
SuiteResult run_suite(const std::string& name, const SuiteOptions& opts);

struct BackendComparison {
  std::string suite;
  std::size_t compared = 0;
  std::size_t mismatches = 0;
  // Entries where the truncated run could not decide.
  std::size_t undecided = 0;
  std::vector<std::string> notes;
  bool passed() const { return mismatches == 0; }
  json to_json() const;
};

// Every decided truncated value must be congruent to the exact one modulo
// its own tracked precision, and decided integers must be equal.
BackendComparison compare_backends(const SuiteResult& exact, const SuiteResult& truncated);

}  // namespace ultradiff
