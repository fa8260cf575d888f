#include "ultradiff/cli/commands.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "ultradiff/gallery/registry.hpp"
#include "ultradiff/verify/suites.hpp"

namespace ultradiff {

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string status(bool passed) { return passed ? "PASS" : "FAIL"; }

json envelope(const ValidatedRun& run, json result) {
  return {{"tool", "ultradiff"},
          {"version", ULTRADIFF_VERSION},
          {"command", command_name(run.command)},
          {"config", run.config.to_json()},
          {"result", std::move(result)}};
}

class Emitter {
 public:
  explicit Emitter(const ValidatedRun& run) : run_(run) {
    prefix_ = run.config.output.prefix.empty() ? command_name(run.command) : run.config.output.prefix;
  }
  void json_report(RunOutcome& out, json result) const {
    if (run_.config.output.format == OutputFormat::Csv) return;
    out.files.push_back({prefix_ + ".json", envelope(run_, std::move(result)).dump(2) + "\n"});
  }
  void csv(RunOutcome& out, const std::string& suffix, std::string content) const {
    if (run_.config.output.format == OutputFormat::Json) return;
    out.files.push_back({prefix_ + suffix + ".csv", std::move(content)});
  }

 private:
  const ValidatedRun& run_;
  std::string prefix_;
};

RunOutcome run_verify(const ValidatedRun& run) {
  const RunConfig& cfg = run.config;
  std::vector<std::string> suites = cfg.verify.suites.empty() ? suite_names() : cfg.verify.suites;
  SuiteOptions opts;
  opts.field = cfg.field();
  opts.seed = cfg.seed;
  opts.inject_fault = cfg.verify.inject_fault;

  RunOutcome out;
  json results = json::array(), comparisons = json::array();
  std::ostringstream csv;
  csv << "suite,samples,failures,indeterminate,passed,first_failing_check\n";
  bool all_passed = true;
  std::size_t failures = 0, indeterminate = 0;
  for (const auto& name : suites) {
    SuiteResult r = run_suite(name, opts);
    all_passed = all_passed && r.passed;
    failures += r.failures;
    indeterminate += r.indeterminate;
    results.push_back(r.to_json());
    csv << name << ',' << r.samples << ',' << r.failures << ',' << r.indeterminate << ','
        << (r.passed ? "true" : "false") << ','
        << csv_field(r.failing_checks.empty() ? "" : r.failing_checks.front()) << '\n';
    std::string line = name + ": " + status(r.passed) + " samples=" + std::to_string(r.samples) +
                       " failures=" + std::to_string(r.failures) +
                       " indeterminate=" + std::to_string(r.indeterminate);
    for (const auto& f : r.failing_checks) line += "\n  failing check: " + f;
    out.summary.push_back(line);

    if (cfg.verify.compare_backends) {
      SuiteOptions other = opts;
      other.field = cfg.backend == Backend::ExactRational ? Field::truncated(cfg.p, cfg.precision)
                                                          : Field::exact(cfg.p);
      SuiteResult o = run_suite(name, other);
      const SuiteResult& exact = cfg.backend == Backend::ExactRational ? r : o;
      const SuiteResult& trunc = cfg.backend == Backend::ExactRational ? o : r;
      BackendComparison c = compare_backends(exact, trunc);
      all_passed = all_passed && c.passed();
      comparisons.push_back(c.to_json());
      out.summary.push_back("  backends: " + status(c.passed()) + " compared=" + std::to_string(c.compared) +
                            " mismatches=" + std::to_string(c.mismatches) +
                            " undecided=" + std::to_string(c.undecided));
    }
  }
  json result = {{"passed", all_passed},
                 {"total_failures", failures},
                 {"total_indeterminate", indeterminate},
                 {"suites", results}};
  if (cfg.verify.compare_backends) result["backend_comparisons"] = comparisons;
  Emitter emit(run);
  emit.json_report(out, result);
  emit.csv(out, "", csv.str());
  out.exit_code = all_passed ? 0 : 1;
  return out;
}

RunOutcome run_probe(const ValidatedRun& run) {
  RunOutcome out;
  SmoothnessReport r = smoothness_probe(*run.function, run.probe, run.config.field());
  std::string line = "verdicts:";
  for (std::size_t k = 0; k < r.verdicts.size(); ++k)
    line += " " + std::to_string(k) + "=" + verdict_name(r.verdicts[k]);
  out.summary.push_back(line);
  out.summary.push_back("witnesses: " + std::to_string(r.witnesses.size()) +
                        ", indeterminate samples: " + std::to_string(r.indeterminate_samples));
  Emitter emit(run);
  emit.json_report(out, r.to_json());
  emit.csv(out, "", r.to_csv());
  return out;
}

RunOutcome run_thm41_gallery(const ValidatedRun& run) {
  const RunConfig& cfg = run.config;
  const GalleryOptions& g = cfg.gallery;
  Field field = cfg.field();
  CounterexampleF cf = counterexample_from_json(g.params);
  RunOutcome out;

  WitnessReport w = discontinuity_witness(cf, field, g.k_max);
  bool ok = w.certifies_discontinuity() && w.indeterminate == 0;
  out.summary.push_back("witness: " + status(w.certifies_discontinuity()) + " points=" +
                        std::to_string(w.points.size()) + " indeterminate=" + std::to_string(w.indeterminate));

  Rng rng(cfg.seed);
  json flatness = json::array();
  std::size_t flat = 0, curves = 0;
  for (const auto& nc : default_flatness_curves(cf.family.m)) {
    FlatnessReport fr = curve_flatness_check(cf, nc.curve, 0, g.flatness_min_valuation, g.flatness_samples,
                                             field, rng);
    ++curves;
    if (fr.passed()) ++flat;
    ok = ok && fr.passed();
    flatness.push_back(fr.to_json());
  }
  out.summary.push_back("flatness: " + std::to_string(flat) + " of " + std::to_string(curves) +
                        " curves flat on every sample");

  GrowthReport growth = h_growth_report(cf.family, cfg.p);
  json result = {{"item", "thm41"},
                 {"params", cf.to_json()},
                 {"witness", w.to_json()},
                 {"certifies_discontinuity", w.certifies_discontinuity()},
                 {"flatness", flatness},
                 {"flat_curves", flat},
                 {"growth", growth.to_json()},
                 {"passed", ok}};
  Emitter emit(run);
  emit.json_report(out, result);
  emit.csv(out, "_witness", w.to_csv());
  out.exit_code = ok ? 0 : 1;
  return out;
}

RunOutcome run_patchwork_gallery(const ValidatedRun& run) {
  const RunConfig& cfg = run.config;
  const GalleryOptions& g = cfg.gallery;
  Field field = cfg.field();
  json params = g.params;
  if (params.is_object()) params.erase("p");
  PatchworkCurve u(PatchworkParams::from_json(params), cfg.p);
  RunOutcome out;

  Rng rng(cfg.seed);
  bool disjoint = u.supports_disjoint();
  std::size_t overlap = u.max_overlap(g.overlap_samples, rng);
  bool ok = disjoint && overlap <= 1;
  out.summary.push_back("supports: " + status(disjoint) + " pieces=" + std::to_string(u.pieces()) +
                        " max_overlap=" + std::to_string(overlap));

  json pieces = json::array();
  std::ostringstream csv;
  csv << "piece,center,scale,coefficient,support_min_valuation\n";
  for (unsigned j = 1; j <= u.pieces(); ++j) {
    Ball s = u.support(j);
    pieces.push_back({{"piece", j},
                      {"center", rational_to_json(u.center(j))},
                      {"scale", rational_to_json(u.scale(j))},
                      {"coefficient", rational_to_json(u.coefficient(j))},
                      {"support_min_valuation", s.min_valuation()}});
    csv << j << ',' << u.center(j).get_str() << ',' << u.scale(j).get_str() << ','
        << u.coefficient(j).get_str() << ',' << s.min_valuation() << '\n';
  }

  json bounds = json::array();
  for (std::size_t q = 1; q <= g.bound_max_order; ++q) {
    PatchworkBoundReport b = patchwork_bound_check(u, q, g.bound_samples, field, rng);
    ok = ok && b.violations == 0 && b.indeterminate == 0;
    bounds.push_back(b.to_json());
    out.summary.push_back("bound order " + std::to_string(q) + ": " +
                          status(b.violations == 0 && b.indeterminate == 0) +
                          " samples=" + std::to_string(b.samples) + " violations=" + std::to_string(b.violations) +
                          " indeterminate=" + std::to_string(b.indeterminate));
  }

  json result = {{"item", "patchwork"},
                 {"params", u.params().to_json()},
                 {"p", cfg.p},
                 {"limit_point", rational_to_json(u.limit_point())},
                 {"pieces", pieces},
                 {"supports_disjoint", disjoint},
                 {"max_overlap", overlap},
                 {"bound_checks", bounds},
                 {"passed", ok}};
  Emitter emit(run);
  emit.json_report(out, result);
  emit.csv(out, "_pieces", csv.str());
  out.exit_code = ok ? 0 : 1;
  return out;
}

}  // namespace

RunOutcome execute(const ValidatedRun& run) {
  switch (run.command) {
    case Command::Verify:
      return run_verify(run);
    case Command::Probe:
      return run_probe(run);
    case Command::Gallery:
      return run.config.gallery.name == "thm41" ? run_thm41_gallery(run) : run_patchwork_gallery(run);
  }
  throw InvalidArgument("unknown command");
}

void write_outputs(const std::string& dir, const std::vector<OutputFile>& files) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  std::vector<std::pair<fs::path, fs::path>> staged;
  auto discard = [&] {
    std::error_code ec;
    for (const auto& [tmp, final_path] : staged) fs::remove(tmp, ec);
  };
  for (const auto& f : files) {
    fs::path final_path = fs::path(dir) / f.name;
    fs::path tmp = fs::path(dir) / ("." + f.name + ".tmp");
    staged.emplace_back(tmp, final_path);
    std::ofstream o(tmp, std::ios::binary | std::ios::trunc);
    o << f.content;
    o.close();
    if (!o) {
      discard();
      throw std::runtime_error("cannot write " + tmp.string());
    }
  }
  for (const auto& [tmp, final_path] : staged) fs::rename(tmp, final_path);
}

int run_cli(Command command, const std::string& config_path, const CliOverrides& overrides,
            std::ostream& out, std::ostream& err) {
  ValidatedRun run;
  try {
    RunConfig cfg = RunConfig::load(config_path);
    if (overrides.seed) cfg.seed = *overrides.seed;
    if (overrides.out_dir) cfg.output.dir = *overrides.out_dir;
    if (overrides.format) cfg.output.format = parse_format(*overrides.format);
    run = validate_run(command, cfg);
  } catch (const Error& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  }

  RunOutcome outcome;
  try {
    outcome = execute(run);
    write_outputs(run.config.output.dir, outcome.files);
  } catch (const std::exception& e) {
    err << "run failed: " << e.what() << "\n";
    return 1;
  }
  for (const auto& line : outcome.summary) out << line << "\n";
  for (const auto& f : outcome.files) out << "wrote " << (std::filesystem::path(run.config.output.dir) / f.name).string() << "\n";
  return outcome.exit_code;
}

}  // namespace ultradiff
