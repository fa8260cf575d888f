#include "ultradiff/cli/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "ultradiff/gallery/registry.hpp"
#include "ultradiff/verify/suites.hpp"

namespace ultradiff {

namespace {

void check_keys(const json& j, const std::string& where, const std::vector<std::string>& allowed) {
  if (!j.is_object()) throw InvalidArgument(where + " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
      throw InvalidArgument("unknown key in " + where + ": " + it.key());
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw InvalidArgument(std::string("wrong type for \"") + key + "\"");
  }
}

}  // namespace

std::string command_name(Command c) {
  switch (c) {
    case Command::Verify:
      return "verify";
    case Command::Probe:
      return "probe";
    case Command::Gallery:
      return "gallery";
  }
  return "";
}

Command parse_command(const std::string& name) {
  if (name == "verify") return Command::Verify;
  if (name == "probe") return Command::Probe;
  if (name == "gallery") return Command::Gallery;
  throw InvalidArgument("unknown suite selector: " + name);
}

std::string format_name(OutputFormat f) {
  switch (f) {
    case OutputFormat::Json:
      return "json";
    case OutputFormat::Csv:
      return "csv";
    case OutputFormat::Both:
      return "both";
  }
  return "";
}

OutputFormat parse_format(const std::string& name) {
  if (name == "json") return OutputFormat::Json;
  if (name == "csv") return OutputFormat::Csv;
  if (name == "both") return OutputFormat::Both;
  throw InvalidArgument("unknown output format: " + name);
}

Field RunConfig::field() const {
  return backend == Backend::ExactRational ? Field::exact(p) : Field::truncated(p, precision);
}

json RunConfig::to_json() const {
  json j = {{"schema_version", kSchemaVersion},
            {"p", p},
            {"precision", precision},
            {"backend", backend_name(backend)},
            {"seed", seed},
            {"verify",
             {{"suites", verify.suites},
              {"inject_fault", verify.inject_fault},
              {"compare_backends", verify.compare_backends}}},
            {"probe", probe},
            {"gallery",
             {{"name", gallery.name},
              {"params", gallery.params},
              {"k_max", gallery.k_max},
              {"flatness_samples", gallery.flatness_samples},
              {"flatness_min_valuation", gallery.flatness_min_valuation},
              {"overlap_samples", gallery.overlap_samples},
              {"bound_samples", gallery.bound_samples},
              {"bound_max_order", gallery.bound_max_order}}},
            {"output", {{"prefix", output.prefix}, {"format", format_name(output.format)}}}};
  j["suite"] = suite ? json(command_name(*suite)) : json(nullptr);
  j["function"] = function ? *function : json(nullptr);
  return j;
}

RunConfig RunConfig::from_json(const json& j) {
  check_keys(j, "config", {"schema_version", "p", "precision", "backend", "suite", "seed", "verify",
                           "function", "probe", "gallery", "output"});
  if (!j.contains("schema_version")) throw InvalidArgument("config needs \"schema_version\"");
  int version = 0;
  read(j, "schema_version", version);
  if (version != kSchemaVersion)
    throw InvalidArgument("unsupported schema_version " + std::to_string(version));

  RunConfig c;
  read(j, "p", c.p);
  Prime check(c.p);
  read(j, "precision", c.precision);
  if (c.precision < 8 || c.precision > 4096) throw InvalidArgument("precision must lie in [8, 4096]");
  if (j.contains("backend")) {
    std::string b;
    read(j, "backend", b);
    c.backend = parse_backend(b);
  }
  if (j.contains("suite") && !j.at("suite").is_null()) {
    std::string s;
    read(j, "suite", s);
    c.suite = parse_command(s);
  }
  read(j, "seed", c.seed);

  if (j.contains("verify")) {
    const json& v = j.at("verify");
    check_keys(v, "verify", {"suites", "inject_fault", "compare_backends"});
    read(v, "suites", c.verify.suites);
    read(v, "inject_fault", c.verify.inject_fault);
    read(v, "compare_backends", c.verify.compare_backends);
    const auto& known = suite_names();
    for (const auto& s : c.verify.suites)
      if (std::find(known.begin(), known.end(), s) == known.end())
        throw InvalidArgument("unknown verify suite: " + s);
  }

  if (j.contains("function") && !j.at("function").is_null()) c.function = j.at("function");

  if (j.contains("probe")) {
    c.probe = j.at("probe");
    if (c.probe.is_object() && c.probe.contains("seed"))
      throw InvalidArgument("set the probe seed with the top-level \"seed\"");
    ProbeConfig::from_json(c.probe);
  }

  if (j.contains("gallery")) {
    const json& g = j.at("gallery");
    check_keys(g, "gallery", {"name", "params", "k_max", "flatness_samples", "flatness_min_valuation",
                              "overlap_samples", "bound_samples", "bound_max_order"});
    read(g, "name", c.gallery.name);
    if (g.contains("params")) c.gallery.params = g.at("params");
    read(g, "k_max", c.gallery.k_max);
    read(g, "flatness_samples", c.gallery.flatness_samples);
    read(g, "flatness_min_valuation", c.gallery.flatness_min_valuation);
    read(g, "overlap_samples", c.gallery.overlap_samples);
    read(g, "bound_samples", c.gallery.bound_samples);
    read(g, "bound_max_order", c.gallery.bound_max_order);
    if (c.gallery.k_max < 1 || c.gallery.k_max > 40) throw InvalidArgument("gallery k_max must lie in [1, 40]");
    if (c.gallery.flatness_samples < 1) throw InvalidArgument("gallery flatness_samples must be positive");
    if (c.gallery.bound_max_order > 3) throw InvalidArgument("gallery bound_max_order must be at most 3");
  }

  if (j.contains("output")) {
    const json& o = j.at("output");
    check_keys(o, "output", {"dir", "prefix", "format"});
    read(o, "dir", c.output.dir);
    read(o, "prefix", c.output.prefix);
    if (o.contains("format")) {
      std::string f;
      read(o, "format", f);
      c.output.format = parse_format(f);
    }
    if (c.output.prefix.find('/') != std::string::npos)
      throw InvalidArgument("output prefix must not contain '/'");
  }
  return c;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  json j;
  try {
    j = json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw InvalidArgument(std::string("config is not valid JSON: ") + e.what());
  }
  return from_json(j);
}

ValidatedRun validate_run(Command command, RunConfig cfg) {
  if (cfg.suite && *cfg.suite != command)
    throw InvalidArgument("config selects suite \"" + command_name(*cfg.suite) + "\" but the command is \"" +
                          command_name(command) + "\"");
  cfg.suite = command;
  ValidatedRun run{command, cfg, std::nullopt, ProbeConfig{}};
  if (command == Command::Probe) {
    if (!cfg.function) throw InvalidArgument("probe needs a \"function\"");
    try {
      run.function = FunctionExpr::from_json(*cfg.function, gallery_resolver(cfg.p));
    } catch (const json::exception& e) {
      throw InvalidArgument(std::string("malformed function spec: ") + e.what());
    }
    json probe = cfg.probe;
    std::size_t dim = run.function->input_dim();
    if (!probe.contains("region")) {
      json center = json::array();
      for (std::size_t i = 0; i < dim; ++i) center.push_back(0);
      probe["region"] = {{"center", center}, {"min_valuation", 0}};
    }
    run.probe = ProbeConfig::from_json(probe);
    run.probe.seed = cfg.seed;
    try {
      run.probe.validate(dim);
    } catch (const DimensionMismatch& e) {
      throw InvalidArgument(e.what());
    }
    json echo = run.probe.to_json();
    echo.erase("seed");
    run.config.probe = echo;
  }
  if (command == Command::Gallery) {
    const auto names = gallery_names();
    if (std::find(names.begin(), names.end(), cfg.gallery.name) == names.end())
      throw InvalidArgument("unknown gallery item: " + cfg.gallery.name);
    resolve_gallery(cfg.gallery.name, cfg.gallery.params, cfg.p);
  }
  return run;
}

}  // namespace ultradiff
