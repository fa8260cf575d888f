#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ultradiff/cli/commands.hpp"

using namespace ultradiff;
namespace fs = std::filesystem;

namespace {

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("ultradiff_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string config(const json& j) {
    fs::path p = dir_ / "config.json";
    std::ofstream(p) << j.dump();
    return p.string();
  }

  int run(Command c, const json& cfg, const std::string& out_name = "out") {
    CliOverrides o;
    o.out_dir = (dir_ / out_name).string();
    std::ostringstream out, err;
    int code = run_cli(c, config(cfg), o, out, err);
    last_err_ = err.str();
    return code;
  }

  std::string read(const std::string& out_name, const std::string& file) {
    std::ifstream in(dir_ / out_name / file);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  }

  fs::path dir_;
  std::string last_err_;
};

json base() { return json{{"schema_version", 1}}; }

}  // namespace

TEST_F(CliTest, ConfigRoundTripAndDefaults) {
  RunConfig c = RunConfig::from_json(base());
  EXPECT_EQ(c.p, 5u);
  EXPECT_EQ(c.precision, 32);
  EXPECT_EQ(c.backend, Backend::ExactRational);
  RunConfig back = RunConfig::from_json(c.to_json());
  EXPECT_EQ(back.to_json(), c.to_json());
}

TEST_F(CliTest, ConfigRejectsBadInput) {
  auto bad = [](json j) { EXPECT_THROW(RunConfig::from_json(j), InvalidArgument) << j.dump(); };
  bad(json{{"p", 5}});
  bad(json{{"schema_version", 2}});
  bad(json{{"schema_version", 1}, {"extra", true}});
  bad(json{{"schema_version", 1}, {"p", 6}});
  bad(json{{"schema_version", 1}, {"p", "five"}});
  bad(json{{"schema_version", 1}, {"backend", "float"}});
  bad(json{{"schema_version", 1}, {"precision", 2}});
  bad(json{{"schema_version", 1}, {"suite", "plot"}});
  bad(json{{"schema_version", 1}, {"verify", {{"suites", {"fourier"}}}}});
  bad(json{{"schema_version", 1}, {"verify", {{"verbose", true}}}});
  bad(json{{"schema_version", 1}, {"probe", {{"orders", 2}}}});
  bad(json{{"schema_version", 1}, {"probe", {{"seed", 2}}}});
  bad(json{{"schema_version", 1}, {"gallery", {{"k_max", 0}}}});
  bad(json{{"schema_version", 1}, {"output", {{"format", "xml"}}}});
}

TEST_F(CliTest, ValidationResolvesFunctionsBeforeRunning) {
  RunConfig c = RunConfig::from_json(base());
  EXPECT_THROW(validate_run(Command::Probe, c), InvalidArgument);  // no function
  c.function = json{{"kind", "gallery"}, {"name", "koch"}, {"params", json::object()}};
  EXPECT_THROW(validate_run(Command::Probe, c), InvalidArgument);
  c.function = json{{"kind", "gallery"}, {"name", "thm41"}, {"params", json::object()}};
  ValidatedRun ok = validate_run(Command::Probe, c);
  EXPECT_EQ(ok.probe.region.dim(), 2u);  // defaults to the origin of the input space
  c.probe = json{{"region", {{"center", {0}}}}};
  EXPECT_THROW(validate_run(Command::Probe, c), InvalidArgument);
  c.suite = Command::Verify;
  EXPECT_THROW(validate_run(Command::Probe, c), InvalidArgument);
}

TEST_F(CliTest, UnknownKeyExitsTwoWithoutOutput) {
  json cfg = base();
  cfg["colour"] = "blue";
  EXPECT_EQ(run(Command::Verify, cfg), 2);
  EXPECT_FALSE(fs::exists(dir_ / "out"));
  EXPECT_NE(last_err_.find("colour"), std::string::npos);
}

TEST_F(CliTest, VerifySubsetPassesAndInjectedFaultFails) {
  json cfg = base();
  cfg["verify"] = {{"suites", {"leibniz", "chain"}}};
  EXPECT_EQ(run(Command::Verify, cfg), 0);
  json report = json::parse(read("out", "verify.json"));
  EXPECT_TRUE(report["result"]["passed"].get<bool>());
  EXPECT_EQ(report["version"], ULTRADIFF_VERSION);
  EXPECT_EQ(report["config"]["verify"]["suites"], cfg["verify"]["suites"]);

  cfg["verify"]["inject_fault"] = true;
  EXPECT_EQ(run(Command::Verify, cfg, "fault"), 1);
  json fault = json::parse(read("fault", "verify.json"));
  EXPECT_EQ(fault["result"]["suites"][0]["failing_checks"][0], "leibniz[0]/n=1");
}

TEST_F(CliTest, VerifyCanCompareBackends) {
  json cfg = base();
  cfg["verify"] = {{"suites", {"restriction"}}, {"compare_backends", true}};
  cfg["output"] = {{"format", "both"}};
  EXPECT_EQ(run(Command::Verify, cfg), 0);
  json report = json::parse(read("out", "verify.json"));
  EXPECT_EQ(report["result"]["backend_comparisons"][0]["mismatches"], 0);
  EXPECT_EQ(read("out", "verify.csv").substr(0, 6), "suite,");
}

TEST_F(CliTest, ProbeIsByteIdenticalAcrossRuns) {
  json cfg = base();
  cfg["function"] = {{"kind", "gallery"}, {"name", "thm41"}, {"params", json::object()}};
  cfg["probe"] = {{"order", 0}, {"samples", 3}};
  cfg["output"] = {{"format", "both"}};
  EXPECT_EQ(run(Command::Probe, cfg, "a"), 0);
  EXPECT_EQ(run(Command::Probe, cfg, "b"), 0);
  EXPECT_EQ(read("a", "probe.json"), read("b", "probe.json"));
  EXPECT_EQ(read("a", "probe.csv"), read("b", "probe.csv"));
  json report = json::parse(read("a", "probe.json"));
  EXPECT_FALSE(report["result"]["witnesses"].empty());
  EXPECT_NE(report["result"]["verdicts"][0], "ContinuousExtension");
}

TEST_F(CliTest, GalleryOutputs) {
  json cfg = base();
  cfg["gallery"] = {{"name", "thm41"}, {"k_max", 10}};
  cfg["output"] = {{"format", "csv"}, {"prefix", "t41"}};
  EXPECT_EQ(run(Command::Gallery, cfg), 0);
  EXPECT_FALSE(fs::exists(dir_ / "out" / "t41.json"));
  std::istringstream csv(read("out", "t41_witness.csv"));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "k,|x|,|y|,|f|");
  int rows = 0;
  while (std::getline(csv, line)) {
    ++rows;
    EXPECT_EQ(line.substr(line.rfind(',') + 1), "1");
  }
  EXPECT_EQ(rows, 10);

  cfg["gallery"] = {{"name", "patchwork"}, {"params", {{"pieces", 3}, {"p", 5}}}};
  cfg["output"] = {{"format", "json"}};
  EXPECT_EQ(run(Command::Gallery, cfg, "pw"), 0);
  json report = json::parse(read("pw", "gallery.json"));
  EXPECT_TRUE(report["result"]["supports_disjoint"].get<bool>());
  EXPECT_EQ(report["result"]["max_overlap"], 1);

  cfg["gallery"] = {{"name", "patchwork"}, {"params", {{"pieces", 3}, {"p", 7}}}};
  EXPECT_EQ(run(Command::Gallery, cfg, "bad"), 2);
  EXPECT_FALSE(fs::exists(dir_ / "bad"));
}

TEST_F(CliTest, TruncatedGalleryReportsUndecidedPointsAsFailure) {
  json cfg = base();
  cfg["backend"] = "truncated";
  cfg["gallery"] = {{"name", "thm41"}, {"k_max", 10}};
  EXPECT_EQ(run(Command::Gallery, cfg), 1);
  json report = json::parse(read("out", "gallery.json"));
  EXPECT_GT(report["result"]["witness"]["indeterminate"].get<int>(), 0);
}

TEST_F(CliTest, AtomicWriteLeavesNoTemporaries) {
  write_outputs((dir_ / "w").string(), {{"a.txt", "x"}, {"b.txt", "y"}});
  std::size_t count = 0;
  for (const auto& e : fs::directory_iterator(dir_ / "w")) {
    ++count;
    EXPECT_NE(e.path().filename().string().front(), '.');
  }
  EXPECT_EQ(count, 2u);
}
