#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "weylab_cli/builders.hpp"
#include "weylab_cli/runner.hpp"

using namespace weylab::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const char* env = std::getenv("WEYLAB_TEST_TMP");
  const fs::path root = env ? fs::path(env) : fs::temp_directory_path() / "weylab_cli_tests";
  const fs::path p = root / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& s) { std::ofstream(p, std::ios::binary) << s; }

const char* kMetric =
    "schema = 1\nexperiment = metric-check\nbuilder = daho\nseed = 4\nsamples = 2000\npairs = 300\n";
const char* kBroken = "schema = 1\nexperiment = metric-check\nbuilder = broken\nseed = 1\nsamples = 500\npairs = 100\n";
const char* kGrowth =
    "schema = 1\nexperiment = growth-fit\nbuilder = harmonic\nn = 1\nL = 16\nN = 400\nk = 80\nj_min = 10\n"
    "j_max = 70\ntarget_exponent = 1\ntarget_tol = 0.1\n";

RunOutcome run_text(const std::string& text, const fs::path& dir) {
  std::ostringstream log;
  return run_config(ExperimentConfig::parse(text), dir.string(), log);
}

int shell(const std::string& args) {
  const int rc = std::system((std::string(WEYLAB_CLI_EXE) + " " + args + " > /dev/null 2>&1").c_str());
  return WEXITSTATUS(rc);
}

}  // namespace

TEST(Cli, ParseErrorsExitTwo) {
  EXPECT_EQ(shell(""), 2);
  EXPECT_EQ(shell("frobnicate"), 2);
  EXPECT_EQ(shell("run"), 2);
  EXPECT_EQ(shell("reproduce"), 2);
  EXPECT_EQ(shell("--help"), 0);
  EXPECT_EQ(shell("list-builders"), 0);
  EXPECT_EQ(shell("run /nonexistent/config.conf"), 2);
}

TEST(Cli, ListBuildersNamesEveryCategory) {
  const std::string t = list_builders_text();
  for (const char* s : {"weight", "operator", "potential", "symbol", "daho", "harmonic", "bounded_noise", "broken"})
    EXPECT_NE(t.find(s), std::string::npos) << s;
}

TEST(Cli, PassingRunWritesManifestAndReport) {
  const fs::path d = scratch("pass");
  const RunOutcome r = run_text(kMetric, d);
  EXPECT_EQ(r.exit_code, kExitPass);
  ASSERT_TRUE(fs::exists(d / "manifest.json"));
  const auto m = nlohmann::json::parse(slurp(d / "manifest.json"));
  EXPECT_EQ(m["artifact"], "weylab");
  EXPECT_EQ(m["experiment"], "metric-check");
  EXPECT_EQ(m["seed"], "4");
  EXPECT_EQ(m["config"], kMetric);
  EXPECT_EQ(m["config_hash"], hash_hex(fnv1a(kMetric)));
  EXPECT_TRUE(m["pass"].get<bool>());
  EXPECT_EQ(m["output_dir"], fs::absolute(d).lexically_normal().string());
  for (const auto& f : m["outputs"]) EXPECT_TRUE(fs::exists(d / f.get<std::string>())) << f;
  for (const auto& e : fs::directory_iterator(d)) EXPECT_NE(e.path().extension(), ".tmp");
  const auto rep = nlohmann::json::parse(slurp(d / "report.json"));
  EXPECT_TRUE(rep["checks"]["uncertainty"].get<bool>());
}

TEST(Cli, FailingCheckExitsOne) {
  const fs::path d = scratch("fail");
  const RunOutcome r = run_text(kBroken, d);
  EXPECT_EQ(r.exit_code, kExitCheckFailed);
  const auto m = nlohmann::json::parse(slurp(d / "manifest.json"));
  EXPECT_FALSE(m["checks"]["uncertainty"].get<bool>());
  EXPECT_FALSE(slurp(d / "witnesses.csv").empty());
}

TEST(Cli, ConfigErrorsExitTwo) {
  const fs::path d = scratch("config");
  std::ostringstream log;
  EXPECT_THROW(ExperimentConfig::parse("experiment = metric-check\n"), weylab::ConfigError);
  EXPECT_THROW(ExperimentConfig::parse("schema = 1\nexperiment = nonsense\n"), weylab::ConfigError);
  EXPECT_EQ(run_text(std::string(kMetric) + "bogus_key = 3\n", d).exit_code, kExitError);
  EXPECT_EQ(run_text("schema = 1\nexperiment = metric-check\nbuilder = daho\n", d).exit_code, kExitError);
  EXPECT_EQ(run_text("schema = 1\nexperiment = metric-check\nbuilder = nope\nseed = 1\n", d).exit_code, kExitError);
  EXPECT_FALSE(fs::exists(d / "manifest.json"));
  spit(d / "bad.conf", "schema = 2\nexperiment = metric-check\n");
  EXPECT_EQ(run_file((d / "bad.conf").string(), log).exit_code, kExitError);
}

TEST(Cli, UnwritableOutputExitsTwo) {
  const fs::path d = scratch("unwritable");
  spit(d / "plain_file", "x");
  const RunOutcome r = run_text(kMetric, d / "plain_file" / "sub");
  EXPECT_EQ(r.exit_code, kExitError);
  EXPECT_NE(r.message.find("output directory"), std::string::npos);
}

TEST(Cli, RunFileHonorsOutputDir) {
  const fs::path d = scratch("runfile");
  spit(d / "m.conf", std::string(kMetric) + "output_dir = " + (d / "out").string() + "\n");
  std::ostringstream log;
  EXPECT_EQ(run_file((d / "m.conf").string(), log).exit_code, kExitPass);
  EXPECT_TRUE(fs::exists(d / "out" / "manifest.json"));
  EXPECT_NE(log.str().find("PASS uncertainty"), std::string::npos);
  EXPECT_EQ(shell("run " + (d / "m.conf").string()), 0);
}

TEST(Cli, ReproduceIsBitwise) {
  const fs::path d = scratch("repro");
  ASSERT_EQ(run_text(kMetric, d).exit_code, kExitPass);
  std::ostringstream log;
  const RunOutcome r = reproduce((d / "manifest.json").string(), log);
  EXPECT_EQ(r.exit_code, kExitPass) << log.str();
  EXPECT_TRUE(r.manifest["reproduced"].get<bool>());
  EXPECT_GE(r.manifest["compared"].size(), 2u);
  for (const auto& c : r.manifest["compared"]) {
    const std::string f = c["file"];
    EXPECT_EQ(slurp(d / f), slurp(d / "reproduce" / f)) << f;
  }
  EXPECT_EQ(shell("reproduce " + (d / "manifest.json").string()), 0);
}

TEST(Cli, ReproduceGrowthFit) {
  const fs::path d = scratch("repro_growth");
  const RunOutcome first = run_text(kGrowth, d);
  ASSERT_EQ(first.exit_code, kExitPass) << first.message;
  std::ostringstream log;
  EXPECT_EQ(reproduce((d / "manifest.json").string(), log).exit_code, kExitPass) << log.str();
  EXPECT_EQ(slurp(d / "eigenvalues.csv"), slurp(d / "reproduce" / "eigenvalues.csv"));
}

TEST(Cli, TamperedManifestIsFlagged) {
  const fs::path d = scratch("tamper");
  ASSERT_EQ(run_text(kMetric, d).exit_code, kExitPass);
  auto m = nlohmann::json::parse(slurp(d / "manifest.json"));

  auto edited = m;
  std::string cfg = edited["config"];
  cfg.replace(cfg.find("seed = 4"), 8, "seed = 5");
  edited["config"] = cfg;
  spit(d / "edited.json", edited.dump());
  std::ostringstream log;
  RunOutcome r = reproduce((d / "edited.json").string(), log);
  EXPECT_EQ(r.exit_code, kExitCheckFailed);
  EXPECT_FALSE(r.manifest["reproduced"].get<bool>());
  EXPECT_NE(log.str().find("config hash mismatch"), std::string::npos);
  EXPECT_NE(log.str().find("seed differs"), std::string::npos);
  EXPECT_NE(log.str().find("constants.csv differs"), std::string::npos);

  auto corrupted = m;
  spit(d / "witnesses.csv", "tampered\n");
  spit(d / "same.json", corrupted.dump());
  std::ostringstream log2;
  EXPECT_EQ(reproduce((d / "same.json").string(), log2).exit_code, kExitCheckFailed);
  EXPECT_NE(log2.str().find("witnesses.csv differs"), std::string::npos);

  spit(d / "garbage.json", "{ not json");
  std::ostringstream log3;
  EXPECT_EQ(reproduce((d / "garbage.json").string(), log3).exit_code, kExitError);
}

TEST(Cli, VersionMismatchWarns) {
  const fs::path d = scratch("version");
  ASSERT_EQ(run_text(kMetric, d).exit_code, kExitPass);
  auto m = nlohmann::json::parse(slurp(d / "manifest.json"));
  m["version"] = "0.0.0-other";
  spit(d / "old.json", m.dump());
  std::ostringstream log;
  EXPECT_EQ(reproduce((d / "old.json").string(), log).exit_code, kExitPass);
  EXPECT_NE(log.str().find("warning"), std::string::npos);
}

TEST(Cli, WorkerCountFromEnvironment) {
  const ExperimentConfig c = ExperimentConfig::parse(std::string(kMetric) + "workers = 2\n");
  ::unsetenv("WEYLAB_WORKERS");
  EXPECT_EQ(resolve_workers(c), 2);
  ::setenv("WEYLAB_WORKERS", "3", 1);
  EXPECT_EQ(resolve_workers(c), 3);
  const fs::path d = scratch("workers");
  const RunOutcome r = run_text(kMetric, d);
  EXPECT_EQ(r.manifest["workers"], 3);
  ::setenv("WEYLAB_WORKERS", "lots", 1);
  EXPECT_THROW(resolve_workers(c), weylab::ConfigError);
  EXPECT_EQ(run_text(kMetric, d).exit_code, kExitError);
  ::unsetenv("WEYLAB_WORKERS");
}

TEST(Cli, WorkerCountDoesNotChangeResults) {
  const fs::path a = scratch("w1"), b = scratch("w4");
  ASSERT_EQ(run_text(kMetric, a).exit_code, kExitPass);
  ASSERT_EQ(run_text(std::string(kMetric) + "workers = 4\n", b).exit_code, kExitPass);
  EXPECT_EQ(slurp(a / "constants.csv"), slurp(b / "constants.csv"));
}

TEST(Cli, AtomicWriteReplacesFile) {
  const fs::path d = scratch("atomic");
  spit(d / "f.txt", "old");
  write_file_atomic((d / "f.txt").string(), "new");
  EXPECT_EQ(slurp(d / "f.txt"), "new");
  EXPECT_FALSE(fs::exists(d / "f.txt.tmp"));
  EXPECT_THROW(write_file_atomic((d / "missing" / "f.txt").string(), "x"), weylab::Error);
}
