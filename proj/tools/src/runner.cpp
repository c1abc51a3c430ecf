#include "weylab_cli/runner.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "weylab/common.hpp"
#include "weylab/parallel.hpp"

#ifndef WEYLAB_VERSION
#define WEYLAB_VERSION "0.0.0"
#endif

namespace weylab::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kDefaultOutput = "weylab-out";

std::string read_all(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot read " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void ensure_writable(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());
  const fs::path probe = dir / ".weylab-write-probe";
  {
    std::ofstream os(probe);
    if (!os) throw ConfigError("output directory " + dir.string() + " is not writable");
  }
  fs::remove(probe, ec);
}

bool is_csv(const std::string& name) { return name.size() > 4 && name.compare(name.size() - 4, 4, ".csv") == 0; }

}  // namespace

void write_file_atomic(const std::string& path, const std::string& body) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw Error("cannot write " + tmp);
    os << body;
    os.flush();
    if (!os) throw Error("write failed for " + tmp);
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw Error("cannot rename " + tmp + " to " + path + ": " + ec.message());
}

int resolve_workers(const ExperimentConfig& c) {
  int w = c.get_int("workers", 1);
  if (const char* env = std::getenv("WEYLAB_WORKERS"); env && *env) {
    try {
      w = std::stoi(env);
    } catch (const std::exception&) {
      throw ConfigError(std::string("WEYLAB_WORKERS: expected an integer, got '") + env + "'");
    }
  }
  if (w < 1) throw ConfigError("worker count must be positive");
  return w;
}

RunOutcome run_config(const ExperimentConfig& c, const std::string& output_dir, std::ostream& log) {
  RunOutcome out;
  out.output_dir = fs::absolute(output_dir).lexically_normal().string();
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentResult res;
  int workers = 1;
  try {
    workers = resolve_workers(c);
    set_workers(workers);
    ensure_writable(out.output_dir);
    res = run_experiment(c);
  } catch (const ConfigError& e) {
    out.message = std::string("configuration error: ") + e.what();
    log << out.message << "\n";
    return out;
  } catch (const std::exception& e) {
    out.message = std::string("runtime error: ") + e.what();
    log << out.message << "\n";
    return out;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  json checks = json::object();
  for (const auto& [name, ok] : res.checks) checks[name] = ok;
  const bool pass = res.all_pass();

  json report;
  report["experiment"] = c.kind();
  report["checks"] = checks;
  report["pass"] = pass;
  report["summary"] = res.summary;

  json outputs = json::array();
  try {
    for (const auto& [name, body] : res.files) {
      write_file_atomic((fs::path(out.output_dir) / name).string(), body);
      outputs.push_back(name);
    }
    write_file_atomic((fs::path(out.output_dir) / "report.json").string(), report.dump(2) + "\n");
    outputs.push_back("report.json");

    json m;
    m["schema"] = kSchemaVersion;
    m["artifact"] = "weylab";
    m["version"] = WEYLAB_VERSION;
    m["experiment"] = c.kind();
    m["config_hash"] = hash_hex(fnv1a(c.text()));
    m["config"] = c.text();
    m["seed"] = c.has("seed") ? json(c.get_string("seed")) : json(nullptr);
    m["output_dir"] = out.output_dir;
    m["wall_time_s"] = wall;
    m["workers"] = workers;
    m["checks"] = checks;
    m["pass"] = pass;
    m["outputs"] = outputs;
    out.manifest = m;
    out.manifest_path = (fs::path(out.output_dir) / "manifest.json").string();
    write_file_atomic(out.manifest_path, m.dump(2) + "\n");
  } catch (const std::exception& e) {
    out.message = std::string("output error: ") + e.what();
    log << out.message << "\n";
    return out;
  }

  for (const auto& [name, ok] : res.checks) log << (ok ? "PASS " : "FAIL ") << name << "\n";
  out.exit_code = pass ? kExitPass : kExitCheckFailed;
  out.message = pass ? "all checks passed" : "some checks failed";
  log << c.kind() << ": " << out.message << " (" << out.manifest_path << ")\n";
  return out;
}

RunOutcome run_file(const std::string& config_path, std::ostream& log) {
  try {
    const ExperimentConfig c = ExperimentConfig::load(config_path);
    const std::string dir = c.get_string("output_dir", kDefaultOutput);
    return run_config(c, dir, log);
  } catch (const std::exception& e) {
    RunOutcome out;
    out.message = e.what();
    log << out.message << "\n";
    return out;
  }
}

RunOutcome reproduce(const std::string& manifest_path, std::ostream& log) {
  RunOutcome failed;
  json prior;
  try {
    prior = json::parse(read_all(manifest_path));
  } catch (const std::exception& e) {
    failed.message = std::string("cannot read manifest: ") + e.what();
    log << failed.message << "\n";
    return failed;
  }
  std::vector<std::string> problems;
  std::string text, prior_dir;
  try {
    text = prior.at("config").get<std::string>();
    prior_dir = prior.at("output_dir").get<std::string>();
    if (hash_hex(fnv1a(text)) != prior.at("config_hash").get<std::string>())
      problems.push_back("config hash mismatch: the embedded config differs from the recorded run");
    if (prior.at("version").get<std::string>() != WEYLAB_VERSION)
      log << "warning: manifest version " << prior.at("version").get<std::string>() << " differs from "
          << WEYLAB_VERSION << "; best-effort rerun\n";
  } catch (const std::exception& e) {
    failed.message = std::string("malformed manifest: ") + e.what();
    log << failed.message << "\n";
    return failed;
  }

  ExperimentConfig c;
  try {
    c = ExperimentConfig::parse(text);
    c.get_string("output_dir", "");
    if (c.has("seed") && prior.contains("seed") && prior["seed"].is_string() &&
        prior["seed"].get<std::string>() != c.get_string("seed"))
      problems.push_back("seed differs from the recorded run");
  } catch (const std::exception& e) {
    failed.message = e.what();
    log << failed.message << "\n";
    return failed;
  }

  RunOutcome out = run_config(c, (fs::path(prior_dir) / "reproduce").string(), log);
  if (out.exit_code == kExitError) return out;

  json compared = json::array();
  for (const auto& name : prior.value("outputs", json::array())) {
    const std::string f = name.get<std::string>();
    if (!is_csv(f)) continue;
    bool same = false;
    try {
      same = read_all((fs::path(prior_dir) / f).string()) == read_all((fs::path(out.output_dir) / f).string());
    } catch (const std::exception&) {
      same = false;
    }
    if (!same) problems.push_back(f + " differs");
    compared.push_back({{"file", f}, {"identical", same}});
  }
  const bool reproduced = problems.empty();
  out.manifest["reproduce_of"] = fs::absolute(manifest_path).lexically_normal().string();
  out.manifest["reproduced"] = reproduced;
  out.manifest["compared"] = compared;
  out.manifest["problems"] = problems;
  try {
    write_file_atomic(out.manifest_path, out.manifest.dump(2) + "\n");
  } catch (const std::exception& e) {
    out.exit_code = kExitError;
    out.message = std::string("output error: ") + e.what();
    log << out.message << "\n";
    return out;
  }
  for (const auto& p : problems) log << "non-reproduction: " << p << "\n";
  if (!reproduced) {
    out.exit_code = kExitCheckFailed;
    out.message = "run did not reproduce";
  } else {
    log << "reproduced: " << compared.size() << " CSV file(s) identical\n";
  }
  return out;
}

}  // namespace weylab::cli
