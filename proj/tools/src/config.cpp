#include "weylab_cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "weylab/common.hpp"

namespace weylab::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!trim(cur).empty()) out.push_back(trim(cur));
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  double d = 0.0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), d);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size())
    throw ConfigError("key '" + key + "': expected a number, got '" + v + "'");
  return d;
}

long long to_int(const std::string& key, const std::string& v) {
  long long d = 0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), d);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size())
    throw ConfigError("key '" + key + "': expected an integer, got '" + v + "'");
  return d;
}

}  // namespace

const std::vector<std::string>& experiment_kinds() {
  static const std::vector<std::string> k{"metric-check", "class-check", "quantize-identity", "spectrum",
                                          "growth-fit",   "schatten-sweep", "evolve",          "lp-probe",
                                          "band-probe",   "subellipticity"};
  return k;
}

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
  ExperimentConfig c;
  c.text_ = text;
  std::vector<std::string> errors;
  std::istringstream is(text);
  std::string line;
  int no = 0;
  while (std::getline(is, line)) {
    ++no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      errors.push_back("line " + std::to_string(no) + ": expected 'key = value'");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty()) {
      errors.push_back("line " + std::to_string(no) + ": empty key");
      continue;
    }
    if (c.values_.count(key)) {
      errors.push_back("line " + std::to_string(no) + ": duplicate key '" + key + "' (first on line " +
                       std::to_string(c.lines_[key]) + ")");
      continue;
    }
    c.values_[key] = val;
    c.lines_[key] = no;
  }
  if (!c.values_.count("schema"))
    errors.push_back("missing 'schema'");
  else if (c.values_["schema"] != std::to_string(kSchemaVersion))
    errors.push_back("unsupported schema '" + c.values_["schema"] + "' (expected " + std::to_string(kSchemaVersion) +
                     ")");
  if (!c.values_.count("experiment")) {
    errors.push_back("missing 'experiment'");
  } else {
    c.kind_ = c.values_["experiment"];
    const auto& k = experiment_kinds();
    if (std::find(k.begin(), k.end(), c.kind_) == k.end()) errors.push_back("unknown experiment '" + c.kind_ + "'");
  }
  if (!errors.empty()) {
    std::string msg = "config parse failed:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw ConfigError(msg);
  }
  c.used_ = {"schema", "experiment"};
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot read config " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse(ss.str());
}

bool ExperimentConfig::has(const std::string& key) const { return values_.count(key) > 0; }

std::string ExperimentConfig::get_string(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("missing required key '" + key + "'");
  used_.insert(key);
  return it->second;
}

std::string ExperimentConfig::get_string(const std::string& key, const std::string& def) const {
  return has(key) ? get_string(key) : def;
}

double ExperimentConfig::get_double(const std::string& key) const { return to_double(key, get_string(key)); }

double ExperimentConfig::get_double(const std::string& key, double def) const {
  return has(key) ? get_double(key) : def;
}

int ExperimentConfig::get_int(const std::string& key, int def) const {
  return has(key) ? static_cast<int>(to_int(key, get_string(key))) : def;
}

bool ExperimentConfig::get_bool(const std::string& key, bool def) const {
  if (!has(key)) return def;
  const std::string v = get_string(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("key '" + key + "': expected a boolean, got '" + v + "'");
}

std::uint64_t ExperimentConfig::get_seed() const {
  if (!has("seed")) throw ConfigError("missing required key 'seed' (randomized experiment)");
  const long long s = to_int("seed", get_string("seed"));
  if (s < 0) throw ConfigError("key 'seed': must be nonnegative");
  return static_cast<std::uint64_t>(s);
}

std::vector<double> ExperimentConfig::get_doubles(const std::string& key, const std::vector<double>& def) const {
  if (!has(key)) return def;
  std::vector<double> out;
  for (const auto& v : split_list(get_string(key))) out.push_back(to_double(key, v));
  if (out.empty()) throw ConfigError("key '" + key + "': empty list");
  return out;
}

std::vector<int> ExperimentConfig::get_ints(const std::string& key, const std::vector<int>& def) const {
  if (!has(key)) return def;
  std::vector<int> out;
  for (const auto& v : split_list(get_string(key))) out.push_back(static_cast<int>(to_int(key, v)));
  if (out.empty()) throw ConfigError("key '" + key + "': empty list");
  return out;
}

std::vector<std::string> ExperimentConfig::get_strings(const std::string& key,
                                                       const std::vector<std::string>& def) const {
  if (!has(key)) return def;
  return split_list(get_string(key));
}

void ExperimentConfig::check_unused() const {
  std::string bad;
  for (const auto& [k, v] : values_)
    if (!used_.count(k)) bad += (bad.empty() ? "" : ", ") + k + " (line " + std::to_string(lines_.at(k)) + ")";
  if (!bad.empty()) throw ConfigError("unknown keys for experiment '" + kind_ + "': " + bad);
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace weylab::cli
