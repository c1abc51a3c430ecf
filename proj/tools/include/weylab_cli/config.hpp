#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace weylab::cli {

inline constexpr int kSchemaVersion = 1;

/// `key = value` lines, `#` comments, mandatory `schema = 1` and `experiment = <kind>`.
class ExperimentConfig {
 public:
  static ExperimentConfig parse(const std::string& text);
  static ExperimentConfig load(const std::string& path);

  const std::string& text() const { return text_; }
  const std::string& kind() const { return kind_; }

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& def) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double def) const;
  int get_int(const std::string& key, int def) const;
  bool get_bool(const std::string& key, bool def) const;
  std::uint64_t get_seed() const;
  std::vector<double> get_doubles(const std::string& key, const std::vector<double>& def) const;
  std::vector<int> get_ints(const std::string& key, const std::vector<int>& def) const;
  std::vector<std::string> get_strings(const std::string& key, const std::vector<std::string>& def) const;

  /// ConfigError listing keys that no experiment consumed.
  void check_unused() const;

 private:
  std::string text_;
  std::string kind_;
  std::map<std::string, std::string> values_;
  std::map<std::string, int> lines_;
  mutable std::set<std::string> used_;
};

const std::vector<std::string>& experiment_kinds();

std::uint64_t fnv1a(const std::string& s);
std::string hash_hex(std::uint64_t h);

}  // namespace weylab::cli
