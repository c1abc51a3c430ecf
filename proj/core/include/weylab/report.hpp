#pragma once

#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace weylab {

struct Witness {
  std::vector<double> a;  // first point (flat coordinates)
  std::vector<double> b;  // second point, empty for single-point checks
  double lhs = 0.0;
  double rhs = 0.0;
  std::string detail;
};

/// Outcome of a sampled check. An empty witness list with a non-vacuous
/// sample means no violation was found on that sample, nothing more.
struct CheckReport {
  std::string kind;
  bool pass = false;
  bool vacuous = false;
  std::size_t sample_size = 0;
  std::map<std::string, double> constants;
  std::vector<Witness> witnesses;
  std::vector<std::string> notes;

  /// At most this many witnesses are retained.
  static constexpr std::size_t kMaxWitnesses = 64;
  void add_witness(Witness w) {
    if (witnesses.size() < kMaxWitnesses) witnesses.push_back(std::move(w));
  }
};

/// RFC 4180 field quoting.
std::string csv_field(const std::string& s);
std::string csv_number(double v);
void write_csv_row(std::ostream& os, const std::vector<std::string>& fields);

/// One CSV row per witness: kind, index, a, b, lhs, rhs, detail.
void write_witness_csv(std::ostream& os, const CheckReport& r);

}  // namespace weylab
