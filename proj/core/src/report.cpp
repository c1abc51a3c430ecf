#include "weylab/report.hpp"

#include <cstdio>

namespace weylab {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string csv_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv_row(std::ostream& os, const std::vector<std::string>& fields) {
  for (size_t i = 0; i < fields.size(); ++i) {
    if (i) os << ',';
    os << csv_field(fields[i]);
  }
  os << '\n';
}

namespace {
std::string join(const std::vector<double>& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += ' ';
    s += csv_number(v[i]);
  }
  return s;
}
}  // namespace

void write_witness_csv(std::ostream& os, const CheckReport& r) {
  write_csv_row(os, {"kind", "index", "a", "b", "lhs", "rhs", "detail"});
  for (size_t i = 0; i < r.witnesses.size(); ++i) {
    const auto& w = r.witnesses[i];
    write_csv_row(os, {r.kind, std::to_string(i), join(w.a), join(w.b), csv_number(w.lhs),
                       csv_number(w.rhs), w.detail});
  }
}

}  // namespace weylab
