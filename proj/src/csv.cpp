#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "fdgmaa/errors.hpp"
#include "fdgmaa/harness.hpp"

namespace fdgmaa {

namespace {

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_optional(const std::optional<double>& v) {
  return v ? format_real(*v) : std::string();
}

double parse_real(const std::string& field, const std::string& path) {
  char* end = nullptr;
  const double v = std::strtod(field.c_str(), &end);
  if (field.empty() || end != field.c_str() + field.size()) {
    throw IoError("malformed number '" + field + "' in '" + path + "'");
  }
  return v;
}

std::optional<double> parse_optional(const std::string& field, const std::string& path) {
  if (field.empty()) return std::nullopt;
  return parse_real(field, path);
}

}  // namespace

void write_csv(std::span<const MetricsRow> rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << kCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.iter << ',' << format_optional(r.dual_value) << ',' << format_optional(r.dual_gap)
        << ',' << format_real(r.primal_error) << ',' << format_real(r.func_gap) << ','
        << format_real(r.consensus_violation) << ',' << format_optional(r.conservation_residual)
        << ',' << format_optional(r.accept_rate) << '\n';
  }
  out.flush();
  if (!out) throw IoError("write failed for '" + path + "'");
}

std::vector<MetricsRow> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw IoError("missing or unexpected header in '" + path + "'");
  }
  std::vector<MetricsRow> rows;
  while (std::getline(in, line)) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    // getline drops a trailing empty field.
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    if (fields.size() != 8) throw IoError("expected 8 fields per line in '" + path + "'");
    MetricsRow r;
    const double iter = parse_real(fields[0], path);
    if (iter < 0.0) throw IoError("negative iteration in '" + path + "'");
    r.iter = static_cast<std::size_t>(iter);
    r.dual_value = parse_optional(fields[1], path);
    r.dual_gap = parse_optional(fields[2], path);
    r.primal_error = parse_real(fields[3], path);
    r.func_gap = parse_real(fields[4], path);
    r.consensus_violation = parse_real(fields[5], path);
    r.conservation_residual = parse_optional(fields[6], path);
    r.accept_rate = parse_optional(fields[7], path);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace fdgmaa
