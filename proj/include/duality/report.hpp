#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace duality {

/// Outcome of one verification. `residual` holds a z-score for statistical
/// checks; `passed` is always residual <= tolerance.
struct CheckReport {
  std::string check_name;
  std::string family;
  std::map<std::string, double> params;
  double residual = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string paper_anchor;
  std::int64_t elapsed_ms = 0;
};

inline CheckReport make_report(std::string name, std::string family, std::map<std::string, double> params,
                               double residual, double tolerance, std::string anchor) {
  CheckReport r;
  r.check_name = std::move(name);
  r.family = std::move(family);
  r.params = std::move(params);
  r.residual = residual;
  r.tolerance = tolerance;
  r.passed = residual <= tolerance;
  r.paper_anchor = std::move(anchor);
  return r;
}

enum class ReportFormat { Json, Csv };

/// JSON: array of objects with exactly the CheckReport fields.
/// CSV: header row, one row per report, reals with 17 significant digits.
std::string render_report(const std::vector<CheckReport>& reports, ReportFormat format);
void write_report(const std::vector<CheckReport>& reports, ReportFormat format, const std::string& path);
std::vector<CheckReport> parse_json_report(const std::string& text);

}  // namespace duality
