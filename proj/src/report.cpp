#include "duality/report.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "json.hpp"

#include "duality/errors.hpp"

namespace duality {

namespace {

using nlohmann::json;

std::string format_real(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

// Quotes a CSV field when it holds a separator, quote or newline.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string params_field(const std::map<std::string, double>& params) {
  std::string out;
  for (const auto& [name, value] : params) {
    if (!out.empty()) out += ';';
    out += name + '=' + format_real(value);
  }
  return out;
}

json real_to_json(double x) {
  // JSON has no infinities; they travel as strings.
  if (std::isfinite(x)) return x;
  return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
}

double real_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  const auto s = j.get<std::string>();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

std::string render_report(const std::vector<CheckReport>& reports, ReportFormat format) {
  if (format == ReportFormat::Json) {
    json arr = json::array();
    for (const auto& r : reports) {
      json params = json::object();
      for (const auto& [name, value] : r.params) params[name] = real_to_json(value);
      arr.push_back({{"check_name", r.check_name},
                     {"family", r.family},
                     {"params", params},
                     {"residual", real_to_json(r.residual)},
                     {"tolerance", real_to_json(r.tolerance)},
                     {"passed", r.passed},
                     {"paper_anchor", r.paper_anchor},
                     {"elapsed_ms", r.elapsed_ms}});
    }
    return arr.dump(2) + "\n";
  }
  std::ostringstream os;
  os << "check_name,family,params,residual,tolerance,passed,paper_anchor,elapsed_ms\n";
  for (const auto& r : reports) {
    os << csv_field(r.check_name) << ',' << csv_field(r.family) << ',' << csv_field(params_field(r.params)) << ','
       << format_real(r.residual) << ',' << format_real(r.tolerance) << ',' << (r.passed ? "true" : "false") << ','
       << csv_field(r.paper_anchor) << ',' << r.elapsed_ms << '\n';
  }
  return os.str();
}

void write_report(const std::vector<CheckReport>& reports, ReportFormat format, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot open " + path);
  out << render_report(reports, format);
  out.close();
  if (!out) throw Error(ErrorKind::IoError, "write failed for " + path);
}

std::vector<CheckReport> parse_json_report(const std::string& text) {
  std::vector<CheckReport> out;
  try {
    for (const auto& j : json::parse(text)) {
      CheckReport r;
      r.check_name = j.at("check_name").get<std::string>();
      r.family = j.at("family").get<std::string>();
      for (const auto& [name, value] : j.at("params").items()) r.params[name] = real_from_json(value);
      r.residual = real_from_json(j.at("residual"));
      r.tolerance = real_from_json(j.at("tolerance"));
      r.passed = j.at("passed").get<bool>();
      r.paper_anchor = j.at("paper_anchor").get<std::string>();
      r.elapsed_ms = j.at("elapsed_ms").get<std::int64_t>();
      out.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("report JSON: ") + e.what());
  }
  return out;
}

}  // namespace duality
