#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "doctest.h"
#include "duality/errors.hpp"
#include "duality/report.hpp"
#include "duality/suite.hpp"

using namespace duality;
using namespace duality::suite;

namespace {

template <typename Fn>
ErrorKind kind_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an Error");
  return ErrorKind::IoError;
}

std::string message_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

CheckReport sample_report() {
  CheckReport r = make_report("generator_duality", "SEP", {{"j", 0.5}, {"p", 0.3}}, 1.0 / 3.0, 1e-10,
                              "LD = DL^T, with \"quotes\", commas");
  r.elapsed_ms = 12;
  return r;
}

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

}  // namespace

TEST_CASE("parse_config examples") {
  const auto empty = parse_config("");
  CHECK(empty.checks.empty());
  CHECK(empty.seed == 42);

  const auto one = parse_config("[check] name=generator_duality family=SEP j=0.5 p=0.5 edges=0-1 totals=1,1");
  REQUIRE(one.checks.size() == 1);
  const auto& d = one.checks[0];
  CHECK(d.name == "generator_duality");
  CHECK(d.family == Family::SEP);
  CHECK(d.params.j == 0.5);
  CHECK(d.params.p == 0.5);
  CHECK(d.edges == "0-1");
  CHECK(d.totals == std::vector<int>{1, 1});
  CHECK(d.line == 1);

  CHECK(kind_of([] { parse_config("[check] name=generator_duality family=SEP j=0.5 p=1.5"); }) ==
        ErrorKind::BadParamRange);
}

TEST_CASE("parse_config layout, comments and suite keys") {
  const auto c = parse_config(
      "# header comment\n"
      "seed = 7\n"
      "output = out.json\n"
      "\n"
      "[check]\n"
      "name = semigroup_duality   # trailing comment\n"
      "family = SIP k = 1/2 c=0.25\n"
      "t = 0.1,1 tolerance=1e-8\n"
      "[check] name=mc_duality family=IRW lambda=2 x0=1,0 y0=0,1 n_samples=500\n");
  CHECK(c.seed == 7);
  CHECK(c.output_path == "out.json");
  REQUIRE(c.checks.size() == 2);
  CHECK(c.checks[0].params.k == 0.5);
  CHECK(c.checks[0].t_values == std::vector<double>{0.1, 1.0});
  CHECK(c.checks[0].tolerance == 1e-8);
  CHECK(c.checks[1].n_samples == 500);
  CHECK(c.checks[1].options.at("x0") == "1,0");
  CHECK(c.checks[1].line == 9);
}

TEST_CASE("parse_config errors") {
  CHECK(kind_of([] { parse_config("[check] name=no_such_check"); }) == ErrorKind::UnknownCheckName);
  CHECK(kind_of([] { parse_config("[check] name=commutation j=1\n junk"); }) == ErrorKind::ParseError);
  CHECK(message_of("\n\n[check] name=commutation j=1 bogus=3").find("line 3") != std::string::npos);
  CHECK(kind_of([] { parse_config("[check] name=generator_duality j=1 p=0.5"); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { parse_config("[checks]"); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { parse_config("[check] name=commutation j=x"); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { parse_config("[check] name=commutation tolerance=0"); }) == ErrorKind::BadParamRange);
  CHECK(kind_of([] { parse_config("[check] name=mc_duality family=SEP n_samples=99"); }) == ErrorKind::BadParamRange);
  CHECK(kind_of([] { parse_config("[check] name=commutation family=XYZ"); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { parse_config("colour = blue"); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { load_config("/nonexistent/suite.ini"); }) == ErrorKind::IoError);
}

TEST_CASE("default tolerances per check class") {
  const auto c = parse_config(
      "[check] name=commutation j=1\n"
      "[check] name=semigroup_duality family=SEP j=1 p=0.5\n"
      "[check] name=continuous_duality family=BEP k=1\n"
      "[check] name=continuous_duality family=BMP\n"
      "[check] name=mc_duality family=SEP j=1 p=0.5\n");
  CHECK(default_tolerance(c.checks[0]) == 1e-12);
  CHECK(default_tolerance(c.checks[1]) == 1e-9);
  CHECK(default_tolerance(c.checks[2]) == 1e-6);
  CHECK(default_tolerance(c.checks[3]) == 1e-8);
  CHECK(default_tolerance(c.checks[4]) == 3.0);
}

TEST_CASE("seed precedence") {
  unsetenv("DUALITY_LAB_SEED");
  CHECK(resolve_seed(42) == 42);
  setenv("DUALITY_LAB_SEED", "9", 1);
  CHECK(resolve_seed(42) == 9);
  CHECK(resolve_seed(42, 5) == 5);
  setenv("DUALITY_LAB_SEED", "nine", 1);
  CHECK(kind_of([] { resolve_seed(42); }) == ErrorKind::BadParamRange);
  unsetenv("DUALITY_LAB_SEED");
}

TEST_CASE("run_suite keeps order, repeats duplicates and records errors") {
  const auto c = parse_config(
      "[check] name=generator_duality family=SEP j=1/2 p=0.5 edges=0-1 totals=1,1\n"
      "[check] name=commutation algebra=su2 j=1\n"
      "[check] name=generator_duality family=SEP j=1/2 p=0.5 edges=0-1 totals=1,1\n"
      "[check] name=mc_duality family=SEP j=1/2 p=0.5 x0=2,0 y0=1,0 n_samples=100\n");
  const auto reports = run_suite(c);
  REQUIRE(reports.size() == 4);
  CHECK(reports[0].check_name == "generator_duality");
  CHECK(reports[1].check_name == "commutation");
  CHECK(reports[0].residual == reports[2].residual);
  CHECK(reports[0].params == reports[2].params);
  CHECK(reports[0].passed);
  CHECK(reports[1].passed);
  CHECK_FALSE(reports[3].passed);
  CHECK(std::isinf(reports[3].residual));
  CHECK(reports[3].paper_anchor.find("InvalidInitialState") != std::string::npos);
  CHECK_FALSE(all_passed(reports));

  RunOptions par;
  par.jobs = 3;
  const auto parallel = run_suite(c, par);
  for (std::size_t i = 0; i < reports.size(); ++i) {
    CHECK(parallel[i].check_name == reports[i].check_name);
    CHECK(parallel[i].residual == reports[i].residual);
  }
}

TEST_CASE("negative control: SEP kernel with the SIP generator fails") {
  const auto c = parse_config("[check] name=generator_duality family=SIP k=1/2 c=0.5 j=1 p=0.5 kernel=SEP totals=2,2");
  const auto r = run_suite(c).front();
  CHECK_FALSE(r.passed);
  CHECK(r.residual >= 1e-3);
  CHECK(r.residual > 1e6 * r.tolerance);
  CHECK(r.paper_anchor.find("mismatched") != std::string::npos);
}

TEST_CASE("statistical checks are deterministic for a fixed seed") {
  SuiteConfig c = parse_config("[check] name=mc_duality family=SIP k=1/2 c=0.5 x0=1,1 y0=2,0 t=0.3 n_samples=2000");
  c.seed = 5;
  const auto a = run_suite(c).front();
  const auto b = run_suite(c).front();
  CHECK(a.residual == b.residual);
  CHECK(a.params.at("seed") == b.params.at("seed"));
  c.seed = 6;
  CHECK(run_suite(c).front().residual != a.residual);
}

TEST_CASE("bundled suite parses and covers every check class") {
  const auto c = parse_config(default_suite_text());
  CHECK(c.checks.size() > 100);
  std::set<std::string> names;
  for (const auto& d : c.checks) names.insert(d.name);
  for (const auto& n : known_checks()) CHECK_MESSAGE(names.count(n) == 1, n);
}

TEST_CASE("render_report: empty lists") {
  CHECK(render_report({}, ReportFormat::Json) == "[]\n");
  const auto csv = render_report({}, ReportFormat::Csv);
  CHECK(csv == "check_name,family,params,residual,tolerance,passed,paper_anchor,elapsed_ms\n");
}

TEST_CASE("JSON round trip") {
  CheckReport inf = sample_report();
  inf.residual = std::numeric_limits<double>::infinity();
  inf.passed = false;
  const std::vector<CheckReport> reports{sample_report(), inf};
  const auto back = parse_json_report(render_report(reports, ReportFormat::Json));
  REQUIRE(back.size() == 2);
  const auto& r = back[0];
  CHECK(r.check_name == reports[0].check_name);
  CHECK(r.family == reports[0].family);
  CHECK(r.params == reports[0].params);
  CHECK(r.residual == reports[0].residual);
  CHECK(r.tolerance == reports[0].tolerance);
  CHECK(r.passed == reports[0].passed);
  CHECK(r.paper_anchor == reports[0].paper_anchor);
  CHECK(r.elapsed_ms == 12);
  CHECK(std::isinf(back[1].residual));
  CHECK(kind_of([] { parse_json_report("{not json"); }) == ErrorKind::ParseError);
}

TEST_CASE("CSV rows, quoting and 17 significant digits") {
  const std::vector<CheckReport> reports{sample_report(), sample_report(), sample_report()};
  const auto csv = render_report(reports, ReportFormat::Csv);
  CHECK(count_lines(csv) == reports.size() + 1);
  CHECK(csv.find("0.33333333333333331") != std::string::npos);
  CHECK(csv.find("\"LD = DL^T, with \"\"quotes\"\", commas\"") != std::string::npos);
  CHECK(csv.find("j=0.5;p=0.29999999999999999") != std::string::npos);
  // Reals print back to the same double.
  std::istringstream row(csv.substr(csv.find('\n') + 1));
  std::string line;
  std::getline(row, line);
  CHECK(line.find(",false,") != std::string::npos);
}

TEST_CASE("write_report") {
  const auto dir = std::filesystem::temp_directory_path();
  const auto path = (dir / "duality_report_test.json").string();
  write_report({sample_report()}, ReportFormat::Json, path);
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(parse_json_report(ss.str()).size() == 1);
  std::filesystem::remove(path);
  CHECK(kind_of([] { write_report({}, ReportFormat::Csv, "/nonexistent/dir/out.csv"); }) == ErrorKind::IoError);
}
