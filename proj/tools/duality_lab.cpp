#include <iostream>
#include <optional>
#include <set>
#include <string>

#include "CLI11.hpp"
#include "duality/errors.hpp"
#include "duality/report.hpp"
#include "duality/suite.hpp"

using namespace duality;

namespace {

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format = "json";
  int jobs = 1;
  bool quiet = false;
};

// Check classes selected by each subcommand; `run` takes everything.
const std::map<std::string, std::set<std::string>> kClasses{
    {"check-algebra", {"commutation", "casimir", "casimir_rewrite", "intertwining", "algebraic_generator"}},
    {"check-duality", {"generator_duality", "detailed_balance"}},
    {"check-semigroup", {"semigroup_duality", "bmp_quadrature", "bmp_quadrature_stability"}},
    {"check-continuous", {"continuous_duality", "change_of_variable", "bessel_ode", "bessel_T"}},
    {"mc-check", {"mc_duality", "ctmc_law"}},
};

bool selected(const std::string& command, const suite::CheckDescriptor& d) {
  if (command == "run") return true;
  const bool continuous = d.family && (*d.family == Family::BEP || *d.family == Family::BMP);
  // BEP versions of the algebraic checks live with the continuous ones.
  if (command == "check-algebra" && continuous) return false;
  if (command == "check-continuous" && continuous && (d.name == "intertwining" || d.name == "casimir_rewrite"))
    return true;
  return kClasses.at(command).count(d.name) > 0;
}

int execute(const std::string& command, const Options& opt) {
  suite::SuiteConfig config =
      opt.config.empty() ? suite::parse_config(suite::default_suite_text()) : suite::load_config(opt.config);
  config.seed = suite::resolve_seed(config.seed, opt.seed);
  std::erase_if(config.checks, [&](const auto& d) { return !selected(command, d); });

  suite::RunOptions run;
  run.jobs = opt.jobs;
  run.log = opt.quiet ? nullptr : &std::cerr;
  if (!opt.quiet) std::cerr << "seed " << config.seed << ", " << config.checks.size() << " checks\n";
  const auto reports = suite::run_suite(config, run);

  const auto format = opt.format == "csv" ? ReportFormat::Csv : ReportFormat::Json;
  const std::string path = !opt.out.empty() ? opt.out : config.output_path;
  if (path.empty())
    std::cout << render_report(reports, format);
  else
    write_report(reports, format, path);

  std::size_t failed = 0;
  for (const auto& r : reports) {
    if (r.passed) continue;
    ++failed;
    if (!opt.quiet)
      std::cerr << "FAIL " << r.check_name << " " << r.family << " residual=" << r.residual << " tolerance=" << r.tolerance
                << (r.paper_anchor.rfind("error:", 0) == 0 ? " " + r.paper_anchor : "") << '\n';
  }
  if (!opt.quiet) std::cerr << reports.size() - failed << "/" << reports.size() << " passed\n";
  return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Self-duality verification lab"};
  app.require_subcommand(1);
  Options opt;
  std::string chosen;

  auto add = [&](const std::string& name, const std::string& help) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", opt.config, "suite config file (default: bundled suite)")->check(CLI::ExistingFile);
    sub->add_option("--seed", opt.seed, "seed, overrides DUALITY_LAB_SEED and the config");
    sub->add_option("--out", opt.out, "report path (default: config output or stdout)");
    sub->add_option("--format", opt.format, "report format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--jobs", opt.jobs, "descriptors evaluated concurrently")->check(CLI::PositiveNumber);
    sub->add_flag("--quiet", opt.quiet, "no progress or failure lines on stderr");
    sub->callback([&chosen, name] { chosen = name; });
  };
  add("check-algebra", "commutation, Casimir, rewrites, intertwining, algebraic generators");
  add("check-duality", "generator self-duality and detailed balance");
  add("check-semigroup", "semigroup self-duality, BMP quadrature");
  add("check-continuous", "BEP and BMP differential-operator checks");
  add("mc-check", "Monte Carlo duality estimates and the Gillespie law");
  add("run", "the full suite");
  auto* print = app.add_subcommand("default-config", "print the bundled suite config");
  print->callback([] {
    std::cout << suite::default_suite_text();
    std::exit(0);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  try {
    return execute(chosen, opt);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
