#include "duality/suite.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <ostream>
#include <regex>
#include <sstream>
#include <thread>

#include "duality/algebra.hpp"
#include "duality/diffops.hpp"
#include "duality/errors.hpp"
#include "duality/processes.hpp"
#include "duality/simulate.hpp"

namespace duality::suite {

namespace {

const char* const kParamNames[] = {"j", "p", "k", "c", "lambda", "theta"};

[[noreturn]] void parse_error(int line, const std::string& what) {
  throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": " + what);
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, sep);) out.push_back(trim(item));
  return out;
}

// Reals, optionally written as a fraction "1/2".
double parse_real(const std::string& s, int line) {
  auto one = [&](const std::string& part) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(part, &used);
    } catch (const std::exception&) {
      parse_error(line, "not a number: '" + s + "'");
    }
    if (used != part.size()) parse_error(line, "not a number: '" + s + "'");
    return v;
  };
  const auto slash = s.find('/');
  if (slash == std::string::npos) return one(s);
  const double den = one(s.substr(slash + 1));
  if (den == 0.0) parse_error(line, "zero denominator in '" + s + "'");
  return one(s.substr(0, slash)) / den;
}

std::int64_t parse_integer(const std::string& s, int line) {
  const double v = parse_real(s, line);
  if (v != std::floor(v) || std::abs(v) > 9e15) parse_error(line, "not an integer: '" + s + "'");
  return static_cast<std::int64_t>(v);
}

std::vector<double> parse_reals(const std::string& s, int line) {
  std::vector<double> out;
  for (const auto& part : split(s, ',')) out.push_back(parse_real(part, line));
  return out;
}

bool parse_bool(const std::string& s, int line) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  parse_error(line, "not a boolean: '" + s + "'");
}

void bad_range(const std::string& what) { throw Error(ErrorKind::BadParamRange, what); }

void apply_key(CheckDescriptor& d, const std::string& key, const std::string& value, int line) {
  if (key == "name") {
    d.name = value;
  } else if (key == "family") {
    try {
      d.family = parse_family(value);
    } catch (const Error&) {
      parse_error(line, "unknown family '" + value + "'");
    }
  } else if (std::find(std::begin(kParamNames), std::end(kParamNames), key) != std::end(kParamNames)) {
    d.params.set(key, parse_real(value, line));
  } else if (key == "edges") {
    d.edges = value;
  } else if (key == "vertices") {
    d.vertices = static_cast<int>(parse_integer(value, line));
    if (d.vertices < 2) bad_range("vertices must be at least 2");
  } else if (key == "totals") {
    d.totals.clear();
    for (double v : parse_reals(value, line)) {
      if (v != std::floor(v) || v < 0) bad_range("totals must be nonnegative integers");
      d.totals.push_back(static_cast<int>(v));
    }
    if (d.totals.empty() || d.totals.size() > 2) parse_error(line, "totals takes one or two values");
  } else if (key == "grid") {
    d.grid = parse_reals(value, line);
  } else if (key == "t") {
    d.t_values = parse_reals(value, line);
    for (double t : d.t_values)
      if (!(t >= 0.0)) bad_range("t must be nonnegative");
  } else if (key == "tolerance") {
    d.tolerance = parse_real(value, line);
    if (!(*d.tolerance > 0.0)) bad_range("tolerance must be positive");
  } else if (key == "n_samples") {
    d.n_samples = parse_integer(value, line);
    if (*d.n_samples < 100) bad_range("n_samples must be at least 100");
  } else if (std::find(known_options().begin(), known_options().end(), key) != known_options().end()) {
    d.options[key] = value;
  } else {
    parse_error(line, "unknown key '" + key + "'");
  }
}

void validate_descriptor(const CheckDescriptor& d) {
  if (d.name.empty()) parse_error(d.line, "check without a name");
  if (std::find(known_checks().begin(), known_checks().end(), d.name) == known_checks().end())
    throw Error(ErrorKind::UnknownCheckName, "line " + std::to_string(d.line) + ": '" + d.name + "'");
  const bool family_free = d.name == "commutation" || d.name == "casimir" || d.name == "change_of_variable" ||
                           d.name == "bessel_ode" || d.name == "bessel_T" || d.name.rfind("bmp_quadrature", 0) == 0;
  if (!family_free && !d.family) parse_error(d.line, "check '" + d.name + "' needs a family");
}

// ---------------------------------------------------------------------------
// Descriptor accessors

std::string option(const CheckDescriptor& d, const std::string& key, const std::string& fallback) {
  auto it = d.options.find(key);
  return it == d.options.end() ? fallback : it->second;
}

double option_real(const CheckDescriptor& d, const std::string& key, double fallback) {
  auto it = d.options.find(key);
  return it == d.options.end() ? fallback : parse_real(it->second, d.line);
}

std::vector<double> option_reals(const CheckDescriptor& d, const std::string& key, std::vector<double> fallback) {
  auto it = d.options.find(key);
  return it == d.options.end() ? fallback : parse_reals(it->second, d.line);
}

processes::Graph graph_of(const CheckDescriptor& d) {
  if (d.edges.empty()) return processes::Graph::path(d.vertices);
  int n = d.vertices;
  for (const auto& e : split(d.edges, ','))
    for (const auto& v : split(e, '-'))
      if (!v.empty() && std::all_of(v.begin(), v.end(), ::isdigit)) n = std::max(n, std::stoi(v) + 1);
  return processes::Graph::parse(n, d.edges);
}

diffops::GridSpec grid_of(const CheckDescriptor& d, Family family) {
  if (d.grid.empty()) return diffops::GridSpec::standard(family);
  diffops::GridSpec g{d.grid, option_real(d, "exclusion_radius", family == Family::BEP ? 0.1 : 0.0)};
  g.validate(family);
  return g;
}

int max_total(const CheckDescriptor& d, int fallback) {
  if (d.totals.empty()) return fallback;
  return *std::max_element(d.totals.begin(), d.totals.end());
}

algebra::AlgebraKind algebra_of(const CheckDescriptor& d) {
  std::string name = option(d, "algebra", "");
  if (name.empty() && d.family) {
    switch (*d.family) {
      case Family::SEP: return algebra::AlgebraKind::su2;
      case Family::SIP: return algebra::AlgebraKind::su11_discrete;
      case Family::IRW: return algebra::AlgebraKind::heisenberg;
      default: break;
    }
  }
  if (name == "su2") return algebra::AlgebraKind::su2;
  if (name == "su11" || name == "su11_discrete") return algebra::AlgebraKind::su11_discrete;
  if (name == "heisenberg") return algebra::AlgebraKind::heisenberg;
  throw Error(ErrorKind::BadParamRange, "line " + std::to_string(d.line) + ": algebra must be su2, su11 or heisenberg");
}

double tolerance_of(const CheckDescriptor& d) { return d.tolerance ? *d.tolerance : default_tolerance(d); }

std::int64_t elapsed_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
}

// Residual checks over several t values keep the worst.
CheckReport worst_of(std::vector<CheckReport> reports) {
  CheckReport worst = reports.front();
  for (const auto& r : reports)
    if (!(r.residual <= worst.residual)) worst = r;
  return worst;
}

std::uint64_t stream_seed(std::uint64_t seed, std::size_t index, int attempt) {
  return seed * 1000 + 2 * static_cast<std::uint64_t>(index) + static_cast<std::uint64_t>(attempt);
}

CheckReport run_mc(const CheckDescriptor& d, std::uint64_t seed, std::size_t index, std::ostream* log) {
  const Family family = *d.family;
  const auto graph = is_discrete(family) ? graph_of(d) : processes::Graph::path(2);
  const auto x0 = option_reals(d, "x0", {});
  const auto y0 = option_reals(d, "y0", {});
  if (x0.empty() || y0.empty()) throw Error(ErrorKind::InvalidInitialState, "mc_duality needs x0 and y0");
  const auto ts = d.t_values.empty() ? std::vector<double>{0.5} : d.t_values;
  simulate::McOptions opts;
  opts.dt = option_real(d, "dt", 1e-3);
  opts.streams = static_cast<int>(option_real(d, "streams", 16));
  const std::int64_t n = d.n_samples.value_or(100000);

  double worst_z = 0.0;
  std::uint64_t first = stream_seed(seed, index, 0), retry = 0;
  for (double t : ts) {
    auto est = simulate::mc_duality_estimate(family, d.params, graph, x0, y0, t, n, first, opts);
    if (log) *log << "mc_duality " << to_string(family) << " t=" << t << " seed=" << first << " z=" << est.z_score << '\n';
    if (est.z_score > 3.0) {
      retry = stream_seed(seed, index, 1);
      est = simulate::mc_duality_estimate(family, d.params, graph, x0, y0, t, n, retry, opts);
      if (log) *log << "  retry seed=" << retry << " z=" << est.z_score << '\n';
    }
    worst_z = std::max(worst_z, est.z_score);
  }
  auto rp = d.params.as_map();
  rp["n_samples"] = static_cast<double>(n);
  rp["seed"] = static_cast<double>(first);
  if (retry) rp["retry_seed"] = static_cast<double>(retry);
  if (!is_discrete(family)) rp["dt"] = opts.dt;
  return make_report("mc_duality", std::string(to_string(family)), rp, worst_z, tolerance_of(d),
                     "E_x[D(X_t, y)] = E_y[D(x, Y_t)] by paired Monte Carlo (z-score)");
}

CheckReport dispatch(const CheckDescriptor& d, std::uint64_t seed, std::size_t index, std::ostream* log) {
  const double tol = tolerance_of(d);
  const std::string& name = d.name;

  if (name == "commutation") {
    return algebra::check_commutation({algebra_of(d), d.params, static_cast<int>(option_real(d, "dim", 40))}, tol);
  }
  if (name == "casimir") {
    return algebra::check_casimir({algebra_of(d), d.params, static_cast<int>(option_real(d, "dim", 40))},
                                  static_cast<int>(option_real(d, "coproduct_dim", 20)), tol);
  }
  if (name == "casimir_rewrite") {
    if (*d.family == Family::BEP) return diffops::check_bep_casimir(d.params.require("k"), grid_of(d, Family::BEP), tol);
    return algebra::check_casimir_rewrite({algebra_of(d), d.params, static_cast<int>(option_real(d, "dim", 40))}, *d.family,
                                          tol);
  }
  if (name == "intertwining") {
    if (*d.family == Family::BEP)
      return diffops::check_continuous_intertwining(d.params.require("k"), grid_of(d, Family::BEP), tol);
    return algebra::check_intertwining(*d.family, d.params, static_cast<int>(option_real(d, "dim", 40)),
                                       static_cast<int>(option_real(d, "sites", 1)), tol);
  }
  if (name == "algebraic_generator") {
    const int mt = max_total(d, 5);
    return processes::check_algebraic_generator(*d.family, d.params, mt, static_cast<int>(option_real(d, "dim", mt + 3)),
                                                tol);
  }
  if (name == "generator_duality" || name == "semigroup_duality") {
    const auto graph = graph_of(d);
    const bool semigroup = name == "semigroup_duality";
    const auto ts = semigroup ? (d.t_values.empty() ? std::vector<double>{1.0} : d.t_values) : std::vector<double>{0.0};
    const std::string kernel_family = option(d, "kernel", "");
    std::vector<CheckReport> reports;
    for (double t : ts) {
      const std::optional<double> tt = semigroup ? std::optional<double>(t) : std::nullopt;
      if (d.totals.size() == 2 || !kernel_family.empty()) {
        const Family kf = kernel_family.empty() ? *d.family : parse_family(kernel_family);
        const int tx = d.totals.empty() ? 2 : d.totals.front(), ty = d.totals.empty() ? 2 : d.totals.back();
        reports.push_back(processes::check_sector_pair_duality(*d.family, d.params, KernelId(kf, d.params), graph, tx, ty,
                                                               tt, tol));
      } else if (semigroup) {
        reports.push_back(processes::check_semigroup_duality(*d.family, d.params, graph, max_total(d, 5), t, tol));
      } else {
        reports.push_back(processes::check_generator_duality(*d.family, d.params, graph, max_total(d, 5), tol));
      }
    }
    return worst_of(std::move(reports));
  }
  if (name == "detailed_balance") {
    return processes::check_detailed_balance(*d.family, d.params, graph_of(d), max_total(d, 5), tol);
  }
  if (name == "continuous_duality") {
    return diffops::check_continuous_duality(*d.family, d.params, grid_of(d, *d.family), tol);
  }
  if (name == "change_of_variable") {
    return diffops::check_change_of_variable(static_cast<int>(option_real(d, "max_degree", 3)), grid_of(d, Family::BMP),
                                             parse_bool(option(d, "time_scaled", "false"), d.line), tol);
  }
  if (name == "bessel_ode") {
    const auto grid = d.grid.empty() ? diffops::GridSpec::uniform(0.1, 20.0, 60) : diffops::GridSpec{d.grid, 0.0};
    return diffops::check_bessel_ode(option_real(d, "nu", 0.0), grid, tol);
  }
  if (name == "bessel_T") {
    const auto grid = d.grid.empty() ? diffops::GridSpec::uniform(0.1, 5.0, 25) : diffops::GridSpec{d.grid, 0.0};
    return diffops::check_bessel_T(option_real(d, "nu", 0.0), option_reals(d, "w", {0.0, 0.5, 1.0, 2.0}), grid, tol);
  }
  if (name == "bmp_quadrature" || name == "bmp_quadrature_stability") {
    const auto x0 = option_reals(d, "x0", {1.0, 0.0}), y0 = option_reals(d, "y0", {0.5, 0.5});
    if (x0.size() != 2 || y0.size() != 2) throw Error(ErrorKind::InvalidInitialState, "BMP states are pairs");
    const int order = static_cast<int>(option_real(d, "order", 120));
    const auto ts = d.t_values.empty() ? std::vector<double>{0.1, 0.5, 1.0} : d.t_values;
    double worst = 0.0;
    for (double t : ts) {
      const auto q = simulate::bmp_quadrature_duality({x0[0], x0[1]}, {y0[0], y0[1]}, t, order);
      if (name == "bmp_quadrature") {
        worst = std::max(worst, std::abs(q.first - q.second));
      } else {
        const auto q2 = simulate::bmp_quadrature_duality({x0[0], x0[1]}, {y0[0], y0[1]}, t, 2 * order);
        worst = std::max({worst, std::abs(q.first - q2.first), std::abs(q.second - q2.second)});
      }
    }
    std::map<std::string, double> rp{{"x0_1", x0[0]}, {"x0_2", x0[1]}, {"y0_1", y0[0]}, {"y0_2", y0[1]},
                                     {"order", order}};
    return make_report(name, "BMP", rp, worst, tol,
                       name == "bmp_quadrature" ? "E_x[D(X_t, y)] = E_y[D(x, Y_t)] by Gauss-Hermite quadrature"
                                                : "quadrature stable under doubling the order");
  }
  if (name == "mc_duality") return run_mc(d, seed, index, log);
  if (name == "ctmc_law") {
    const auto x0 = option_reals(d, "x0", {});
    processes::Configuration cx;
    for (double v : x0) cx.push_back(static_cast<int>(v));
    const double t = d.t_values.empty() ? 5.0 : d.t_values.front();
    const std::int64_t n = d.n_samples.value_or(100000);
    const std::uint64_t s = stream_seed(seed, index, 0);
    if (log) *log << "ctmc_law " << to_string(*d.family) << " seed=" << s << '\n';
    const double tv = simulate::ctmc_total_variation(*d.family, d.params, graph_of(d), cx, t, n, s);
    auto rp = d.params.as_map();
    rp["t"] = t;
    rp["n_samples"] = static_cast<double>(n);
    rp["seed"] = static_cast<double>(s);
    return make_report("ctmc_law", std::string(to_string(*d.family)), rp, tv, tol,
                       "Gillespie law against the row of exp(tL) (total variation)");
  }
  throw Error(ErrorKind::UnknownCheckName, name);
}

}  // namespace

const std::vector<std::string>& known_checks() {
  static const std::vector<std::string> names{
      "commutation",      "casimir",          "casimir_rewrite",    "intertwining",   "algebraic_generator",
      "generator_duality", "semigroup_duality", "detailed_balance",   "continuous_duality", "change_of_variable",
      "bessel_ode",       "bessel_T",         "bmp_quadrature",     "bmp_quadrature_stability", "mc_duality",
      "ctmc_law"};
  return names;
}

const std::vector<std::string>& known_options() {
  static const std::vector<std::string> names{"algebra", "dim",  "coproduct_dim", "sites", "kernel", "max_degree",
                                              "time_scaled", "nu", "w", "x0", "y0", "order", "dt", "streams",
                                              "exclusion_radius"};
  return names;
}

SuiteConfig parse_config(std::string_view text) {
  SuiteConfig config;
  static const std::regex token(R"((\w+)\s*=\s*(\S+))");
  std::istringstream in{std::string(text)};
  int line_no = 0;
  bool in_check = false;
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    std::string line = raw.substr(0, raw.find('#'));
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      const auto close = line.find(']');
      if (close == std::string::npos) parse_error(line_no, "unterminated section header");
      const std::string section = trim(line.substr(1, close - 1));
      if (section == "check") {
        config.checks.emplace_back();
        config.checks.back().line = line_no;
        in_check = true;
      } else if (section == "suite") {
        in_check = false;
      } else {
        parse_error(line_no, "unknown section [" + section + "]");
      }
      line = trim(line.substr(close + 1));
    }
    // Every non-blank character must belong to a key = value token.
    std::string rest = line;
    for (auto it = std::sregex_iterator(line.begin(), line.end(), token); it != std::sregex_iterator(); ++it) {
      const std::string key = (*it)[1], value = (*it)[2];
      for (std::size_t i = static_cast<std::size_t>(it->position()); i < static_cast<std::size_t>(it->position() + it->length()); ++i)
        rest[i] = ' ';
      if (in_check) {
        apply_key(config.checks.back(), key, value, line_no);
      } else if (key == "seed") {
        const auto s = parse_integer(value, line_no);
        if (s < 0) bad_range("seed must be nonnegative");
        config.seed = static_cast<std::uint64_t>(s);
      } else if (key == "output") {
        config.output_path = value;
      } else {
        parse_error(line_no, "unknown suite key '" + key + "'");
      }
    }
    if (!trim(rest).empty()) parse_error(line_no, "expected key = value, got '" + trim(rest) + "'");
  }
  for (const auto& d : config.checks) validate_descriptor(d);
  return config;
}

SuiteConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

double default_tolerance(const CheckDescriptor& d) {
  const std::string& n = d.name;
  const bool bep = d.family && *d.family == Family::BEP;
  if (n == "commutation") return 1e-12;
  if (n == "casimir") return 1e-11;
  if (n == "casimir_rewrite") return bep ? 1e-6 : 1e-10;
  if (n == "intertwining") return bep ? 1e-8 : (option_real(d, "sites", 1) == 2 ? 1e-9 : 1e-10);
  if (n == "algebraic_generator") return 1e-11;
  if (n == "generator_duality") return 1e-10;
  if (n == "semigroup_duality") return 1e-9;
  if (n == "detailed_balance") return 1e-12;
  if (n == "continuous_duality") return bep ? 1e-6 : 1e-8;
  if (n == "change_of_variable") return 1e-10;
  if (n == "bessel_ode" || n == "bessel_T") return 1e-9;
  if (n == "bmp_quadrature") return 1e-6;
  if (n == "bmp_quadrature_stability") return 1e-8;
  if (n == "mc_duality") return 3.0;
  if (n == "ctmc_law") return 0.02;
  throw Error(ErrorKind::UnknownCheckName, n);
}

std::uint64_t resolve_seed(std::uint64_t config_seed, std::optional<std::uint64_t> explicit_seed) {
  if (explicit_seed) return *explicit_seed;
  if (const char* env = std::getenv("DUALITY_LAB_SEED"); env && *env) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(env, &used);
      if (used == std::string_view(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw Error(ErrorKind::BadParamRange, std::string("DUALITY_LAB_SEED is not an unsigned integer: ") + env);
  }
  return config_seed;
}

CheckReport run_check(const CheckDescriptor& check, std::uint64_t seed, std::size_t index, std::ostream* log) {
  const auto start = std::chrono::steady_clock::now();
  CheckReport r;
  try {
    r = dispatch(check, seed, index, log);
  } catch (const std::exception& e) {
    auto rp = check.params.as_map();
    double tol = 0.0;
    try {
      tol = tolerance_of(check);
    } catch (const std::exception&) {
    }
    r = make_report(check.name, check.family ? std::string(to_string(*check.family)) : "", rp,
                    std::numeric_limits<double>::infinity(), tol, std::string("error: ") + e.what());
    r.passed = false;
  }
  r.elapsed_ms = elapsed_since(start);
  return r;
}

std::vector<CheckReport> run_suite(const SuiteConfig& config, const RunOptions& options) {
  const std::size_t n = config.checks.size();
  std::vector<CheckReport> reports(n);
  const int jobs = std::clamp(options.jobs, 1, std::max(1, static_cast<int>(n)));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) reports[i] = run_check(config.checks[i], config.seed, i, options.log);
    return reports;
  }
  // Workers pull indices; each report lands in its config slot. Logging is
  // only done from the sequential path to keep lines whole.
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < jobs; ++w)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next++) < n;) reports[i] = run_check(config.checks[i], config.seed, i, nullptr);
    });
  for (auto& t : pool) t.join();
  return reports;
}

bool all_passed(const std::vector<CheckReport>& reports) {
  return std::all_of(reports.begin(), reports.end(), [](const CheckReport& r) { return r.passed; });
}

}  // namespace duality::suite
