#include "duality/processes.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numeric>
#include <regex>
#include <sstream>

#include "duality/errors.hpp"
#include "duality/expm.hpp"
#include "duality/specfun.hpp"

namespace duality::processes {

using algebra::AlgebraKind;
using algebra::RepSpec;
using algebra::TruncatedOperator;
using algebra::rep_matrix;
using algebra::tensor;

Graph::Graph(int n_vertices, std::vector<Edge> edges) : n_(n_vertices) {
  if (n_vertices < 1) throw Error(ErrorKind::InvalidGraph, "a graph needs at least one vertex");
  for (auto [a, b] : edges) {
    if (a < 0 || b < 0 || a >= n_vertices || b >= n_vertices)
      throw Error(ErrorKind::InvalidGraph, "edge endpoint outside the vertex range");
    if (a == b) throw Error(ErrorKind::InvalidGraph, "self-loop at vertex " + std::to_string(a));
    edges_.emplace_back(std::min(a, b), std::max(a, b));
  }
  std::sort(edges_.begin(), edges_.end());
  if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
    throw Error(ErrorKind::InvalidGraph, "duplicate edge");

  std::vector<int> parent(static_cast<std::size_t>(n_));
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> root = [&](int v) { return parent[v] == v ? v : parent[v] = root(parent[v]); };
  for (auto [a, b] : edges_) parent[root(a)] = root(b);
  for (int v = 1; v < n_; ++v)
    if (root(v) != root(0)) throw Error(ErrorKind::InvalidGraph, "graph is not connected");
}

Graph Graph::path(int n_vertices) {
  std::vector<Edge> edges;
  for (int v = 0; v + 1 < n_vertices; ++v) edges.emplace_back(v, v + 1);
  return {n_vertices, edges};
}

Graph Graph::parse(int n_vertices, const std::string& text) {
  static const std::regex edge_re(R"(\s*(\d+)\s*-\s*(\d+)\s*)");
  std::vector<Edge> edges;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::smatch m;
    if (!std::regex_match(item, m, edge_re)) throw Error(ErrorKind::InvalidGraph, "cannot read edge '" + item + "'");
    edges.emplace_back(std::stoi(m[1]), std::stoi(m[2]));
  }
  return {n_vertices, edges};
}

Eigen::Index Sector::index_of(const Configuration& x) const {
  auto it = std::lower_bound(states.begin(), states.end(), x);
  if (it == states.end() || *it != x) return -1;
  return it - states.begin();
}

namespace {

int site_capacity(Family family, const Params& params, int total) {
  switch (family) {
    case Family::SEP: return std::min(sep_capacity(params), total);
    case Family::SIP:
    case Family::IRW: return total;
    default: throw Error(ErrorKind::NotApplicable, "sectors exist for the particle systems only");
  }
}

void fill_states(std::vector<Configuration>& out, Configuration& prefix, int vertex, int remaining, int cap) {
  const int n = static_cast<int>(prefix.size());
  if (vertex == n - 1) {
    if (remaining <= cap) {
      prefix[vertex] = remaining;
      out.push_back(prefix);
    }
    return;
  }
  for (int x = 0; x <= std::min(cap, remaining); ++x) {
    prefix[vertex] = x;
    fill_states(out, prefix, vertex + 1, remaining - x, cap);
  }
}

KernelId kernel_for(Family family, const Params& params) {
  Params kp;
  switch (family) {
    case Family::SEP: kp.j = params.require("j"); kp.p = params.require("p"); break;
    case Family::SIP: kp.k = params.require("k"); kp.c = params.require("c"); break;
    case Family::IRW: kp.lambda = params.require("lambda"); break;
    default: throw Error(ErrorKind::NotApplicable, "no discrete kernel for this family");
  }
  return {family, kp};
}

int max_feasible_total(Family family, const Params& params, const Graph& graph, int requested) {
  if (family == Family::SEP) return std::min(requested, sep_capacity(params) * graph.n_vertices());
  return requested;
}

std::int64_t elapsed_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
}

std::map<std::string, double> report_params(const Params& params, const Graph& graph, int max_total) {
  auto out = params.as_map();
  out["vertices"] = graph.n_vertices();
  out["max_total"] = max_total;
  return out;
}

}  // namespace

Sector enumerate_sector(Family family, const Params& params, const Graph& graph, int total) {
  if (family == Family::SEP) validate_param("j", params.require("j"));
  if (family == Family::SIP) validate_param("k", params.require("k"));
  if (total < 0) throw Error(ErrorKind::InfeasibleTotal, "negative total");
  if (family == Family::SEP && total > sep_capacity(params) * graph.n_vertices())
    throw Error(ErrorKind::InfeasibleTotal, "total " + std::to_string(total) + " exceeds the SEP capacity");
  const int cap = site_capacity(family, params, total);
  Sector sector{family, params, graph, total, {}};
  Configuration prefix(static_cast<std::size_t>(graph.n_vertices()), 0);
  fill_states(sector.states, prefix, 0, total, cap);
  return sector;
}

double jump_rate(Family family, const Params& params, int from, int to) {
  switch (family) {
    case Family::SEP: return from * (2.0 * params.require("j") - to);
    case Family::SIP: return from * (2.0 * params.require("k") + to);
    case Family::IRW: return from;
    default: throw Error(ErrorKind::NotApplicable, "no jump rates for a diffusion");
  }
}

RateMatrix build_rate_generator(const Sector& sector) {
  const Eigen::Index n = sector.size();
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index s = 0; s < n; ++s) {
    const Configuration& x = sector.states[static_cast<std::size_t>(s)];
    for (auto [a, b] : sector.graph.edges()) {
      for (auto [i, k] : {std::pair{a, b}, std::pair{b, a}}) {
        const double rate = jump_rate(sector.family, sector.params, x[i], x[k]);
        if (rate <= 0.0) continue;
        Configuration y = x;
        --y[i];
        ++y[k];
        l(s, sector.index_of(y)) += rate;
      }
    }
    l(s, s) = -l.row(s).sum();
  }
  return {sector, std::move(l)};
}

TruncatedOperator build_algebraic_generator(Family family, const Params& params, int dim_per_site) {
  switch (family) {
    case Family::SEP: {
      const RepSpec spec{AlgebraKind::su2, params};
      const double j = params.require("j");
      const auto h = rep_matrix(spec, "H"), e = rep_matrix(spec, "E"), f = rep_matrix(spec, "F");
      const auto one = TruncatedOperator::identity(h.dim());
      return (tensor(f, e) + tensor(e, f) + 0.5 * tensor(h, h) - 2.0 * j * j * tensor(one, one)).relabeled("L_SEP");
    }
    case Family::SIP: {
      const RepSpec spec{AlgebraKind::su11_discrete, params, dim_per_site};
      const double k = params.require("k");
      const auto h = rep_matrix(spec, "H"), e = rep_matrix(spec, "E"), f = rep_matrix(spec, "F");
      const auto one = TruncatedOperator::identity(h.dim());
      return (-tensor(f, e) - tensor(e, f) - 0.5 * tensor(h, h) + 2.0 * k * k * tensor(one, one)).relabeled("L_SIP");
    }
    case Family::IRW: {
      const RepSpec spec{AlgebraKind::heisenberg, params, dim_per_site};
      const auto a = rep_matrix(spec, "a"), ad = rep_matrix(spec, "a_dagger");
      const auto one = TruncatedOperator::identity(a.dim());
      return ((tensor(one, a) - tensor(a, one)) * (tensor(ad, one) - tensor(one, ad))).relabeled("L_IRW");
    }
    default:
      throw Error(ErrorKind::NotApplicable, "no matrix generator for a diffusion");
  }
}

TruncatedOperator casimir_generator(Family family, const Params& params, int dim_per_site) {
  if (family != Family::SEP && family != Family::SIP)
    throw Error(ErrorKind::NotApplicable, "only SEP and SIP generators come from a Casimir");
  const bool sep = family == Family::SEP;
  const RepSpec spec{sep ? AlgebraKind::su2 : AlgebraKind::su11_discrete, params, dim_per_site};
  const auto omega = algebra::casimir(spec);
  const auto one = TruncatedOperator::identity(omega.dim());
  const auto h = rep_matrix(spec, "H"), e = rep_matrix(spec, "E"), f = rep_matrix(spec, "F");
  const auto delta_omega = algebra::eval_poly(
      algebra::casimir_polynomial(),
      {{"H", algebra::coproduct(h)}, {"E", algebra::coproduct(e)}, {"F", algebra::coproduct(f)}});
  const auto legs = delta_omega - tensor(one, omega) - tensor(omega, one);
  if (sep) {
    const double j = params.require("j");
    return (0.5 * legs - 2.0 * j * j * tensor(one, one)).relabeled("L_SEP");
  }
  const double k = params.require("k");
  return (-0.5 * legs + 2.0 * k * k * tensor(one, one)).relabeled("L_SIP");
}

TruncatedOperator irw_generator_from_x(const Params& params, int dim_per_site) {
  const RepSpec spec{AlgebraKind::heisenberg, params, dim_per_site};
  const auto a = rep_matrix(spec, "a"), x = rep_matrix(spec, "X");
  const auto one = TruncatedOperator::identity(a.dim());
  return (-tensor(x, a) + tensor(one, a * x) + tensor(a * x, one) - tensor(a, x)).relabeled("L_IRW");
}

Eigen::MatrixXd restrict_to_sector(const TruncatedOperator& op, const Sector& sector, int dim_per_site) {
  if (sector.graph.n_vertices() != 2) throw Error(ErrorKind::GraphMismatch, "two-site operators need a two-vertex sector");
  if (op.dim() != static_cast<Eigen::Index>(dim_per_site) * dim_per_site)
    throw Error(ErrorKind::DimMismatch, "operator is not on the two-site product basis");
  std::vector<Eigen::Index> idx;
  for (const auto& x : sector.states) {
    if (x[0] >= dim_per_site || x[1] >= dim_per_site)
      throw Error(ErrorKind::OutOfRange, "occupation exceeds the truncation dimension");
    const Eigen::Index i = static_cast<Eigen::Index>(x[0]) * dim_per_site + x[1];
    if (!op.is_valid(i)) throw Error(ErrorKind::OutOfRange, "sector state falls on a truncated row");
    idx.push_back(i);
  }
  const auto n = static_cast<Eigen::Index>(idx.size());
  Eigen::MatrixXd out(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) {
      const auto v = op.entries()(idx[r], idx[c]);
      if (std::abs(v.imag()) > 1e-13) throw Error(ErrorKind::DomainError, "generator entry is not real");
      out(r, c) = v.real();
    }
  }
  return out;
}

CheckReport check_algebraic_generator(Family family, const Params& params, int max_total, int dim_per_site,
                                      double tolerance) {
  const auto start = std::chrono::steady_clock::now();
  const Graph edge = Graph::path(2);
  const int dim = family == Family::SEP ? sep_capacity(params) + 1 : dim_per_site;
  const auto op = build_algebraic_generator(family, params, dim);
  const double scale = family == Family::IRW ? params.require("lambda") : 1.0;
  double worst = 0.0;
  for (int total = 0; total <= max_feasible_total(family, params, edge, max_total); ++total) {
    const auto sector = enumerate_sector(family, params, edge, total);
    const Eigen::MatrixXd restricted = restrict_to_sector(op, sector, dim);
    const Eigen::MatrixXd rates = build_rate_generator(sector).entries;
    worst = std::max(worst, (restricted - scale * rates).cwiseAbs().maxCoeff());
  }
  auto rp = report_params(params, edge, max_total);
  rp["dim"] = dim;
  auto r = make_report("algebraic_generator", std::string(to_string(family)), rp, worst, tolerance,
                       "two-site generator as a tensor expression in the representation");
  r.elapsed_ms = elapsed_since(start);
  return r;
}

Eigen::MatrixXd duality_matrix(const KernelId& kernel, const Sector& x, const Sector& y) {
  if (!(x.graph == y.graph)) throw Error(ErrorKind::GraphMismatch, "sectors live on different graphs");
  const int n = x.graph.n_vertices();
  Eigen::MatrixXd d(x.size(), y.size());
  for (Eigen::Index a = 0; a < x.size(); ++a) {
    for (Eigen::Index b = 0; b < y.size(); ++b) {
      double v = 1.0;
      for (int i = 0; i < n; ++i)
        v *= specfun::kernel_value(kernel, x.states[static_cast<std::size_t>(a)][i], y.states[static_cast<std::size_t>(b)][i]);
      d(a, b) = v;
    }
  }
  return d;
}

double generator_duality_residual(const Eigen::MatrixXd& l1, const Eigen::MatrixXd& d, const Eigen::MatrixXd& l2) {
  if (l1.rows() != l1.cols() || l2.rows() != l2.cols() || l1.cols() != d.rows() || l2.rows() != d.cols())
    throw Error(ErrorKind::DimMismatch, "generator and duality matrix shapes do not conform");
  if (d.size() == 0) return 0.0;
  return (l1 * d - d * l2.transpose()).cwiseAbs().maxCoeff();
}

double semigroup_duality_residual(const Eigen::MatrixXd& l1, const Eigen::MatrixXd& d, const Eigen::MatrixXd& l2,
                                  double t) {
  if (t < 0.0) throw Error(ErrorKind::DomainError, "negative time");
  if (l1.rows() != l1.cols() || l2.rows() != l2.cols() || l1.cols() != d.rows() || l2.rows() != d.cols())
    throw Error(ErrorKind::DimMismatch, "generator and duality matrix shapes do not conform");
  if (d.size() == 0) return 0.0;
  return (expm(t * l1) * d - d * expm(t * l2.transpose())).cwiseAbs().maxCoeff();
}

double stationary_pmf(Family family, const Params& params, int x) {
  if (x < 0) throw Error(ErrorKind::OutOfSupport, "negative occupation");
  switch (family) {
    case Family::SEP: {
      const int n = sep_capacity(params);
      const double p = params.require("p");
      validate_param("p", p);
      if (x > n) throw Error(ErrorKind::OutOfSupport, "occupation exceeds 2j");
      return std::exp(std::lgamma(n + 1.0) - std::lgamma(x + 1.0) - std::lgamma(n - x + 1.0) + x * std::log(p) +
                      (n - x) * std::log1p(-p));
    }
    case Family::SIP: {
      const double shape = 2.0 * params.require("k");
      const double p = params.require("p");
      validate_param("p", p);
      return std::exp(std::lgamma(shape + x) - std::lgamma(shape) - std::lgamma(x + 1.0) + x * std::log(p) +
                      shape * std::log1p(-p));
    }
    case Family::IRW: {
      const double lambda = params.require("lambda");
      validate_param("lambda", lambda);
      return std::exp(-lambda + x * std::log(lambda) - std::lgamma(x + 1.0));
    }
    default:
      throw Error(ErrorKind::NotApplicable, "continuous family has a density, not a pmf");
  }
}

double detailed_balance_residual(const RateMatrix& l, const Params& stationary) {
  const Sector& s = l.sector;
  Params p = s.params;
  for (auto name : {"p", "lambda"})
    if (auto v = stationary.get(name)) p.set(name, *v);
  Eigen::VectorXd mu(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    double m = 1.0;
    for (int x : s.states[static_cast<std::size_t>(i)]) m *= stationary_pmf(s.family, p, x);
    mu(i) = m;
  }
  if (mu.size() == 0) return 0.0;
  const Eigen::MatrixXd flux = mu.asDiagonal() * l.entries;
  return (flux - flux.transpose()).cwiseAbs().maxCoeff();
}

CheckReport check_generator_duality(Family family, const Params& params, const Graph& graph, int max_total,
                                    double tolerance) {
  const auto start = std::chrono::steady_clock::now();
  const KernelId kernel = kernel_for(family, params);
  std::vector<RateMatrix> generators;
  for (int t = 0; t <= max_feasible_total(family, params, graph, max_total); ++t)
    generators.push_back(build_rate_generator(enumerate_sector(family, params, graph, t)));
  double worst = 0.0;
  for (const auto& lx : generators)
    for (const auto& ly : generators)
      worst = std::max(worst, generator_duality_residual(lx.entries, duality_matrix(kernel, lx.sector, ly.sector), ly.entries));
  auto r = make_report("generator_duality", std::string(to_string(family)), report_params(params, graph, max_total), worst,
                       tolerance, "LD = DL^T with the product kernel");
  r.elapsed_ms = elapsed_since(start);
  return r;
}

CheckReport check_semigroup_duality(Family family, const Params& params, const Graph& graph, int max_total, double t,
                                    double tolerance) {
  const auto start = std::chrono::steady_clock::now();
  const KernelId kernel = kernel_for(family, params);
  std::vector<RateMatrix> generators;
  std::vector<Eigen::MatrixXd> semigroups;
  for (int n = 0; n <= max_feasible_total(family, params, graph, max_total); ++n) {
    generators.push_back(build_rate_generator(enumerate_sector(family, params, graph, n)));
    semigroups.push_back(expm(t * generators.back().entries));
  }
  double worst = 0.0;
  for (std::size_t a = 0; a < generators.size(); ++a) {
    for (std::size_t b = 0; b < generators.size(); ++b) {
      const Eigen::MatrixXd d = duality_matrix(kernel, generators[a].sector, generators[b].sector);
      if (d.size() == 0) continue;
      worst = std::max(worst, (semigroups[a] * d - d * semigroups[b].transpose()).cwiseAbs().maxCoeff());
    }
  }
  auto rp = report_params(params, graph, max_total);
  rp["t"] = t;
  auto r = make_report("semigroup_duality", std::string(to_string(family)), rp, worst, tolerance,
                       "E_x[D(X_t, y)] = E_y[D(x, Y_t)] through exp(tL)");
  r.elapsed_ms = elapsed_since(start);
  return r;
}

CheckReport check_detailed_balance(Family family, const Params& params, const Graph& graph, int max_total,
                                   double tolerance) {
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (int n = 0; n <= max_feasible_total(family, params, graph, max_total); ++n)
    worst = std::max(worst, detailed_balance_residual(build_rate_generator(enumerate_sector(family, params, graph, n)), params));
  auto r = make_report("detailed_balance", std::string(to_string(family)), report_params(params, graph, max_total), worst,
                       tolerance, "reversible product measure");
  r.elapsed_ms = elapsed_since(start);
  return r;
}

CheckReport check_sector_pair_duality(Family family, const Params& params, const KernelId& kernel, const Graph& graph,
                                      int total_x, int total_y, std::optional<double> t, double tolerance) {
  const auto start = std::chrono::steady_clock::now();
  const auto lx = build_rate_generator(enumerate_sector(family, params, graph, total_x));
  const auto ly = build_rate_generator(enumerate_sector(family, params, graph, total_y));
  const Eigen::MatrixXd d = duality_matrix(kernel, lx.sector, ly.sector);
  const double r = t ? semigroup_duality_residual(lx.entries, d, ly.entries, *t)
                     : generator_duality_residual(lx.entries, d, ly.entries);
  auto rp = params.as_map();
  rp["vertices"] = graph.n_vertices();
  rp["total_x"] = total_x;
  rp["total_y"] = total_y;
  if (t) rp["t"] = *t;
  const bool own = kernel.family() == family;
  auto rep = make_report(t ? "semigroup_duality" : "generator_duality", std::string(to_string(family)), rp, r, tolerance,
                         own ? "LD = DL^T with the product kernel"
                             : std::string("LD = DL^T with the ") + std::string(to_string(kernel.family())) +
                                   " kernel (mismatched)");
  rep.elapsed_ms = elapsed_since(start);
  return rep;
}

}  // namespace duality::processes
