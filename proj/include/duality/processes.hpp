#pragma once

#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "duality/algebra.hpp"
#include "duality/family.hpp"
#include "duality/report.hpp"

/// Particle systems on finite graphs: sectors of fixed total, rate
/// generators, their algebraic two-site counterparts, product duality
/// matrices and exact residual checks.
namespace duality::processes {

using Configuration = std::vector<int>;
using Edge = std::pair<int, int>;

/// Undirected, connected, simple graph on vertices 0..n-1.
class Graph {
 public:
  Graph(int n_vertices, std::vector<Edge> edges);

  static Graph path(int n_vertices);
  /// Parses "0-1,1-2".
  static Graph parse(int n_vertices, const std::string& edges);

  int n_vertices() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }

  friend bool operator==(const Graph& a, const Graph& b) { return a.n_ == b.n_ && a.edges_ == b.edges_; }

 private:
  int n_;
  std::vector<Edge> edges_;  // normalized: first < second, sorted
};

/// All configurations with a fixed total, in lexicographic order.
struct Sector {
  Family family;
  Params params;
  Graph graph;
  int total;
  std::vector<Configuration> states;

  Eigen::Index size() const { return static_cast<Eigen::Index>(states.size()); }
  /// Position of a configuration, or -1.
  Eigen::Index index_of(const Configuration& x) const;
};

/// SEP needs j; SIP needs k; IRW reads nothing. Throws InfeasibleTotal when
/// a SEP total exceeds 2j times the vertex count, NotApplicable for the
/// continuous families.
Sector enumerate_sector(Family family, const Params& params, const Graph& graph, int total);

/// Rate from a site holding `from` particles to one holding `to`.
double jump_rate(Family family, const Params& params, int from, int to);

struct RateMatrix {
  Sector sector;
  Eigen::MatrixXd entries;
};

/// L[x, x^{i,l}] = rate(x_i, x_l) summed over both orientations of each
/// edge; the diagonal makes rows sum to zero.
RateMatrix build_rate_generator(const Sector& sector);

/// Two-site generator assembled from the single-site representation:
///   SEP  F(x)E + E(x)F + 1/2 H(x)H - 2j^2        (dim forced to 2j+1)
///   SIP  -F(x)E - E(x)F - 1/2 H(x)H + 2k^2
///   IRW  (1(x)a - a(x)1)(a_dagger(x)1 - 1(x)a_dagger), which is lambda times
///        the rate generator.
algebra::TruncatedOperator build_algebraic_generator(Family family, const Params& params, int dim_per_site);

/// SEP and SIP generators from the Casimir: +-1/2 (Delta(Omega) - 1(x)Omega - Omega(x)1) + const.
algebra::TruncatedOperator casimir_generator(Family family, const Params& params, int dim_per_site);

/// The second IRW form -X(x)a + 1(x)aX + aX(x)1 - a(x)X.
algebra::TruncatedOperator irw_generator_from_x(const Params& params, int dim_per_site);

/// Rows and columns of a two-site product-basis operator at the states of a
/// two-vertex sector. Throws OutOfRange if a state row is not valid or an
/// occupation does not fit in dim_per_site.
Eigen::MatrixXd restrict_to_sector(const algebra::TruncatedOperator& op, const Sector& sector, int dim_per_site);

/// max over totals 0..max_total of |restricted algebraic - scale * rates|,
/// scale = lambda for IRW and 1 otherwise.
CheckReport check_algebraic_generator(Family family, const Params& params, int max_total, int dim_per_site,
                                      double tolerance = 1e-11);

/// D[x, y] = prod_i kernel_value(kernel, x_i, y_i). Throws GraphMismatch.
Eigen::MatrixXd duality_matrix(const KernelId& kernel, const Sector& x, const Sector& y);

/// ||L1 D - D L2^T||_max.
double generator_duality_residual(const Eigen::MatrixXd& l1, const Eigen::MatrixXd& d, const Eigen::MatrixXd& l2);
/// ||exp(t L1) D - D exp(t L2^T)||_max.
double semigroup_duality_residual(const Eigen::MatrixXd& l1, const Eigen::MatrixXd& d, const Eigen::MatrixXd& l2,
                                  double t);

/// Single-site stationary law: Binomial(2j, p), NegBin(2k, p), Poisson(lambda).
/// Throws OutOfSupport outside the support, MissingParam without p/lambda.
double stationary_pmf(Family family, const Params& params, int x);

/// max |mu(x) L[x,y] - mu(y) L[y,x]| with mu the unnormalized product of
/// stationary marginals; `stationary` supplies p (SEP, SIP) or lambda (IRW).
double detailed_balance_residual(const RateMatrix& l, const Params& stationary);

/// Generator self-duality over all sector pairs with totals 0..max_total.
CheckReport check_generator_duality(Family family, const Params& params, const Graph& graph, int max_total,
                                    double tolerance = 1e-10);
/// Same pairs, semigroup form at time t.
CheckReport check_semigroup_duality(Family family, const Params& params, const Graph& graph, int max_total, double t,
                                    double tolerance = 1e-9);
/// One sector pair (total_x, total_y) with an explicit kernel, which need not
/// belong to `family`. Without t the generator form is checked, with t the
/// semigroup form.
CheckReport check_sector_pair_duality(Family family, const Params& params, const KernelId& kernel, const Graph& graph,
                                      int total_x, int total_y, std::optional<double> t, double tolerance);
/// Sectors 0..max_total.
CheckReport check_detailed_balance(Family family, const Params& params, const Graph& graph, int max_total,
                                   double tolerance = 1e-12);

}  // namespace duality::processes
