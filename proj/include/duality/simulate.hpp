#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "duality/family.hpp"
#include "duality/processes.hpp"

/// Stochastic counterparts: trajectory samplers for all five processes,
/// stationary samplers and paired Monte Carlo duality estimators.
namespace duality::simulate {

using Point = std::pair<double, double>;

/// A 64-bit Mersenne Twister seeded from (seed, stream_id); the same pair
/// reproduces the same draws.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }
  std::mt19937_64& engine() { return engine_; }

  double uniform();
  double normal();
  double exponential(double rate);

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

/// Gillespie simulation of SEP, SIP or IRW up to time t.
/// Throws InvalidInitialState for a configuration of the wrong size,
/// negative occupations, or SEP occupations above 2j.
processes::Configuration simulate_ctmc(Family family, const Params& params, const processes::Graph& graph,
                                       const processes::Configuration& x0, double t, RngStream& rng);

/// Euler-Maruyama for dz1 = -2k(z1 - z2) dt + sqrt(2 z1 z2) dW, dz2 = -dz1.
/// A step that would leave the open quadrant is redrawn with half the step;
/// more than 40 halvings throw StepSizeUnderflow.
Point simulate_bep(double k, const Point& z0, double t, double dt, RngStream& rng);

/// Angle increment of the two-site BMP, Normal(0, 2t).
double bmp_angle_increment(double t, RngStream& rng);
/// Exact two-site BMP: rotation of x0 by a Normal(0, 2t) angle.
Point simulate_bmp_pair(const Point& x0, double t, RngStream& rng);
/// Lie-Trotter splitting over the edges with step dt; each edge rotates its
/// pair by a Normal(0, 2 dt) angle. Only approximate on graphs with cycles
/// or more than one edge.
std::vector<double> simulate_bmp_graph(const processes::Graph& graph, const std::vector<double>& x0, double t, double dt,
                                       RngStream& rng);

/// One draw from the single-site stationary law: Binomial(2j, p),
/// NegBin(2k, p), Poisson(lambda), Gamma(2k, theta) or Normal(0, 1/2).
double sample_stationary(Family family, const Params& params, RngStream& rng);

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;  // sample standard deviation over sqrt(n)
  std::int64_t n_samples = 0;
};

/// Welford accumulator; merge is Chan's pairwise update.
class McAccumulator {
 public:
  void add(double x);
  void merge(const McAccumulator& other);
  std::int64_t count() const { return n_; }
  double mean() const { return mean_; }
  double variance() const;
  McEstimate estimate() const;

 private:
  std::int64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

struct McOptions {
  int streams = 16;
  double dt = 1e-3;  // BEP step
  int threads = 0;   // 0: hardware concurrency
};

struct DualityEstimate {
  McEstimate left;
  McEstimate right;
  double z_score = 0.0;
};

/// left estimates E_{x0}[D(X_t, y0)], right E_{y0}[D(x0, Y_t)], each from
/// n_samples draws split over fixed streams and merged in stream order.
/// Discrete families use the graph; BEP and BMP are two-site.
/// Throws BadParamRange for n_samples < 100, InvalidInitialState for bad states.
DualityEstimate mc_duality_estimate(Family family, const Params& params, const processes::Graph& graph,
                                    const std::vector<double>& x0, const std::vector<double>& y0, double t,
                                    std::int64_t n_samples, std::uint64_t seed, const McOptions& options = {});

/// E_{x0}[D(X_t, y0)] and E_{y0}[D(x0, Y_t)] for the two-site BMP by
/// Gauss-Hermite quadrature over the angle increment. quad_order >= 20.
std::pair<double, double> bmp_quadrature_duality(const Point& x0, const Point& y0, double t, int quad_order);

/// Exact law on the sector of x0 at time t, as a row of exp(tL).
Eigen::VectorXd ctmc_exact_law(Family family, const Params& params, const processes::Graph& graph,
                               const processes::Configuration& x0, double t);

/// Total variation between an empirical law from `samples` draws of
/// simulate_ctmc and the exact row of exp(tL).
double ctmc_total_variation(Family family, const Params& params, const processes::Graph& graph,
                            const processes::Configuration& x0, double t, std::int64_t samples, std::uint64_t seed);

}  // namespace duality::simulate
