#include "duality/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <thread>

#include "duality/errors.hpp"
#include "duality/expm.hpp"
#include "duality/quadrature.hpp"
#include "duality/specfun.hpp"

namespace duality::simulate {

namespace {

std::mt19937_64 seeded_engine(std::uint64_t seed, std::uint64_t stream_id) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream_id), static_cast<std::uint32_t>(stream_id >> 32),
                    0x9e3779b9u};
  return std::mt19937_64(seq);
}

void validate_configuration(Family family, const Params& params, const processes::Graph& graph,
                            const processes::Configuration& x) {
  if (!is_discrete(family)) throw Error(ErrorKind::NotApplicable, "not a particle system");
  if (static_cast<int>(x.size()) != graph.n_vertices())
    throw Error(ErrorKind::InvalidInitialState, "configuration size differs from vertex count");
  const int cap = family == Family::SEP ? sep_capacity(params) : -1;
  for (int xi : x) {
    if (xi < 0) throw Error(ErrorKind::InvalidInitialState, "negative occupation");
    if (cap >= 0 && xi > cap) throw Error(ErrorKind::InvalidInitialState, "occupation above 2j");
  }
}

Point rotate(const Point& x, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {c * x.first - s * x.second, s * x.first + c * x.second};
}

double product_kernel(const KernelId& id, const std::vector<double>& x, const std::vector<double>& y) {
  double d = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) d *= specfun::kernel_value(id, x[i], y[i]);
  return d;
}

processes::Configuration to_configuration(const std::vector<double>& v) {
  processes::Configuration x(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] != std::floor(v[i])) throw Error(ErrorKind::InvalidInitialState, "non-integer occupation");
    x[i] = static_cast<int>(v[i]);
  }
  return x;
}

std::vector<double> to_vector(const processes::Configuration& x) { return {x.begin(), x.end()}; }

Point to_point(const std::vector<double>& v) {
  if (v.size() != 2) throw Error(ErrorKind::InvalidInitialState, "two-site state expected");
  return {v[0], v[1]};
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), engine_(seeded_engine(seed, stream_id)) {}

double RngStream::uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
double RngStream::normal() { return normal_(engine_); }
double RngStream::exponential(double rate) { return std::exponential_distribution<double>(rate)(engine_); }

processes::Configuration simulate_ctmc(Family family, const Params& params, const processes::Graph& graph,
                                       const processes::Configuration& x0, double t, RngStream& rng) {
  validate_configuration(family, params, graph, x0);
  if (!(t >= 0.0)) throw Error(ErrorKind::BadParamRange, "t must be nonnegative");
  processes::Configuration x = x0;
  std::vector<std::pair<int, int>> moves;
  std::vector<double> rates;
  for (auto [a, b] : graph.edges()) {
    moves.emplace_back(a, b);
    moves.emplace_back(b, a);
  }
  rates.resize(moves.size());
  double clock = 0.0;
  for (;;) {
    double total = 0.0;
    for (std::size_t m = 0; m < moves.size(); ++m) {
      rates[m] = processes::jump_rate(family, params, x[moves[m].first], x[moves[m].second]);
      if (rates[m] < 0.0) rates[m] = 0.0;
      total += rates[m];
    }
    if (total <= 0.0) return x;
    clock += rng.exponential(total);
    if (clock > t) return x;
    double pick = rng.uniform() * total;
    std::size_t m = 0;
    for (; m + 1 < moves.size(); ++m) {
      if (pick < rates[m]) break;
      pick -= rates[m];
    }
    while (rates[m] <= 0.0) --m;  // guards a pick landing on the rounding edge
    --x[moves[m].first];
    ++x[moves[m].second];
  }
}

Point simulate_bep(double k, const Point& z0, double t, double dt, RngStream& rng) {
  if (!(z0.first > 0.0 && z0.second > 0.0)) throw Error(ErrorKind::InvalidInitialState, "BEP needs positive energies");
  if (!(dt > 0.0)) throw Error(ErrorKind::BadParamRange, "dt must be positive");
  if (!(t >= 0.0)) throw Error(ErrorKind::BadParamRange, "t must be nonnegative");
  Point z = z0;
  double elapsed = 0.0;
  while (elapsed < t) {
    double h = std::min(dt, t - elapsed);
    int halvings = 0;
    for (;;) {
      const double drift = -2.0 * k * (z.first - z.second);
      const double vol = std::sqrt(2.0 * z.first * z.second);
      const double dz = drift * h + vol * std::sqrt(h) * rng.normal();
      if (z.first + dz > 0.0 && z.second - dz > 0.0) {
        z.first += dz;
        z.second -= dz;
        break;
      }
      if (++halvings > 40) throw Error(ErrorKind::StepSizeUnderflow, "half-stepping exceeded 40 levels");
      h *= 0.5;
    }
    elapsed += h;
  }
  return z;
}

double bmp_angle_increment(double t, RngStream& rng) { return std::sqrt(2.0 * t) * rng.normal(); }

Point simulate_bmp_pair(const Point& x0, double t, RngStream& rng) {
  if (t == 0.0) return x0;
  return rotate(x0, bmp_angle_increment(t, rng));
}

std::vector<double> simulate_bmp_graph(const processes::Graph& graph, const std::vector<double>& x0, double t, double dt,
                                       RngStream& rng) {
  if (static_cast<int>(x0.size()) != graph.n_vertices())
    throw Error(ErrorKind::InvalidInitialState, "state size differs from vertex count");
  if (!(dt > 0.0)) throw Error(ErrorKind::BadParamRange, "dt must be positive");
  std::vector<double> x = x0;
  double elapsed = 0.0;
  while (elapsed < t) {
    const double h = std::min(dt, t - elapsed);
    for (auto [a, b] : graph.edges()) {
      const Point r = rotate({x[a], x[b]}, bmp_angle_increment(h, rng));
      x[a] = r.first;
      x[b] = r.second;
    }
    elapsed += h;
  }
  return x;
}

double sample_stationary(Family family, const Params& params, RngStream& rng) {
  auto& g = rng.engine();
  switch (family) {
    case Family::SEP:
      return std::binomial_distribution<int>(sep_capacity(params), params.require("p"))(g);
    case Family::SIP: {
      // NegBin(2k, p) as a Poisson mixture over Gamma(2k, p/(1-p)).
      const double p = params.require("p");
      const double rate = std::gamma_distribution<double>(2.0 * params.require("k"), p / (1.0 - p))(g);
      return rate > 0.0 ? std::poisson_distribution<long long>(rate)(g) : 0.0;
    }
    case Family::IRW:
      return std::poisson_distribution<long long>(params.require("lambda"))(g);
    case Family::BEP:
      return std::gamma_distribution<double>(2.0 * params.require("k"), params.get("theta").value_or(1.0))(g);
    case Family::BMP:
      return std::sqrt(0.5) * rng.normal();
  }
  throw Error(ErrorKind::NotApplicable, "unknown family");
}

void McAccumulator::add(double x) {
  ++n_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(n_);
  m2_ += delta * (x - mean_);
}

void McAccumulator::merge(const McAccumulator& other) {
  if (other.n_ == 0) return;
  if (n_ == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(n_), nb = static_cast<double>(other.n_);
  const double n = na + nb;
  const double delta = other.mean_ - mean_;
  mean_ += delta * nb / n;
  m2_ += other.m2_ + delta * delta * na * nb / n;
  n_ += other.n_;
}

double McAccumulator::variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }

McEstimate McAccumulator::estimate() const {
  return {mean_, n_ > 0 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0, n_};
}

DualityEstimate mc_duality_estimate(Family family, const Params& params, const processes::Graph& graph,
                                    const std::vector<double>& x0, const std::vector<double>& y0, double t,
                                    std::int64_t n_samples, std::uint64_t seed, const McOptions& options) {
  if (n_samples < 100) throw Error(ErrorKind::BadParamRange, "n_samples must be at least 100");
  if (options.streams < 1) throw Error(ErrorKind::BadParamRange, "at least one stream");
  const KernelId kernel(family, params);

  // One side of the estimator: evolve `start` and pair it with `fixed`.
  std::function<std::vector<double>(const std::vector<double>&, RngStream&)> evolve;
  if (is_discrete(family)) {
    const auto cx = to_configuration(x0), cy = to_configuration(y0);
    validate_configuration(family, params, graph, cx);
    validate_configuration(family, params, graph, cy);
    evolve = [&](const std::vector<double>& s, RngStream& rng) {
      return to_vector(simulate_ctmc(family, params, graph, to_configuration(s), t, rng));
    };
  } else if (family == Family::BEP) {
    const Point zx = to_point(x0), zy = to_point(y0);
    if (!(zx.first > 0 && zx.second > 0 && zy.first > 0 && zy.second > 0))
      throw Error(ErrorKind::InvalidInitialState, "BEP needs positive energies");
    const double k = params.require("k");
    evolve = [&, k](const std::vector<double>& s, RngStream& rng) {
      const Point z = simulate_bep(k, to_point(s), t, options.dt, rng);
      return std::vector<double>{z.first, z.second};
    };
  } else {
    to_point(x0);
    to_point(y0);
    evolve = [&](const std::vector<double>& s, RngStream& rng) {
      const Point z = simulate_bmp_pair(to_point(s), t, rng);
      return std::vector<double>{z.first, z.second};
    };
  }

  const int streams = options.streams;
  std::vector<McAccumulator> left(static_cast<std::size_t>(streams)), right(static_cast<std::size_t>(streams));
  auto run_stream = [&](int s) {
    const std::int64_t share = n_samples / streams + (s < n_samples % streams ? 1 : 0);
    RngStream lrng(seed, 2 * static_cast<std::uint64_t>(s));
    RngStream rrng(seed, 2 * static_cast<std::uint64_t>(s) + 1);
    for (std::int64_t i = 0; i < share; ++i) {
      left[static_cast<std::size_t>(s)].add(product_kernel(kernel, evolve(x0, lrng), y0));
      right[static_cast<std::size_t>(s)].add(product_kernel(kernel, x0, evolve(y0, rrng)));
    }
  };

  int threads = options.threads > 0 ? options.threads : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, streams);
  if (threads == 1) {
    for (int s = 0; s < streams; ++s) run_stream(s);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> failures(static_cast<std::size_t>(threads));
    for (int w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (int s = w; s < streams; s += threads) run_stream(s);
        } catch (...) {
          failures[static_cast<std::size_t>(w)] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& f : failures)
      if (f) std::rethrow_exception(f);
  }

  McAccumulator l, r;
  for (int s = 0; s < streams; ++s) {
    l.merge(left[static_cast<std::size_t>(s)]);
    r.merge(right[static_cast<std::size_t>(s)]);
  }
  DualityEstimate out{l.estimate(), r.estimate(), 0.0};
  const double se = std::hypot(out.left.std_error, out.right.std_error);
  const double diff = std::abs(out.left.mean - out.right.mean);
  if (se > 0.0)
    out.z_score = diff / se;
  else
    out.z_score = diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return out;
}

std::pair<double, double> bmp_quadrature_duality(const Point& x0, const Point& y0, double t, int quad_order) {
  if (quad_order < 20) throw Error(ErrorKind::BadParamRange, "quad_order must be at least 20");
  if (!(t >= 0.0)) throw Error(ErrorKind::BadParamRange, "t must be nonnegative");
  const KernelId kernel(Family::BMP, Params{});
  auto d = [&](const Point& a, const Point& b) {
    return specfun::kernel_value(kernel, a.first, b.first) * specfun::kernel_value(kernel, a.second, b.second);
  };
  if (t == 0.0) return {d(x0, y0), d(x0, y0)};
  // theta ~ Normal(0, 2t) is 2 sqrt(t) u against the weight e^{-u^2}/sqrt(pi).
  const GaussHermite gh = gauss_hermite(quad_order);
  const double scale = 2.0 * std::sqrt(t);
  double left = 0.0, right = 0.0;
  for (std::size_t i = 0; i < gh.nodes.size(); ++i) {
    const double angle = scale * gh.nodes[i];
    left += gh.weights[i] * d(rotate(x0, angle), y0);
    right += gh.weights[i] * d(x0, rotate(y0, angle));
  }
  const double norm = 1.0 / std::sqrt(std::numbers::pi);
  return {left * norm, right * norm};
}

Eigen::VectorXd ctmc_exact_law(Family family, const Params& params, const processes::Graph& graph,
                               const processes::Configuration& x0, double t) {
  validate_configuration(family, params, graph, x0);
  const int total = std::accumulate(x0.begin(), x0.end(), 0);
  const auto sector = processes::enumerate_sector(family, params, graph, total);
  const auto l = processes::build_rate_generator(sector);
  const Eigen::MatrixXd p = expm(Eigen::MatrixXd(t * l.entries));
  return p.row(sector.index_of(x0)).transpose();
}

double ctmc_total_variation(Family family, const Params& params, const processes::Graph& graph,
                            const processes::Configuration& x0, double t, std::int64_t samples, std::uint64_t seed) {
  const Eigen::VectorXd exact = ctmc_exact_law(family, params, graph, x0, t);
  const int total = std::accumulate(x0.begin(), x0.end(), 0);
  const auto sector = processes::enumerate_sector(family, params, graph, total);
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(exact.size());
  RngStream rng(seed, 0);
  for (std::int64_t i = 0; i < samples; ++i) counts(sector.index_of(simulate_ctmc(family, params, graph, x0, t, rng))) += 1.0;
  return 0.5 * (counts / static_cast<double>(samples) - exact).cwiseAbs().sum();
}

}  // namespace duality::simulate
