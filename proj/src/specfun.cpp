#include "duality/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>

#include "duality/double_double.hpp"
#include "duality/errors.hpp"

namespace duality::specfun {

namespace {

std::optional<int> nonpositive_integer(double a) {
  if (a <= 0.0 && a == std::round(a)) return static_cast<int>(-a);
  return std::nullopt;
}

int as_index(double a, const char* what) {
  if (a != std::round(a) || a < 0.0) {
    std::ostringstream os;
    os << what << "=" << a << " is not a nonnegative integer";
    throw Error(ErrorKind::OutOfRange, os.str());
  }
  return static_cast<int>(a);
}

// log|Gamma(x)| and sign(Gamma(x)) for x not a nonpositive integer.
std::pair<double, double> log_abs_gamma(double x) {
  int sign = 1;
  const double lg = ::lgamma_r(x, &sign);
  return {lg, static_cast<double>(sign)};
}

}  // namespace

double pochhammer(double a, int m) {
  if (m < 0) throw Error(ErrorKind::OutOfRange, "pochhammer needs m >= 0");
  double product = 1.0;
  for (int i = 0; i < m; ++i) product *= a + i;
  return product;
}

HyperSum hyper_pfq_sum(const HyperSpec& spec) {
  if (spec.max_terms <= 0 || !(spec.tail_tolerance > 0.0))
    throw Error(ErrorKind::OutOfRange, "hypergeometric series needs max_terms > 0 and tail_tolerance > 0");

  std::optional<int> degree;
  for (double a : spec.numerator_params) {
    if (auto n = nonpositive_integer(a)) degree = degree ? std::min(*degree, *n) : *n;
  }

  const DoubleDouble x(spec.argument);
  DoubleDouble term(1.0);
  DoubleDouble sum(0.0);

  // Advances term_k to term_{k+1}.
  auto advance = [&](int k) {
    DoubleDouble ratio(1.0);
    for (double a : spec.numerator_params) ratio *= DoubleDouble(a) + DoubleDouble(static_cast<double>(k));
    for (double b : spec.denominator_params) {
      const DoubleDouble d = DoubleDouble(b) + DoubleDouble(static_cast<double>(k));
      if (d.hi == 0.0) {
        std::ostringstream os;
        os << "denominator parameter " << b << " vanishes at term " << k + 1;
        throw Error(ErrorKind::ZeroDenominatorParam, os.str());
      }
      ratio = ratio / d;
    }
    term = term * ratio * x / DoubleDouble(static_cast<double>(k + 1));
  };

  if (degree) {
    const int n_terms = *degree + 1;
    for (int k = 0; k < n_terms; ++k) {
      sum += term;
      if (k + 1 < n_terms) advance(k);
    }
    return {static_cast<double>(sum), n_terms};
  }

  double previous = std::numeric_limits<double>::infinity();
  for (int k = 0; k < spec.max_terms; ++k) {
    sum += term;
    const double magnitude = abs(term);
    const double scale = std::max(abs(sum), std::numeric_limits<double>::min());
    if (magnitude <= spec.tail_tolerance * scale && magnitude <= previous) return {static_cast<double>(sum), k + 1};
    previous = magnitude;
    advance(k);
  }
  std::ostringstream os;
  os << "tail tolerance " << spec.tail_tolerance << " unmet after " << spec.max_terms << " terms";
  throw Error(ErrorKind::NonTerminatingDivergence, os.str());
}

double hyper_pfq(const HyperSpec& spec) { return hyper_pfq_sum(spec).value; }

double krawtchouk(int n, int x, double j, double p) {
  validate_param("j", j);
  validate_param("p", p);
  const int two_j = static_cast<int>(std::lround(2.0 * j));
  if (n < 0 || x < 0 || n > two_j || x > two_j) {
    std::ostringstream os;
    os << "Krawtchouk needs n, x in [0, " << two_j << "], got n=" << n << " x=" << x;
    throw Error(ErrorKind::OutOfRange, os.str());
  }
  return hyper_pfq({{-double(n), -double(x)}, {-double(two_j)}, 1.0 / p});
}

double meixner(int n, int x, double k, double c) {
  validate_param("k", k);
  validate_param("c", c);
  if (n < 0 || x < 0) throw Error(ErrorKind::OutOfRange, "Meixner needs n, x >= 0");
  return hyper_pfq({{-double(n), -double(x)}, {2.0 * k}, 1.0 - 1.0 / c});
}

double charlier(int n, int x, double lambda) {
  validate_param("lambda", lambda);
  if (n < 0 || x < 0) throw Error(ErrorKind::OutOfRange, "Charlier needs n, x >= 0");
  return hyper_pfq({{-double(n), -double(x)}, {}, -1.0 / lambda});
}

double bessel_j_any_order(double nu, double u) {
  if (u < 0.0 || !std::isfinite(u)) throw Error(ErrorKind::DomainError, "Bessel argument must be finite and >= 0");
  if (nu < 0.0 && nu == std::round(nu)) {
    const int n = static_cast<int>(-nu);
    return (n % 2 == 0 ? 1.0 : -1.0) * bessel_j_any_order(double(n), u);
  }
  if (u == 0.0) {
    if (nu == 0.0) return 1.0;
    if (nu > 0.0) return 0.0;
    throw Error(ErrorKind::DomainError, "J_nu(0) is unbounded for negative non-integer order");
  }
  const auto [log_gamma, sign] = log_abs_gamma(nu + 1.0);
  const double prefactor = sign * std::exp(nu * std::log(0.5 * u) - log_gamma);
  try {
    return prefactor * hyper_pfq({{}, {nu + 1.0}, -0.25 * u * u, 200, 1e-16});
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::NonTerminatingDivergence) throw Error(ErrorKind::SeriesDivergence, e.what());
    throw;
  }
}

double bessel_j(double nu, double u) {
  if (!(nu > -1.0)) throw Error(ErrorKind::DomainError, "bessel_j needs nu > -1");
  return bessel_j_any_order(nu, u);
}

BesselJet bessel_j_jet(double nu, double u) {
  if (!(u > 0.0)) throw Error(ErrorKind::DomainError, "Bessel derivatives need u > 0");
  const double j0 = bessel_j_any_order(nu, u);
  const double jm1 = bessel_j_any_order(nu - 1.0, u);
  const double jp1 = bessel_j_any_order(nu + 1.0, u);
  const double jm2 = bessel_j_any_order(nu - 2.0, u);
  const double jp2 = bessel_j_any_order(nu + 2.0, u);
  return {j0, 0.5 * (jm1 - jp1), 0.25 * (jm2 - 2.0 * j0 + jp2)};
}

namespace {

double bep_kernel(double k, double z, double w) {
  if (!(z > 0.0) || !(w > 0.0)) throw Error(ErrorKind::DomainError, "BEP kernel needs z > 0 and w > 0");
  const double log_prefactor = 0.5 * (z + w) + (0.5 - k) * std::log(z * w);
  return std::exp(log_prefactor) * bessel_j_any_order(2.0 * k - 1.0, std::sqrt(z * w));
}

}  // namespace

double kernel_value(const KernelId& id, double a, double b) {
  switch (id.family()) {
    case Family::SEP: {
      const int x = as_index(a, "x"), n = as_index(b, "n");
      const double p = id.p();
      const double log_base = std::log(p / (1.0 - p));
      return std::exp(0.5 * (n + x) * log_base) * krawtchouk(n, x, id.j(), p);
    }
    case Family::SIP: {
      const int x = as_index(a, "x"), n = as_index(b, "n");
      const double c = id.c();
      return std::exp(0.5 * (x + n) * std::log(c)) * meixner(n, x, id.k(), c);
    }
    case Family::IRW: {
      const int x = as_index(a, "x"), n = as_index(b, "n");
      return charlier(n, x, id.lambda());
    }
    case Family::BEP:
      return bep_kernel(id.k(), a, b);
    case Family::BMP:
      return std::exp(0.5 * (a * a + b * b)) * std::sqrt(2.0 / std::numbers::pi) * std::cos(a * b);
  }
  throw Error(ErrorKind::DomainError, "unknown family");
}

}  // namespace duality::specfun
