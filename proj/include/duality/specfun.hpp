#pragma once

#include <vector>

#include "duality/family.hpp"

/// Special functions behind the duality kernels: Pochhammer symbols,
/// generalized hypergeometric series, the Krawtchouk / Meixner / Charlier
/// families, Bessel functions of the first kind and the five single-site
/// kernels built from them. Everything here is pure and reentrant.
namespace duality::specfun {

/// Rising factorial (a)_m = a (a+1) ... (a+m-1).
double pochhammer(double a, int m);

/// Parameters of pFq(numerator; denominator; argument).
struct HyperSpec {
  std::vector<double> numerator_params;
  std::vector<double> denominator_params;
  double argument = 0.0;
  int max_terms = 200;
  double tail_tolerance = 1e-16;
};

struct HyperSum {
  double value = 0.0;
  int terms = 0;  ///< number of series terms added, n+1 for a terminating series
};

/// Sums the series in double-double arithmetic. A nonpositive integer
/// numerator parameter -n truncates the sum to exactly n+1 terms (the
/// smallest such n wins). Non-terminating series stop once the newest term
/// is below tail_tolerance relative to the partial sum.
HyperSum hyper_pfq_sum(const HyperSpec& spec);
double hyper_pfq(const HyperSpec& spec);

/// K_n(x) = 2F1(-n, -x; -2j; 1/p), n, x in {0..2j}.
double krawtchouk(int n, int x, double j, double p);
/// M_n(x) = 2F1(-n, -x; 2k; 1 - 1/c).
double meixner(int n, int x, double k, double c);
/// C_n(x) = 2F0(-n, -x; ; -1/lambda).
double charlier(int n, int x, double lambda);

/// J_nu(u) for nu > -1 and u >= 0 from the 0F1 power series.
double bessel_j(double nu, double u);

/// J_nu(u) for any real order and u > 0. Negative integer orders use
/// J_{-n} = (-1)^n J_n; other orders take the sign of Gamma(nu+1).
double bessel_j_any_order(double nu, double u);

/// Value and first two derivatives of J_nu at u from the recurrences
/// J' = (J_{nu-1} - J_{nu+1}) / 2 and J'' = (J_{nu-2} - 2 J_nu + J_{nu+2}) / 4.
struct BesselJet {
  double value;
  double d1;
  double d2;
};
BesselJet bessel_j_jet(double nu, double u);

/// Single-site duality kernel d(a, b) of the given family:
///   SEP  (p/(1-p))^{(a+b)/2} K_b(a)
///   SIP  c^{(a+b)/2} M_b(a)
///   IRW  C_b(a)
///   BEP  e^{(a+b)/2} (ab)^{1/2-k} J_{2k-1}(sqrt(ab))
///   BMP  e^{(a^2+b^2)/2} sqrt(2/pi) cos(ab)
/// Discrete families require integer arguments in range.
double kernel_value(const KernelId& id, double a, double b);

}  // namespace duality::specfun
