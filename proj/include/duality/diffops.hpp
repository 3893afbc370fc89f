#pragma once

#include <complex>
#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "duality/family.hpp"
#include "duality/report.hpp"
#include "duality/taylor_jet.hpp"

/// Pointwise verification for the two diffusions: kernel derivatives,
/// second-order generators, duality and intertwining residuals on grids,
/// and the change of variable between BMP and BEP(1/4).
namespace duality::diffops {

using Point = std::pair<double, double>;

struct KernelPartials {
  double value;
  double da, daa;
  double db, dbb;
};

/// Bessel kernel of BEP(k) or cosine kernel of BMP with analytic partials.
class SmoothKernel {
 public:
  /// Throws NotApplicable for the particle systems.
  explicit SmoothKernel(KernelId id);

  const KernelId& id() const { return id_; }
  double value(double a, double b) const;
  /// BEP partials by the chain rule through J_nu' = (J_{nu-1} - J_{nu+1})/2.
  KernelPartials partials(double a, double b) const;

 private:
  KernelId id_;
};

KernelPartials kernel_partials(const SmoothKernel& kernel, double a, double b);

/// Jet in z of the Bessel kernel, from the entire form
/// e^{(z+w)/2} 2^{-nu} / Gamma(nu+1) 0F1(; nu+1; -zw/4), nu = 2k - 1.
TaylorJet<double> bep_kernel_jet(double k, double z, double w, int order);

/// Value and partials up to second order of a function of two variables.
struct SecondJet {
  double value = 0.0;
  double d1 = 0.0, d2 = 0.0;
  double d11 = 0.0, d12 = 0.0, d22 = 0.0;
};
using TwoSiteFunction = std::function<SecondJet(const Point&)>;

/// BEP: z1 z2 (d1 - d2)^2 f - 2k (z1 - z2)(d1 - d2) f.
/// BMP: (x1 d2 - x2 d1)^2 f.
/// Throws DomainError for BEP outside the open quadrant.
double apply_generator(Family family, const Params& params, const TwoSiteFunction& f, const Point& point);

/// One coordinate grid used for every variable. BEP grids must lie beyond
/// exclusion_radius > 0.
struct GridSpec {
  std::vector<double> points;
  double exclusion_radius = 0.0;

  static GridSpec standard(Family family);
  static GridSpec uniform(double lo, double hi, int count, double exclusion_radius = 0.0);
  void validate(Family family) const;
};

/// max over (a1, a2, b1, b2) in grid^4 of |L_a D - L_b D|, D the two-site
/// product kernel.
double continuous_duality_residual(Family family, const Params& params, const GridSpec& grid);

/// max over (z, w) of |F_z J(z, w) - (i/2) w J(z, w)|, with
/// F = -2i z d^2 - 2i(2k - z) d + (i/2)(4k - z).
double intertwining_residual_continuous(double k, const GridSpec& grid);

/// Continuous su(1,1) representation on jets in z:
/// H = -2z d - (2k - z), E = -(i/2) z, F as above.
using ComplexJet = TaylorJet<std::complex<double>>;
ComplexJet apply_h(double k, const ComplexJet& f);
ComplexJet apply_e(const ComplexJet& f);
ComplexJet apply_f(double k, const ComplexJet& f);

/// max over (z, w) of |(1/2)[-E,F]^2 J - (-E)F J - F(-E) J - (1/2 H^2 + EF + FE) J|.
double bep_casimir_rewrite_residual(double k, const GridSpec& grid);

/// Polynomial in two variables, coefficient of z1^i z2^j under key (i, j).
struct Polynomial2 {
  std::map<std::pair<int, int>, double> coefficients;

  SecondJet jet(const Point& z) const;
  int degree() const;
  /// All monomials z1^i z2^j with i + j <= max_degree.
  static std::vector<Polynomial2> monomials(int max_degree);
};

/// |L_BMP (f o sq)(x) - (L_BEP(1/4) f)(sq x)|, sq(x) = (x1^2, x2^2).
double change_of_variable_residual(const Polynomial2& f, const Point& x);
/// Same with the BEP side multiplied by 4, the time scale relating the two.
double time_scaled_change_of_variable_residual(const Polynomial2& f, const Point& x);

/// max over z of |T J_nu(z w) - w^2 J_nu(z w)|, T = -d^2 - (1/z) d + nu^2/z^2.
/// w = 0 returns 0 without evaluating (both sides vanish for nu >= 0).
double bessel_operator_T_residual(double nu, double w, const std::vector<double>& z_grid);

/// max over u of |u^2 J'' + u J' + (u^2 - nu^2) J| / max(1, u^2), derivatives
/// from the Bessel recurrences.
double bessel_ode_residual(double nu, const std::vector<double>& u_grid);

CheckReport check_continuous_duality(Family family, const Params& params, const GridSpec& grid, double tolerance);
CheckReport check_continuous_intertwining(double k, const GridSpec& grid, double tolerance = 1e-8);
CheckReport check_bep_casimir(double k, const GridSpec& grid, double tolerance = 1e-6);
/// All monomials of total degree <= max_degree at every grid pair.
CheckReport check_change_of_variable(int max_degree, const GridSpec& grid, bool time_scaled, double tolerance = 1e-10);
CheckReport check_bessel_T(double nu, const std::vector<double>& w_values, const GridSpec& z_grid,
                           double tolerance = 1e-9);

CheckReport check_bessel_ode(double nu, const GridSpec& u_grid, double tolerance = 1e-9);

}  // namespace duality::diffops
