#include "duality/diffops.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>

#include "duality/errors.hpp"
#include "duality/specfun.hpp"

namespace duality::diffops {

namespace {

using Complex = std::complex<double>;
constexpr Complex kI(0.0, 1.0);

std::int64_t elapsed_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
}

void require_positive(double z, double w) {
  if (!(z > 0.0) || !(w > 0.0)) throw Error(ErrorKind::DomainError, "BEP variables must be positive");
}

// Partials in the first argument of the Bessel kernel d(z, w).
void bep_first(double k, double z, double w, double& value, double& d1, double& d2) {
  require_positive(z, w);
  const double nu = 2.0 * k - 1.0;
  const double u = std::sqrt(z * w);
  const auto j = specfun::bessel_j_jet(nu, u);

  const double p = std::exp(0.5 * (z + w));
  const double q = std::pow(z * w, -0.5 * nu);
  const double q1 = -0.5 * nu / z * q;
  const double q2 = 0.5 * nu * (0.5 * nu + 1.0) / (z * z) * q;
  const double u1 = u / (2.0 * z);
  const double u2 = -u / (4.0 * z * z);
  const double r = j.value;
  const double r1 = j.d1 * u1;
  const double r2 = j.d2 * u1 * u1 + j.d1 * u2;

  value = p * q * r;
  d1 = p * (0.5 * q * r + q1 * r + q * r1);
  d2 = p * (0.25 * q * r + q2 * r + q * r2 + 2.0 * (0.5 * q1 * r + 0.5 * q * r1 + q1 * r1));
}

void bmp_first(double x, double y, double& value, double& d1, double& d2) {
  const double e = std::sqrt(2.0 / std::numbers::pi) * std::exp(0.5 * (x * x + y * y));
  const double c = std::cos(x * y), s = std::sin(x * y);
  value = e * c;
  d1 = e * (x * c - y * s);
  d2 = e * ((1.0 + x * x) * c - 2.0 * x * y * s - y * y * c);
}

double family_k(Family family, const Params& params) {
  if (family == Family::BEP) return params.require("k");
  if (family == Family::BMP) return 0.25;
  throw Error(ErrorKind::NotApplicable, "continuous checks cover BEP and BMP only");
}

KernelId smooth_kernel_id(Family family, const Params& params) {
  if (family == Family::BEP) return {Family::BEP, Params{.k = params.require("k")}};
  if (family == Family::BMP) return {Family::BMP, Params{}};
  throw Error(ErrorKind::NotApplicable, "continuous checks cover BEP and BMP only");
}

}  // namespace

SmoothKernel::SmoothKernel(KernelId id) : id_(std::move(id)) {
  if (is_discrete(id_.family())) throw Error(ErrorKind::NotApplicable, "smooth kernels are BEP and BMP");
}

double SmoothKernel::value(double a, double b) const { return specfun::kernel_value(id_, a, b); }

KernelPartials SmoothKernel::partials(double a, double b) const {
  KernelPartials out{};
  double v2 = 0.0;
  if (id_.family() == Family::BEP) {
    bep_first(id_.k(), a, b, out.value, out.da, out.daa);
    bep_first(id_.k(), b, a, v2, out.db, out.dbb);
  } else {
    bmp_first(a, b, out.value, out.da, out.daa);
    bmp_first(b, a, v2, out.db, out.dbb);
  }
  return out;
}

KernelPartials kernel_partials(const SmoothKernel& kernel, double a, double b) { return kernel.partials(a, b); }

TaylorJet<double> bep_kernel_jet(double k, double z, double w, int order) {
  validate_param("k", k);
  require_positive(z, w);
  const double b = 2.0 * k;
  const double nu = b - 1.0;
  const double scale = std::exp(0.5 * (z + w) - nu * std::log(2.0) - std::lgamma(b));

  std::vector<double> exp_part(static_cast<std::size_t>(order + 1)), series_part(static_cast<std::size_t>(order + 1));
  double factorial = 1.0;
  for (int m = 0; m <= order; ++m) {
    if (m > 0) factorial *= m;
    exp_part[m] = std::pow(0.5, m) / factorial;
    // d^m/dz^m 0F1(; b; -zw/4) = (-w/4)^m / (b)_m 0F1(; b+m; -zw/4).
    series_part[m] = std::pow(-0.25 * w, m) / (specfun::pochhammer(b, m) * factorial) *
                     specfun::hyper_pfq({{}, {b + m}, -0.25 * z * w});
  }
  return scale * (TaylorJet<double>(z, exp_part) * TaylorJet<double>(z, series_part));
}

double apply_generator(Family family, const Params& params, const TwoSiteFunction& f, const Point& point) {
  const auto [a1, a2] = point;
  const SecondJet j = f(point);
  switch (family) {
    case Family::BEP: {
      require_positive(a1, a2);
      const double k = params.require("k");
      return a1 * a2 * (j.d11 - 2.0 * j.d12 + j.d22) - 2.0 * k * (a1 - a2) * (j.d1 - j.d2);
    }
    case Family::BMP:
      return a1 * a1 * j.d22 - 2.0 * a1 * a2 * j.d12 + a2 * a2 * j.d11 - a1 * j.d1 - a2 * j.d2;
    default:
      throw Error(ErrorKind::NotApplicable, "apply_generator covers BEP and BMP");
  }
}

GridSpec GridSpec::standard(Family family) {
  if (family == Family::BEP) return {{0.2, 0.5, 1.0, 2.0, 4.0}, 0.1};
  return {{-1.0, -0.5, 0.5, 1.0, 1.5}, 0.0};
}

GridSpec GridSpec::uniform(double lo, double hi, int count, double exclusion_radius) {
  if (count < 1) throw Error(ErrorKind::BadParamRange, "grid needs at least one point");
  GridSpec g{{}, exclusion_radius};
  for (int i = 0; i < count; ++i) g.points.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
  return g;
}

void GridSpec::validate(Family family) const {
  if (points.empty()) throw Error(ErrorKind::BadParamRange, "empty grid");
  if (family != Family::BEP) return;
  if (!(exclusion_radius > 0.0)) throw Error(ErrorKind::DomainError, "BEP grids need a positive exclusion radius");
  for (double z : points)
    if (!(z > exclusion_radius)) throw Error(ErrorKind::DomainError, "BEP grid point inside the exclusion radius");
}

double continuous_duality_residual(Family family, const Params& params, const GridSpec& grid) {
  grid.validate(family);
  const SmoothKernel kernel(smooth_kernel_id(family, params));
  Params gen;
  gen.k = family_k(family, params);
  double worst = 0.0;
  for (double a1 : grid.points)
    for (double a2 : grid.points)
      for (double b1 : grid.points)
        for (double b2 : grid.points) {
          const auto p1 = kernel.partials(a1, b1);
          const auto p2 = kernel.partials(a2, b2);
          const TwoSiteFunction in_a = [&](const Point&) {
            return SecondJet{p1.value * p2.value, p1.da * p2.value, p1.value * p2.da,
                             p1.daa * p2.value,   p1.da * p2.da,    p1.value * p2.daa};
          };
          const TwoSiteFunction in_b = [&](const Point&) {
            return SecondJet{p1.value * p2.value, p1.db * p2.value, p1.value * p2.db,
                             p1.dbb * p2.value,   p1.db * p2.db,    p1.value * p2.dbb};
          };
          const double la = apply_generator(family, gen, in_a, {a1, a2});
          const double lb = apply_generator(family, gen, in_b, {b1, b2});
          worst = std::max(worst, std::abs(la - lb));
        }
  return worst;
}

double intertwining_residual_continuous(double k, const GridSpec& grid) {
  grid.validate(Family::BEP);
  const SmoothKernel kernel(KernelId(Family::BEP, Params{.k = k}));
  double worst = 0.0;
  for (double z : grid.points) {
    for (double w : grid.points) {
      const auto p = kernel.partials(z, w);
      const Complex fj = -2.0 * kI * z * p.daa - 2.0 * kI * (2.0 * k - z) * p.da + 0.5 * kI * (4.0 * k - z) * p.value;
      worst = std::max(worst, std::abs(fj - 0.5 * kI * w * p.value));
    }
  }
  return worst;
}

ComplexJet apply_h(double k, const ComplexJet& f) {
  const auto z = ComplexJet::variable(f.center(), f.order());
  const auto d = f.derivative();
  return Complex(-2.0) * (z * d) - ((Complex(2.0 * k) * ComplexJet::constant(f.center(), 1.0, f.order()) - z) * f);
}

ComplexJet apply_e(const ComplexJet& f) {
  const auto z = ComplexJet::variable(f.center(), f.order());
  return (-0.5 * kI) * (z * f);
}

ComplexJet apply_f(double k, const ComplexJet& f) {
  const auto z = ComplexJet::variable(f.center(), f.order());
  const auto one = ComplexJet::constant(f.center(), 1.0, f.order());
  const auto d1 = f.derivative();
  const auto d2 = d1.derivative();
  return (-2.0 * kI) * (z * d2) + (-2.0 * kI) * ((Complex(2.0 * k) * one - z) * d1) +
         (0.5 * kI) * ((Complex(4.0 * k) * one - z) * f);
}

double bep_casimir_rewrite_residual(double k, const GridSpec& grid) {
  grid.validate(Family::BEP);
  auto minus_e = [](const ComplexJet& f) { return Complex(-1.0) * apply_e(f); };
  auto comm = [&](const ComplexJet& f) { return minus_e(apply_f(k, f)) - apply_f(k, minus_e(f)); };
  double worst = 0.0;
  for (double z : grid.points) {
    for (double w : grid.points) {
      const auto real_jet = bep_kernel_jet(k, z, w, 4);
      std::vector<Complex> c;
      for (int m = 0; m <= real_jet.order(); ++m) c.emplace_back(real_jet.coeff(m));
      const ComplexJet j(z, c);
      const auto rewritten = Complex(0.5) * comm(comm(j)) - minus_e(apply_f(k, j)) - apply_f(k, minus_e(j));
      const auto direct = Complex(0.5) * apply_h(k, apply_h(k, j)) + apply_e(apply_f(k, j)) + apply_f(k, apply_e(j));
      worst = std::max(worst, std::abs(rewritten.value() - direct.value()));
    }
  }
  return worst;
}

SecondJet Polynomial2::jet(const Point& z) const {
  auto pw = [](double x, int n) { return n < 0 ? 0.0 : std::pow(x, n); };
  SecondJet j;
  for (const auto& [exp, c] : coefficients) {
    const auto [a, b] = exp;
    j.value += c * pw(z.first, a) * pw(z.second, b);
    j.d1 += c * a * pw(z.first, a - 1) * pw(z.second, b);
    j.d2 += c * b * pw(z.first, a) * pw(z.second, b - 1);
    j.d11 += c * a * (a - 1) * pw(z.first, a - 2) * pw(z.second, b);
    j.d12 += c * a * b * pw(z.first, a - 1) * pw(z.second, b - 1);
    j.d22 += c * b * (b - 1) * pw(z.first, a) * pw(z.second, b - 2);
  }
  return j;
}

int Polynomial2::degree() const {
  int d = 0;
  for (const auto& [exp, c] : coefficients)
    if (c != 0.0) d = std::max(d, exp.first + exp.second);
  return d;
}

std::vector<Polynomial2> Polynomial2::monomials(int max_degree) {
  std::vector<Polynomial2> out;
  for (int total = 0; total <= max_degree; ++total)
    for (int a = 0; a <= total; ++a) out.push_back({{{{a, total - a}, 1.0}}});
  return out;
}

namespace {

// L_BMP (f o sq)(x) and (L_BEP(1/4) f)(sq x).
std::pair<double, double> change_of_variable_sides(const Polynomial2& f, const Point& x) {
  const auto [x1, x2] = x;
  const Point z{x1 * x1, x2 * x2};
  const TwoSiteFunction composed = [&](const Point&) {
    const SecondJet j = f.jet(z);
    return SecondJet{j.value,
                     2.0 * x1 * j.d1,
                     2.0 * x2 * j.d2,
                     2.0 * j.d1 + 4.0 * x1 * x1 * j.d11,
                     4.0 * x1 * x2 * j.d12,
                     2.0 * j.d2 + 4.0 * x2 * x2 * j.d22};
  };
  const TwoSiteFunction direct = [&](const Point& p) { return f.jet(p); };
  const double bmp = apply_generator(Family::BMP, {}, composed, x);
  const double bep = apply_generator(Family::BEP, Params{.k = 0.25}, direct, z);
  return {bmp, bep};
}

}  // namespace

double change_of_variable_residual(const Polynomial2& f, const Point& x) {
  const auto [bmp, bep] = change_of_variable_sides(f, x);
  return std::abs(bmp - bep);
}

double time_scaled_change_of_variable_residual(const Polynomial2& f, const Point& x) {
  const auto [bmp, bep] = change_of_variable_sides(f, x);
  return std::abs(bmp - 4.0 * bep);
}

double bessel_operator_T_residual(double nu, double w, const std::vector<double>& z_grid) {
  if (w == 0.0) {
    if (nu < 0.0 && std::nearbyint(nu) != nu) throw Error(ErrorKind::DomainError, "J_nu(0) is unbounded for this order");
    return 0.0;
  }
  double worst = 0.0;
  for (double z : z_grid) {
    if (!(z > 0.0)) throw Error(ErrorKind::DomainError, "z grid must exclude 0");
    const auto j = specfun::bessel_j_jet(nu, z * w);
    const double t = -w * w * j.d2 - (w / z) * j.d1 + nu * nu / (z * z) * j.value;
    worst = std::max(worst, std::abs(t - w * w * j.value));
  }
  return worst;
}

CheckReport check_continuous_duality(Family family, const Params& params, const GridSpec& grid, double tolerance) {
  const auto start = std::chrono::steady_clock::now();
  const double r = continuous_duality_residual(family, params, grid);
  auto rp = params.as_map();
  rp["grid_points"] = static_cast<double>(grid.points.size());
  auto rep = make_report("continuous_duality", std::string(to_string(family)), rp, r, tolerance,
                         family == Family::BEP ? "two-site BEP self-duality with the Bessel kernel"
                                               : "two-site BMP self-duality with the cosine kernel");
  rep.elapsed_ms = elapsed_since(start);
  return rep;
}

CheckReport check_continuous_intertwining(double k, const GridSpec& grid, double tolerance) {
  const auto start = std::chrono::steady_clock::now();
  auto rep = make_report("continuous_intertwining", "BEP", {{"k", k}}, intertwining_residual_continuous(k, grid), tolerance,
                         "F J(., w) = (i/2) w J in the continuous su(1,1) representation");
  rep.elapsed_ms = elapsed_since(start);
  return rep;
}

CheckReport check_bep_casimir(double k, const GridSpec& grid, double tolerance) {
  const auto start = std::chrono::steady_clock::now();
  auto rep = make_report("casimir_rewrite", "BEP", {{"k", k}}, bep_casimir_rewrite_residual(k, grid), tolerance,
                         "Omega = 1/2 [-E,F]^2 - (-E)F - F(-E) applied to the Bessel kernel");
  rep.elapsed_ms = elapsed_since(start);
  return rep;
}

CheckReport check_change_of_variable(int max_degree, const GridSpec& grid, bool time_scaled, double tolerance) {
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (const auto& f : Polynomial2::monomials(max_degree))
    for (double x1 : grid.points)
      for (double x2 : grid.points) {
        const Point x{x1, x2};
        worst = std::max(worst, time_scaled ? time_scaled_change_of_variable_residual(f, x) : change_of_variable_residual(f, x));
      }
  auto rep = make_report(time_scaled ? "change_of_variable_time_scaled" : "change_of_variable", "BMP",
                         {{"max_degree", max_degree}}, worst, tolerance,
                         time_scaled ? "L_BMP V = 4 V L_BEP(1/4), V f = f o sq"
                                     : "L_BMP = V L_BEP(1/4) V^{-1}, V f = f o sq");
  rep.elapsed_ms = elapsed_since(start);
  return rep;
}

CheckReport check_bessel_T(double nu, const std::vector<double>& w_values, const GridSpec& z_grid, double tolerance) {
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (double w : w_values) worst = std::max(worst, bessel_operator_T_residual(nu, w, z_grid.points));
  auto rep = make_report("bessel_T_eigenfunction", "BEP", {{"nu", nu}}, worst, tolerance,
                         "T J_nu(zw) = w^2 J_nu(zw), T = -d^2 - (1/z) d + nu^2/z^2");
  rep.elapsed_ms = elapsed_since(start);
  return rep;
}

double bessel_ode_residual(double nu, const std::vector<double>& u_grid) {
  double worst = 0.0;
  for (double u : u_grid) {
    if (!(u > 0.0)) throw Error(ErrorKind::DomainError, "Bessel ODE grid must be positive");
    const auto jet = specfun::bessel_j_jet(nu, u);
    const double r = u * u * jet.d2 + u * jet.d1 + (u * u - nu * nu) * jet.value;
    worst = std::max(worst, std::abs(r) / std::max(1.0, u * u));
  }
  return worst;
}

CheckReport check_bessel_ode(double nu, const GridSpec& u_grid, double tolerance) {
  const auto start = std::chrono::steady_clock::now();
  auto rep = make_report("bessel_ode", "BEP", {{"nu", nu}}, bessel_ode_residual(nu, u_grid.points), tolerance,
                         "u^2 J'' + u J' + (u^2 - nu^2) J = 0");
  rep.elapsed_ms = elapsed_since(start);
  return rep;
}

}  // namespace duality::diffops
