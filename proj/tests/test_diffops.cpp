#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "duality/diffops.hpp"
#include "duality/errors.hpp"
#include "duality/specfun.hpp"

using namespace duality;
using namespace duality::diffops;

namespace {

// Central differences at h and h/2 combined by Richardson extrapolation.
template <typename Fn>
std::pair<double, double> richardson(Fn&& f, double x, double h) {
  auto d1 = [&](double s) { return (f(x + s) - f(x - s)) / (2 * s); };
  auto d2 = [&](double s) { return (f(x + s) - 2 * f(x) + f(x - s)) / (s * s); };
  return {(4 * d1(h / 2) - d1(h)) / 3, (4 * d2(h / 2) - d2(h)) / 3};
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

template <typename Fn>
ErrorKind kind_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an Error");
  return ErrorKind::IoError;
}

}  // namespace

TEST_CASE("taylor jet arithmetic") {
  // e^z about 0.3 and z^2 about 0.3.
  std::vector<double> c;
  double f = 1.0;
  for (int m = 0; m <= 5; ++m) {
    if (m > 0) f *= m;
    c.push_back(std::exp(0.3) / f);
  }
  const TaylorJet<double> e(0.3, c);
  const auto z = TaylorJet<double>::variable(0.3, 5);
  const auto prod = z * z * e;
  // (z^2 e^z)'' = (z^2 + 4z + 2) e^z.
  CHECK(prod.derivative_at(2) == doctest::Approx((0.09 + 1.2 + 2) * std::exp(0.3)).epsilon(1e-14));
  CHECK(prod.derivative().derivative().value() == doctest::Approx(prod.derivative_at(2)).epsilon(1e-14));
  CHECK(prod.derivative().order() == 4);
  CHECK((e - e).value() == 0.0);
}

TEST_CASE("BMP kernel partials") {
  const SmoothKernel bmp(KernelId(Family::BMP, Params{}));
  // At y = 0 the kernel is even in y, so the y-slope vanishes.
  for (double x : {-1.0, 0.3, 1.7}) {
    const auto p = bmp.partials(x, 0.0);
    CHECK(p.db == 0.0);
    CHECK(p.value == doctest::Approx(std::sqrt(2 / std::numbers::pi) * std::exp(0.5 * x * x)).epsilon(1e-15));
  }
  CHECK(bmp.value(0.7, -1.1) == bmp.value(-0.7, -1.1));
  CHECK(bmp.value(0.7, -1.1) == bmp.value(0.7, 1.1));
  CHECK_THROWS_AS(SmoothKernel(KernelId(Family::IRW, Params{.lambda = 1.0})), Error);
}

TEST_CASE("BEP(1/4) kernel is the BMP kernel at squares") {
  const SmoothKernel bep(KernelId(Family::BEP, Params{.k = 0.25}));
  const SmoothKernel bmp(KernelId(Family::BMP, Params{}));
  for (double x : {0.2, 0.7, 1.3, 2.0})
    for (double y : {0.2, 0.9, 1.6}) CHECK(rel(bep.value(x * x, y * y), bmp.value(x, y)) <= 1e-10);
}

TEST_CASE("analytic partials match Richardson differences") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> pos(0.3, 3.5), any(-1.5, 1.5);
  for (double k : {0.25, 0.5, 1.0, 1.6}) {
    const SmoothKernel kernel(KernelId(Family::BEP, Params{.k = k}));
    for (int trial = 0; trial < 20; ++trial) {
      const double a = pos(rng), b = pos(rng);
      const auto p = kernel.partials(a, b);
      const auto [fa, faa] = richardson([&](double s) { return kernel.value(s, b); }, a, 1e-2);
      const auto [fb, fbb] = richardson([&](double s) { return kernel.value(a, s); }, b, 1e-2);
      CHECK(rel(p.da, fa) <= 1e-6);
      CHECK(rel(p.daa, faa) <= 1e-6);
      CHECK(rel(p.db, fb) <= 1e-6);
      CHECK(rel(p.dbb, fbb) <= 1e-6);
    }
  }
  const SmoothKernel bmp(KernelId(Family::BMP, Params{}));
  for (int trial = 0; trial < 20; ++trial) {
    const double a = any(rng), b = any(rng);
    const auto p = bmp.partials(a, b);
    const auto [fa, faa] = richardson([&](double s) { return bmp.value(s, b); }, a, 1e-2);
    CHECK(rel(p.da, fa) <= 1e-6);
    CHECK(rel(p.daa, faa) <= 1e-6);
  }
  CHECK(kind_of([] { SmoothKernel(KernelId(Family::BEP, Params{.k = 0.5})).partials(0.0, 1.0); }) == ErrorKind::DomainError);
}

TEST_CASE("series jet agrees with the Bessel-identity partials") {
  for (double k : {0.25, 0.5, 1.0}) {
    const SmoothKernel kernel(KernelId(Family::BEP, Params{.k = k}));
    for (double z : {0.2, 1.0, 4.0})
      for (double w : {0.5, 2.0}) {
        const auto jet = bep_kernel_jet(k, z, w, 3);
        const auto p = kernel.partials(z, w);
        CHECK(rel(jet.value(), p.value) <= 1e-12);
        CHECK(rel(jet.derivative_at(1), p.da) <= 1e-11);
        CHECK(rel(jet.derivative_at(2), p.daa) <= 1e-10);
      }
  }
}

TEST_CASE("generators annihilate conserved quantities") {
  const TwoSiteFunction constant = [](const Point&) { return SecondJet{3.0, 0, 0, 0, 0, 0}; };
  const TwoSiteFunction energy = [](const Point&) { return SecondJet{0.0, 1, 1, 0, 0, 0}; };
  const TwoSiteFunction norm2 = [](const Point& x) { return SecondJet{x.first * x.first + x.second * x.second, 2 * x.first, 2 * x.second, 2, 0, 2}; };
  for (const Point& z : {Point{0.3, 1.7}, Point{2.0, 0.5}}) {
    CHECK(apply_generator(Family::BEP, Params{.k = 0.7}, constant, z) == 0.0);
    CHECK(apply_generator(Family::BEP, Params{.k = 0.7}, energy, z) == 0.0);
  }
  for (const Point& x : {Point{-0.3, 1.7}, Point{2.0, 0.5}}) {
    CHECK(apply_generator(Family::BMP, {}, constant, x) == 0.0);
    CHECK(std::abs(apply_generator(Family::BMP, {}, norm2, x)) <= 1e-15);
  }
  CHECK(kind_of([&] { apply_generator(Family::BEP, Params{.k = 0.5}, constant, {-1.0, 1.0}); }) == ErrorKind::DomainError);
}

TEST_CASE("generator on a monomial") {
  // BEP on z1^2: z1 z2 * 2 - 2k (z1 - z2) * 2 z1.
  const Polynomial2 f{{{{2, 0}, 1.0}}};
  const TwoSiteFunction g = [&](const Point& p) { return f.jet(p); };
  const double k = 0.6, z1 = 1.3, z2 = 0.4;
  CHECK(apply_generator(Family::BEP, Params{.k = k}, g, {z1, z2}) ==
        doctest::Approx(2 * z1 * z2 - 4 * k * (z1 - z2) * z1).epsilon(1e-14));
  // BMP on x1^2: 2 x2^2 - 2 x1^2.
  CHECK(apply_generator(Family::BMP, {}, g, {z1, z2}) == doctest::Approx(2 * z2 * z2 - 2 * z1 * z1).epsilon(1e-14));
}

TEST_CASE("two-site self-duality of the diffusions") {
  for (double k : {0.25, 0.5, 1.0})
    CHECK(continuous_duality_residual(Family::BEP, Params{.k = k}, GridSpec::standard(Family::BEP)) <= 1e-6);
  CHECK(continuous_duality_residual(Family::BMP, {}, GridSpec::standard(Family::BMP)) <= 1e-8);
  CHECK(continuous_duality_residual(Family::BEP, Params{.k = 0.5}, GridSpec::uniform(0.2, 4.0, 6, 0.1)) <= 1e-6);

  // Matching points give identical sides.
  CHECK(continuous_duality_residual(Family::BMP, {}, GridSpec{{0.8}, 0.0}) == 0.0);

  CHECK(kind_of([] { continuous_duality_residual(Family::BEP, Params{.k = 0.5}, GridSpec{{0.05, 1.0}, 0.1}); }) ==
        ErrorKind::DomainError);
  CHECK(kind_of([] { continuous_duality_residual(Family::SEP, Params{.j = 0.5, .p = 0.5}, GridSpec::standard(Family::BMP)); }) ==
        ErrorKind::NotApplicable);
}

TEST_CASE("the BMP generator does not fit the Bessel kernel") {
  // Negative control: BEP(1/4) duality with the BMP generator acting on z.
  const SmoothKernel bep(KernelId(Family::BEP, Params{.k = 0.25}));
  const auto p1 = bep.partials(1.0, 2.0), p2 = bep.partials(0.5, 0.2);
  const TwoSiteFunction in_a = [&](const Point&) {
    return SecondJet{p1.value * p2.value, p1.da * p2.value, p1.value * p2.da, p1.daa * p2.value, p1.da * p2.da, p1.value * p2.daa};
  };
  const TwoSiteFunction in_b = [&](const Point&) {
    return SecondJet{p1.value * p2.value, p1.db * p2.value, p1.value * p2.db, p1.dbb * p2.value, p1.db * p2.db, p1.value * p2.dbb};
  };
  CHECK(std::abs(apply_generator(Family::BMP, {}, in_a, {1.0, 0.5}) - apply_generator(Family::BMP, {}, in_b, {2.0, 0.2})) >= 1e-3);
}

TEST_CASE("continuous intertwining") {
  const GridSpec grid = GridSpec::standard(Family::BEP);
  for (double k : {0.25, 0.5, 1.0}) CHECK(intertwining_residual_continuous(k, grid) <= 1e-8);
  CHECK(intertwining_residual_continuous(0.25, GridSpec{{1.0}, 0.1}) <= 1e-8);

  // E acts by multiplication, so (-E_w J)(w) = (i/2) w J exactly.
  const SmoothKernel kernel(KernelId(Family::BEP, Params{.k = 1.0}));
  const double z = 2.0, w = 0.5, v = kernel.value(z, w);
  const ComplexJet jet = ComplexJet::constant(w, v, 0);
  CHECK(std::abs(-apply_e(jet).value() - std::complex<double>(0, 0.5 * w * v)) == 0.0);

  const auto p = kernel.partials(z, w);
  const std::complex<double> i(0, 1);
  const auto fj = -2.0 * i * z * p.daa - 2.0 * i * (2.0 - z) * p.da + 0.5 * i * (4.0 - z) * p.value;
  CHECK(std::abs(fj - 0.5 * i * w * v) <= 1e-8);
}

TEST_CASE("continuous representation relations on jets") {
  // [H,E], [H,F], [E,F] and the Casimir action on a generic smooth function.
  const double k = 0.7, z0 = 1.3;
  std::vector<std::complex<double>> c;
  double f = 1.0;
  for (int m = 0; m <= 6; ++m) {
    if (m > 0) f *= m;
    c.emplace_back(std::cos(z0 + m * std::numbers::pi / 2) / f, 0.3 / f);
  }
  const ComplexJet g(z0, c);
  const auto omega = std::complex<double>(0.5) * apply_h(k, apply_h(k, g)) + apply_e(apply_f(k, g)) + apply_f(k, apply_e(g));
  // The Casimir of this representation is a multiple of the identity.
  const auto ratio = omega.value() / g.value();
  CHECK(std::abs(ratio - std::complex<double>(2 * k * (k - 1))) <= 1e-12);
}

TEST_CASE("BEP Casimir rewrite on the kernel") {
  for (double k : {0.25, 0.5, 1.0}) CHECK(bep_casimir_rewrite_residual(k, GridSpec::standard(Family::BEP)) <= 1e-6);
  CHECK(check_bep_casimir(0.5, GridSpec::standard(Family::BEP)).passed);
}

TEST_CASE("change of variable") {
  const Polynomial2 constant{{{{0, 0}, 2.5}}};
  CHECK(change_of_variable_residual(constant, {0.4, -1.2}) == 0.0);

  // Exact polynomial calculus for z1 z2 at x = (1, 0.5): z = (1, 0.25).
  // BMP side 2(z1 - z2)^2 - 8 z1 z2 = -0.875; BEP(1/4) side (z1 - z2)^2/2 - 2 z1 z2 = -0.21875.
  const Polynomial2 product{{{{1, 1}, 1.0}}};
  CHECK(change_of_variable_residual(product, {1.0, 0.5}) == doctest::Approx(0.875 - 0.21875).epsilon(1e-14));
  CHECK(time_scaled_change_of_variable_residual(product, {1.0, 0.5}) <= 1e-10);

  const Polynomial2 square{{{{2, 0}, 1.0}}};
  CHECK(time_scaled_change_of_variable_residual(square, {0.7, 1.3}) <= 1e-10);
  for (const auto& f : Polynomial2::monomials(3))
    for (const Point& x : {Point{0.7, 1.3}, Point{-1.0, 0.5}, Point{1.5, -0.2}})
      CHECK(time_scaled_change_of_variable_residual(f, x) <= 1e-10);

  CHECK(Polynomial2::monomials(3).size() == 10);
  CHECK(product.degree() == 2);
}

TEST_CASE("Bessel T eigenfunction") {
  const std::vector<double> zs{0.2, 0.5, 1.0, 2.0, 4.0};
  for (double nu : {-0.5, 0.0, 0.5, 1.0, 1.5, 2.5})
    for (double w : {0.5, 1.0, 2.0}) CHECK(bessel_operator_T_residual(nu, w, zs) <= 1e-9);
  CHECK(bessel_operator_T_residual(1.5, 0.0, zs) == 0.0);
  CHECK(kind_of([&] { bessel_operator_T_residual(-0.5, 0.0, zs); }) == ErrorKind::DomainError);
  CHECK(kind_of([] { bessel_operator_T_residual(0.5, 1.0, {0.0}); }) == ErrorKind::DomainError);

  // Closed form for nu = -1/2: J = sqrt(2/(pi u)) cos u, differentiated by hand.
  for (double z : zs) {
    const double w = 1.3, u = z * w;
    const double g = std::sqrt(2 / (std::numbers::pi * u)) * std::cos(u);
    const double gu = std::sqrt(2 / std::numbers::pi) * (-0.5 * std::pow(u, -1.5) * std::cos(u) - std::pow(u, -0.5) * std::sin(u));
    const double guu = std::sqrt(2 / std::numbers::pi) *
                       (0.75 * std::pow(u, -2.5) * std::cos(u) + std::pow(u, -1.5) * std::sin(u) - std::pow(u, -0.5) * std::cos(u));
    const double t = -w * w * guu - (w / z) * gu + 0.25 / (z * z) * g;
    CHECK(std::abs(t - w * w * g) <= 1e-10);
  }
}
