#include "duality/quadrature.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "duality/errors.hpp"

namespace duality {

namespace {

// Orthonormal Hermite values p_n(x) and p_{n-1}(x) for the weight e^{-x^2}.
std::pair<double, double> hermite_pair(int n, double x) {
  double p1 = 1.0 / std::sqrt(std::sqrt(std::numbers::pi));
  double p2 = 0.0;
  for (int j = 1; j <= n; ++j) {
    const double p3 = p2;
    p2 = p1;
    p1 = x * std::sqrt(2.0 / j) * p2 - std::sqrt((j - 1.0) / j) * p3;
  }
  return {p1, p2};
}

}  // namespace

GaussHermite gauss_hermite(int n) {
  if (n < 1) throw Error(ErrorKind::BadParamRange, "Gauss-Hermite order must be positive");
  // Starting points: eigenvalues of the Jacobi matrix of the recurrence.
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n), off(std::max(n - 1, 0));
  for (int j = 1; j < n; ++j) off(j - 1) = std::sqrt(j / 2.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> jacobi;
  jacobi.computeFromTridiagonal(diag, off, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& guesses = jacobi.eigenvalues();  // ascending

  GaussHermite out{std::vector<double>(static_cast<std::size_t>(n)), std::vector<double>(static_cast<std::size_t>(n))};
  for (int i = 0; i < n; ++i) {
    double z = guesses(i);
    bool converged = false;
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, prev] = hermite_pair(n, z);
      const double step = p / (std::sqrt(2.0 * n) * prev);
      z -= step;
      if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(z))) {
        converged = true;
        break;
      }
    }
    if (!converged) throw Error(ErrorKind::SeriesDivergence, "Gauss-Hermite Newton iteration did not converge");
    const double derivative = std::sqrt(2.0 * n) * hermite_pair(n, z).second;
    out.nodes[static_cast<std::size_t>(i)] = z;
    out.weights[static_cast<std::size_t>(i)] = 2.0 / (derivative * derivative);
  }
  // Exact symmetry.
  for (int i = 0; i < n / 2; ++i) {
    const auto lo = static_cast<std::size_t>(i), hi = static_cast<std::size_t>(n - 1 - i);
    const double node = 0.5 * (out.nodes[hi] - out.nodes[lo]);
    const double weight = 0.5 * (out.weights[hi] + out.weights[lo]);
    out.nodes[lo] = -node;
    out.nodes[hi] = node;
    out.weights[lo] = out.weights[hi] = weight;
  }
  if (n % 2 == 1) out.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
  return out;
}

}  // namespace duality
