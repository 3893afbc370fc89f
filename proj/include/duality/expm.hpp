#pragma once

#include <cmath>

#include <Eigen/Dense>

#include "duality/errors.hpp"

namespace duality {

/// Matrix exponential by scaling and squaring with a truncated Taylor
/// series. The scaled matrix B = A / 2^s has ||B||_1 <= 1/2 and the series
/// order is the smallest m whose tail bound ||B||^{m+1} / (m+1)! * (m+2)/(m+2-||B||)
/// is below 1e-16.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> expm(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  using Real = typename Eigen::NumTraits<Scalar>::Real;
  using Result = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  if (a.rows() != a.cols()) throw Error(ErrorKind::DimMismatch, "expm needs a square matrix");
  if (!a.allFinite()) throw Error(ErrorKind::DomainError, "expm input is not finite");
  const Eigen::Index n = a.rows();
  if (n == 0) return Result(0, 0);

  const Real norm = a.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > Real(0.5)) squarings = static_cast<int>(std::ceil(std::log2(static_cast<double>(norm / Real(0.5)))));
  const Real scale = std::ldexp(Real(1), -squarings);
  const Result b = a * scale;
  const Real b_norm = norm * scale;

  int order = 1;
  Real tail = b_norm * b_norm / Real(2);
  while (tail * Real(order + 2) / (Real(order + 2) - b_norm) > Real(1e-16) && order < 30) {
    ++order;
    tail *= b_norm / Real(order + 1);
  }

  // Horner: I + B/1 (I + B/2 (I + ... (I + B/m))).
  Result result = Result::Identity(n, n);
  for (int k = order; k >= 1; --k) {
    result = Result::Identity(n, n) + (b * result) / Real(k);
  }
  for (int i = 0; i < squarings; ++i) result = (result * result).eval();
  return result;
}

}  // namespace duality
