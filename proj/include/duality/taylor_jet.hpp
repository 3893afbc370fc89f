#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

namespace duality {

/// Truncated Taylor expansion of a function of one variable about `center`:
/// coeff(m) = f^{(m)}(center) / m! for m <= order(). Arithmetic truncates
/// to the lower order; differentiation drops one order.
template <typename Scalar>
class TaylorJet {
 public:
  TaylorJet(double center, std::vector<Scalar> coefficients) : center_(center), c_(std::move(coefficients)) {}

  static TaylorJet constant(double center, Scalar value, int order) {
    std::vector<Scalar> c(static_cast<std::size_t>(order + 1), Scalar(0));
    c[0] = value;
    return {center, c};
  }
  /// The coordinate function z itself.
  static TaylorJet variable(double center, int order) {
    auto j = constant(center, Scalar(center), order);
    if (order >= 1) j.c_[1] = Scalar(1);
    return j;
  }

  double center() const { return center_; }
  int order() const { return static_cast<int>(c_.size()) - 1; }
  Scalar coeff(int m) const { return c_[static_cast<std::size_t>(m)]; }
  Scalar value() const { return c_[0]; }
  /// f^{(m)}(center).
  Scalar derivative_at(int m) const {
    Scalar f = c_[static_cast<std::size_t>(m)];
    for (int i = 2; i <= m; ++i) f *= Scalar(i);
    return f;
  }

  TaylorJet derivative() const {
    std::vector<Scalar> d(c_.size() > 1 ? c_.size() - 1 : 1, Scalar(0));
    for (std::size_t m = 1; m < c_.size(); ++m) d[m - 1] = Scalar(static_cast<double>(m)) * c_[m];
    return {center_, d};
  }

  friend TaylorJet operator+(const TaylorJet& a, const TaylorJet& b) {
    std::vector<Scalar> c(static_cast<std::size_t>(std::min(a.order(), b.order()) + 1));
    for (std::size_t m = 0; m < c.size(); ++m) c[m] = a.c_[m] + b.c_[m];
    return {a.center_, c};
  }
  friend TaylorJet operator-(const TaylorJet& a, const TaylorJet& b) { return a + Scalar(-1) * b; }
  friend TaylorJet operator*(Scalar s, const TaylorJet& a) {
    auto c = a.c_;
    for (auto& x : c) x *= s;
    return {a.center_, c};
  }
  friend TaylorJet operator*(const TaylorJet& a, const TaylorJet& b) {
    std::vector<Scalar> c(static_cast<std::size_t>(std::min(a.order(), b.order()) + 1), Scalar(0));
    for (std::size_t m = 0; m < c.size(); ++m)
      for (std::size_t i = 0; i <= m; ++i) c[m] += a.c_[i] * b.c_[m - i];
    return {a.center_, c};
  }

 private:
  double center_;
  std::vector<Scalar> c_;
};

}  // namespace duality
