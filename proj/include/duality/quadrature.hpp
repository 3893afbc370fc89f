#pragma once

#include <vector>

namespace duality {

/// Nodes and weights for integrals against e^{-u^2} over the real line:
/// int e^{-u^2} g(u) du ~ sum_i weights[i] g(nodes[i]). Nodes ascend.
struct GaussHermite {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Newton iteration on the normalized Hermite recurrence, started from the
/// eigenvalues of its Jacobi matrix. Throws
/// BadParamRange for n < 1 and SeriesDivergence if a root fails to converge.
GaussHermite gauss_hermite(int n);

}  // namespace duality
