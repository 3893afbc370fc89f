#pragma once

#include <complex>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "duality/family.hpp"
#include "duality/report.hpp"

/// Matrix realizations of su(2), discrete su(1,1) and the Heisenberg
/// algebra, operator strings and their reversal, and residual checks of the
/// structural identities used by the self-duality constructions.
namespace duality::algebra {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Index = Eigen::Index;
using ValidMask = std::vector<bool>;

/// A finite matrix standing in for an operator on functions f(n):
/// (A f)(n) = sum_m A(n, m) f(m). Rows whose infinite-dimensional action
/// would reach past the truncation are marked invalid; identities are only
/// asserted on valid rows.
class TruncatedOperator {
 public:
  TruncatedOperator(Matrix entries, ValidMask valid_rows, std::string label = {});

  static TruncatedOperator identity(Index dim, std::string label = "1");
  static TruncatedOperator zero(Index dim, std::string label = "0");

  Index dim() const { return entries_.rows(); }
  const Matrix& entries() const { return entries_; }
  const ValidMask& valid_rows() const { return valid_; }
  bool is_valid(Index row) const { return valid_[static_cast<std::size_t>(row)]; }
  Index valid_count() const;
  const std::string& label() const { return label_; }

  TruncatedOperator relabeled(std::string label) const;

 private:
  Matrix entries_;
  ValidMask valid_;
  std::string label_;
};

TruncatedOperator operator+(const TruncatedOperator& a, const TruncatedOperator& b);
TruncatedOperator operator-(const TruncatedOperator& a, const TruncatedOperator& b);
TruncatedOperator operator-(const TruncatedOperator& a);
/// Composition; a row of AB is valid when it is valid in A and every column
/// it touches indexes a valid row of B.
TruncatedOperator operator*(const TruncatedOperator& a, const TruncatedOperator& b);
TruncatedOperator operator*(Complex s, const TruncatedOperator& a);
inline TruncatedOperator operator*(double s, const TruncatedOperator& a) { return Complex(s) * a; }

TruncatedOperator commutator(const TruncatedOperator& a, const TruncatedOperator& b);
/// Kronecker product, first factor is the slow index.
TruncatedOperator tensor(const TruncatedOperator& a, const TruncatedOperator& b);
/// 1 (x) A + A (x) 1.
TruncatedOperator coproduct(const TruncatedOperator& a);
TruncatedOperator power(const TruncatedOperator& a, int exponent);

/// max |entry| over rows valid in the operator.
double valid_max_norm(const TruncatedOperator& a);
/// max |a - b| over rows valid in both.
double residual(const TruncatedOperator& a, const TruncatedOperator& b);
/// Largest |imaginary part| over all entries.
double max_imaginary(const TruncatedOperator& a);

enum class AlgebraKind { su2, su11_discrete, heisenberg };
std::string_view to_string(AlgebraKind kind);

/// su2 reads j (and p for X_p, H_p); su11_discrete reads k (and c for X_c,
/// H_c); heisenberg reads lambda. The su2 dimension is always 2j+1.
struct RepSpec {
  AlgebraKind algebra = AlgebraKind::su2;
  Params params;
  int dim = 40;
};

int rep_dimension(const RepSpec& spec);

/// Generators {H, E, F} or {a, a_dagger, Z}, and derived operators
/// X_p = E + F - a(p) H, H_p = -2 sqrt(p(1-p)) X_p          (su2)
/// X_c = E - F - a(c) H, H_c = 2 sqrt(c) / (c - 1) X_c        (su11_discrete)
/// X   = Z - a_dagger                                         (heisenberg)
TruncatedOperator rep_matrix(const RepSpec& spec, const std::string& name);

/// a(p) = (1 - 2p) / (2 sqrt(p(1-p))).
double sep_shift(double p);
/// a(c) = (1 + c) / (2 sqrt(c)).
double sip_shift(double c);

/// 1/2 H^2 + EF + FE; throws NoCasimir for the Heisenberg algebra.
TruncatedOperator casimir(const RepSpec& spec);

struct RelationResidual {
  std::string relation;
  double residual;
};

/// Commutation relations realized by the function actions, with their
/// valid-row residuals. su2: [H,E]=2E, [H,F]=-2F, [E,F]=H. The su11_discrete
/// and heisenberg actions compose in the opposite order, so there the
/// relations read [H,E]=-2E, [H,F]=2F, [E,F]=-H and [a,a_dagger]=-Z,
/// [a,Z]=[a_dagger,Z]=0, [a,X]=Z.
std::vector<RelationResidual> commutation_residuals(const RepSpec& spec);

/// Largest of commutation_residuals as a report.
CheckReport check_commutation(const RepSpec& spec, double tolerance = 1e-12);

// ---------------------------------------------------------------------------
// Operator strings

using Word = std::vector<std::string>;

struct Term {
  Complex coefficient;
  Word word;
};

/// Formal linear combination of words in named symbols. The empty word is
/// the identity.
class OperatorPolynomial {
 public:
  OperatorPolynomial() = default;
  explicit OperatorPolynomial(std::vector<Term> terms) : terms_(std::move(terms)) {}

  static OperatorPolynomial symbol(const std::string& name);
  static OperatorPolynomial scalar(Complex value);

  const std::vector<Term>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  /// Merges equal words, drops coefficients below `drop_below`, sorts words.
  OperatorPolynomial canonical(double drop_below = 0.0) const;

  friend OperatorPolynomial operator+(const OperatorPolynomial& a, const OperatorPolynomial& b);
  friend OperatorPolynomial operator-(const OperatorPolynomial& a, const OperatorPolynomial& b);
  friend OperatorPolynomial operator*(const OperatorPolynomial& a, const OperatorPolynomial& b);
  friend OperatorPolynomial operator*(Complex s, const OperatorPolynomial& a);

  std::string to_string() const;

 private:
  std::vector<Term> terms_;
};

OperatorPolynomial poly_commutator(const OperatorPolynomial& a, const OperatorPolynomial& b);

/// String reversal with respect to the ordered pair (first, second): a word
/// first^{n1} second^{n2} ... first^{n_{k-1}} second^{n_k} maps to
/// first^{n_k} second^{n_{k-1}} ... first^{n2} second^{n1}, i.e. the letters
/// are read backwards and the two symbols exchanged. Coefficients are kept.
OperatorPolynomial reverse(const OperatorPolynomial& p, const std::string& first, const std::string& second);

bool is_reversal_symmetric(const OperatorPolynomial& p, const std::string& first, const std::string& second,
                           double tolerance = 1e-14);

using Assignment = std::map<std::string, TruncatedOperator>;

TruncatedOperator eval_poly(const OperatorPolynomial& p, const Assignment& assignment);

/// 1/2 H^2 + EF + FE in the symbols H, E, F.
OperatorPolynomial casimir_polynomial();
/// The Casimir as a polynomial in H and H_p:
/// (H^2 + H_p^2)/(8p(1-p)) - (1-2p)(H H_p + H_p H)/(8p(1-p)) - [H, H_p]^2/(32p(1-p)).
OperatorPolynomial sep_casimir_rewrite(double p);
/// The Casimir as a polynomial in H and H_c:
/// -(c-1)^2(H^2 + H_c^2)/(8c) + (1-c^2)(H H_c + H_c H)/(8c) + (c-1)^2 [H_c, H]^2/(32c).
OperatorPolynomial sip_casimir_rewrite(double c);

/// Residual of the Casimir rewrite against 1/2 H^2 + EF + FE on valid rows.
/// `variant` is SEP (su2, needs p) or SIP (su11_discrete, needs c); BEP is
/// checked by the differential-operator module and throws NotApplicable.
CheckReport check_casimir_rewrite(const RepSpec& spec, Family variant, double tolerance = 1e-10);

/// Kernel matrix F(x, n) = kernel_value(id, x, n) for x < rows, n < cols.
Eigen::MatrixXd kernel_matrix(const KernelId& id, Index rows, Index cols);

/// max over valid (x, n) of |(A F)(x, n) - (F B^T)(x, n)|, each entry
/// divided by max(1, (|A||F| + |F||B|^T)(x, n)). x must be a valid row of A
/// and n a valid row of B.
double intertwining_residual(const TruncatedOperator& a, const TruncatedOperator& b, const Eigen::MatrixXd& kernel);

/// Largest of: [Omega, X] on valid rows for X in {H, E, F}; Omega against its
/// scalar value (2j(j+1) for su2, 2k(k-1) for su11_discrete); and the
/// coproduct expansion Delta(Omega) = 1(x)Omega + Omega(x)1 + H(x)H + 2F(x)E + 2E(x)F
/// evaluated at coproduct_dim per site.
CheckReport check_casimir(const RepSpec& spec, int coproduct_dim = 20, double tolerance = 1e-11);

/// Kernel intertwining of the family's operator pair in both directions:
/// SEP (H, H_p) with the Krawtchouk kernel, SIP (H, H_c) with Meixner, IRW
/// (a, X) with Charlier. sites = 2 lifts both operators through the
/// coproduct (the IRW pair through a(x)1 - 1(x)a) and uses the product
/// kernel. dim applies to the infinite representations.
CheckReport check_intertwining(Family family, const Params& params, int dim, int sites, double tolerance = 1e-10);

}  // namespace duality::algebra
