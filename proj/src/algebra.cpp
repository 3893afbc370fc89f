#include "duality/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <unsupported/Eigen/KroneckerProduct>

#include "duality/errors.hpp"
#include "duality/specfun.hpp"

namespace duality::algebra {

namespace {

void require_same_dim(const TruncatedOperator& a, const TruncatedOperator& b, const char* op) {
  if (a.dim() != b.dim()) {
    std::ostringstream os;
    os << op << ": dimensions " << a.dim() << " and " << b.dim() << " differ";
    throw Error(ErrorKind::DimMismatch, os.str());
  }
}

ValidMask intersect(const ValidMask& a, const ValidMask& b) {
  ValidMask out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] && b[i];
  return out;
}

ValidMask all_valid(Index dim) { return ValidMask(static_cast<std::size_t>(dim), true); }

}  // namespace

TruncatedOperator::TruncatedOperator(Matrix entries, ValidMask valid_rows, std::string label)
    : entries_(std::move(entries)), valid_(std::move(valid_rows)), label_(std::move(label)) {
  if (entries_.rows() != entries_.cols()) throw Error(ErrorKind::DimMismatch, "operator matrix must be square");
  if (static_cast<Index>(valid_.size()) != entries_.rows())
    throw Error(ErrorKind::DimMismatch, "validity mask length differs from dimension");
  if (!entries_.allFinite()) throw Error(ErrorKind::DomainError, "operator entries must be finite");
}

TruncatedOperator TruncatedOperator::identity(Index dim, std::string label) {
  return {Matrix::Identity(dim, dim), all_valid(dim), std::move(label)};
}

TruncatedOperator TruncatedOperator::zero(Index dim, std::string label) {
  return {Matrix::Zero(dim, dim), all_valid(dim), std::move(label)};
}

Index TruncatedOperator::valid_count() const { return std::count(valid_.begin(), valid_.end(), true); }

TruncatedOperator TruncatedOperator::relabeled(std::string label) const {
  TruncatedOperator out = *this;
  out.label_ = std::move(label);
  return out;
}

TruncatedOperator operator+(const TruncatedOperator& a, const TruncatedOperator& b) {
  require_same_dim(a, b, "sum");
  return {a.entries() + b.entries(), intersect(a.valid_rows(), b.valid_rows()), a.label() + "+" + b.label()};
}

TruncatedOperator operator-(const TruncatedOperator& a, const TruncatedOperator& b) {
  require_same_dim(a, b, "difference");
  return {a.entries() - b.entries(), intersect(a.valid_rows(), b.valid_rows()), a.label() + "-" + b.label()};
}

TruncatedOperator operator-(const TruncatedOperator& a) { return {-a.entries(), a.valid_rows(), "-" + a.label()}; }

TruncatedOperator operator*(const TruncatedOperator& a, const TruncatedOperator& b) {
  require_same_dim(a, b, "product");
  const Index n = a.dim();
  ValidMask valid(static_cast<std::size_t>(n), false);
  for (Index r = 0; r < n; ++r) {
    if (!a.is_valid(r)) continue;
    bool ok = true;
    for (Index m = 0; m < n && ok; ++m) {
      if (a.entries()(r, m) != Complex(0.0) && !b.is_valid(m)) ok = false;
    }
    valid[static_cast<std::size_t>(r)] = ok;
  }
  Matrix product = a.entries() * b.entries();
  return {std::move(product), std::move(valid), a.label() + b.label()};
}

TruncatedOperator operator*(Complex s, const TruncatedOperator& a) {
  return {s * a.entries(), a.valid_rows(), a.label()};
}

TruncatedOperator commutator(const TruncatedOperator& a, const TruncatedOperator& b) {
  return (a * b - b * a).relabeled("[" + a.label() + "," + b.label() + "]");
}

TruncatedOperator tensor(const TruncatedOperator& a, const TruncatedOperator& b) {
  Matrix product = Eigen::kroneckerProduct(a.entries(), b.entries()).eval();
  ValidMask valid(static_cast<std::size_t>(a.dim() * b.dim()));
  for (Index i = 0; i < a.dim(); ++i)
    for (Index j = 0; j < b.dim(); ++j) valid[static_cast<std::size_t>(i * b.dim() + j)] = a.is_valid(i) && b.is_valid(j);
  return {std::move(product), std::move(valid), a.label() + "(x)" + b.label()};
}

TruncatedOperator coproduct(const TruncatedOperator& a) {
  const auto one = TruncatedOperator::identity(a.dim());
  return (tensor(one, a) + tensor(a, one)).relabeled("D(" + a.label() + ")");
}

TruncatedOperator power(const TruncatedOperator& a, int exponent) {
  if (exponent < 0) throw Error(ErrorKind::OutOfRange, "negative operator power");
  TruncatedOperator out = TruncatedOperator::identity(a.dim());
  for (int i = 0; i < exponent; ++i) out = out * a;
  return out;
}

double valid_max_norm(const TruncatedOperator& a) {
  double worst = 0.0;
  for (Index r = 0; r < a.dim(); ++r)
    if (a.is_valid(r)) worst = std::max(worst, a.entries().row(r).cwiseAbs().maxCoeff());
  return worst;
}

double residual(const TruncatedOperator& a, const TruncatedOperator& b) { return valid_max_norm(a - b); }

double max_imaginary(const TruncatedOperator& a) { return a.entries().imag().cwiseAbs().maxCoeff(); }

std::string_view to_string(AlgebraKind kind) {
  switch (kind) {
    case AlgebraKind::su2: return "su2";
    case AlgebraKind::su11_discrete: return "su11_discrete";
    case AlgebraKind::heisenberg: return "heisenberg";
  }
  return "?";
}

int rep_dimension(const RepSpec& spec) {
  if (spec.algebra == AlgebraKind::su2) return sep_capacity(spec.params) + 1;
  if (spec.dim < 4) throw Error(ErrorKind::OutOfRange, "truncation dimension must be at least 4");
  return spec.dim;
}

double sep_shift(double p) { return (1.0 - 2.0 * p) / (2.0 * std::sqrt(p * (1.0 - p))); }
double sip_shift(double c) { return (1.0 + c) / (2.0 * std::sqrt(c)); }

namespace {

// Operator whose action is (A f)(n) = weight(n) f(n + shift), with the top
// rows invalid when n + shift falls outside an infinite representation.
template <typename Weight>
TruncatedOperator shift_operator(int dim, int shift, bool finite, Weight weight, std::string label) {
  Matrix m = Matrix::Zero(dim, dim);
  ValidMask valid(static_cast<std::size_t>(dim), true);
  for (int n = 0; n < dim; ++n) {
    const int target = n + shift;
    if (target < 0) continue;  // f(-1) = 0
    if (target >= dim) {
      if (!finite) valid[static_cast<std::size_t>(n)] = false;
      continue;
    }
    m(n, target) = weight(n);
  }
  return {std::move(m), std::move(valid), std::move(label)};
}

TruncatedOperator su2_generator(const RepSpec& spec, const std::string& name) {
  const double j = spec.params.require("j");
  const int dim = rep_dimension(spec);
  const double two_j = dim - 1;
  if (name == "H") return shift_operator(dim, 0, true, [&](int n) { return Complex(2.0 * (n - j)); }, "H");
  if (name == "E") return shift_operator(dim, -1, true, [](int n) { return Complex(n); }, "E");
  if (name == "F") return shift_operator(dim, +1, true, [&](int n) { return Complex(two_j - n); }, "F");
  throw Error(ErrorKind::UnknownSymbol, "su2 has no generator '" + name + "'");
}

TruncatedOperator su11_generator(const RepSpec& spec, const std::string& name) {
  const double k = spec.params.require("k");
  const int dim = rep_dimension(spec);
  if (name == "H") return shift_operator(dim, 0, false, [&](int n) { return Complex(2.0 * (k + n)); }, "H");
  if (name == "E") return shift_operator(dim, +1, false, [&](int n) { return Complex(2.0 * k + n); }, "E");
  if (name == "F") return shift_operator(dim, -1, false, [](int n) { return Complex(-n); }, "F");
  throw Error(ErrorKind::UnknownSymbol, "su(1,1) has no generator '" + name + "'");
}

TruncatedOperator heisenberg_generator(const RepSpec& spec, const std::string& name) {
  const double lambda = spec.params.require("lambda");
  const int dim = rep_dimension(spec);
  if (name == "a") return shift_operator(dim, -1, false, [](int n) { return Complex(n); }, "a");
  if (name == "a_dagger") return shift_operator(dim, +1, false, [&](int) { return Complex(lambda); }, "a+");
  if (name == "Z") return shift_operator(dim, 0, false, [&](int) { return Complex(lambda); }, "Z");
  throw Error(ErrorKind::UnknownSymbol, "Heisenberg algebra has no generator '" + name + "'");
}

}  // namespace

TruncatedOperator rep_matrix(const RepSpec& spec, const std::string& name) {
  for (auto pname : {"j", "k", "lambda", "p", "c"})
    if (auto v = spec.params.get(pname)) validate_param(pname, *v);

  switch (spec.algebra) {
    case AlgebraKind::su2: {
      if (name == "X_p" || name == "H_p") {
        const double p = spec.params.require("p");
        const auto x_p = su2_generator(spec, "E") + su2_generator(spec, "F") - sep_shift(p) * su2_generator(spec, "H");
        if (name == "X_p") return x_p.relabeled("Xp");
        return (-2.0 * std::sqrt(p * (1.0 - p)) * x_p).relabeled("Hp");
      }
      return su2_generator(spec, name);
    }
    case AlgebraKind::su11_discrete: {
      if (name == "X_c" || name == "H_c") {
        const double c = spec.params.require("c");
        const auto x_c = su11_generator(spec, "E") - su11_generator(spec, "F") - sip_shift(c) * su11_generator(spec, "H");
        if (name == "X_c") return x_c.relabeled("Xc");
        return (2.0 * std::sqrt(c) / (c - 1.0) * x_c).relabeled("Hc");
      }
      return su11_generator(spec, name);
    }
    case AlgebraKind::heisenberg: {
      if (name == "X") return (heisenberg_generator(spec, "Z") - heisenberg_generator(spec, "a_dagger")).relabeled("X");
      return heisenberg_generator(spec, name);
    }
  }
  throw Error(ErrorKind::UnknownSymbol, name);
}

TruncatedOperator casimir(const RepSpec& spec) {
  if (spec.algebra == AlgebraKind::heisenberg)
    throw Error(ErrorKind::NoCasimir, "the Heisenberg algebra has no Casimir element");
  const auto h = rep_matrix(spec, "H");
  const auto e = rep_matrix(spec, "E");
  const auto f = rep_matrix(spec, "F");
  return (0.5 * (h * h) + e * f + f * e).relabeled("Omega");
}

std::vector<RelationResidual> commutation_residuals(const RepSpec& spec) {
  auto op = [&](const char* name) { return rep_matrix(spec, name); };
  std::vector<RelationResidual> out;
  if (spec.algebra == AlgebraKind::heisenberg) {
    const auto a = op("a"), ad = op("a_dagger"), z = op("Z"), x = op("X");
    out.push_back({"[a,a_dagger]=-Z", residual(commutator(a, ad), -z)});
    out.push_back({"[a,Z]=0", valid_max_norm(commutator(a, z))});
    out.push_back({"[a_dagger,Z]=0", valid_max_norm(commutator(ad, z))});
    out.push_back({"[a,X]=Z", residual(commutator(a, x), z)});
    out.push_back({"a_dagger=-X+[a,X]", residual(ad, -x + commutator(a, x))});
    return out;
  }
  const auto h = op("H"), e = op("E"), f = op("F");
  const double s = spec.algebra == AlgebraKind::su2 ? 1.0 : -1.0;
  const char* sign = spec.algebra == AlgebraKind::su2 ? "" : "-";
  out.push_back({std::string("[H,E]=") + sign + "2E", residual(commutator(h, e), 2.0 * s * e)});
  out.push_back({std::string("[H,F]=") + (s > 0 ? "-" : "") + "2F", residual(commutator(h, f), -2.0 * s * f)});
  out.push_back({std::string("[E,F]=") + sign + "H", residual(commutator(e, f), s * h)});
  return out;
}

CheckReport check_commutation(const RepSpec& spec, double tolerance) {
  double worst = 0.0;
  for (const auto& r : commutation_residuals(spec)) worst = std::max(worst, r.residual);
  std::map<std::string, double> params;
  for (auto name : {"j", "k", "lambda"})
    if (auto v = spec.params.get(name)) params[name] = *v;
  params["dim"] = rep_dimension(spec);
  return make_report("commutation", std::string(to_string(spec.algebra)), params, worst, tolerance,
                     "commutation relations of the generators");
}

// ---------------------------------------------------------------------------

OperatorPolynomial OperatorPolynomial::symbol(const std::string& name) {
  return OperatorPolynomial({Term{Complex(1.0), Word{name}}});
}

OperatorPolynomial OperatorPolynomial::scalar(Complex value) { return OperatorPolynomial({Term{value, Word{}}}); }

OperatorPolynomial OperatorPolynomial::canonical(double drop_below) const {
  std::map<Word, Complex> merged;
  for (const auto& t : terms_) merged[t.word] += t.coefficient;
  std::vector<Term> out;
  for (auto& [word, coef] : merged)
    if (std::abs(coef) > drop_below) out.push_back({coef, word});
  return OperatorPolynomial(std::move(out));
}

OperatorPolynomial operator+(const OperatorPolynomial& a, const OperatorPolynomial& b) {
  std::vector<Term> terms = a.terms_;
  terms.insert(terms.end(), b.terms_.begin(), b.terms_.end());
  return OperatorPolynomial(std::move(terms));
}

OperatorPolynomial operator-(const OperatorPolynomial& a, const OperatorPolynomial& b) {
  return a + Complex(-1.0) * b;
}

OperatorPolynomial operator*(const OperatorPolynomial& a, const OperatorPolynomial& b) {
  std::vector<Term> terms;
  terms.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& ta : a.terms_) {
    for (const auto& tb : b.terms_) {
      Word w = ta.word;
      w.insert(w.end(), tb.word.begin(), tb.word.end());
      terms.push_back({ta.coefficient * tb.coefficient, std::move(w)});
    }
  }
  return OperatorPolynomial(std::move(terms));
}

OperatorPolynomial operator*(Complex s, const OperatorPolynomial& a) {
  std::vector<Term> terms = a.terms_;
  for (auto& t : terms) t.coefficient *= s;
  return OperatorPolynomial(std::move(terms));
}

std::string OperatorPolynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << t.coefficient.real();
    if (t.coefficient.imag() != 0.0) os << (t.coefficient.imag() < 0 ? "-" : "+") << std::abs(t.coefficient.imag()) << "i";
    os << ")";
    for (const auto& s : t.word) os << ' ' << s;
  }
  return os.str();
}

OperatorPolynomial poly_commutator(const OperatorPolynomial& a, const OperatorPolynomial& b) { return a * b - b * a; }

OperatorPolynomial reverse(const OperatorPolynomial& p, const std::string& first, const std::string& second) {
  std::vector<Term> terms;
  terms.reserve(p.terms().size());
  for (const auto& t : p.terms()) {
    Word w(t.word.rbegin(), t.word.rend());
    for (auto& s : w) {
      if (s == first) s = second;
      else if (s == second) s = first;
      else throw Error(ErrorKind::UnknownSymbol, "reversal is defined for strings in '" + first + "' and '" + second + "' only, got '" + s + "'");
    }
    terms.push_back({t.coefficient, std::move(w)});
  }
  return OperatorPolynomial(std::move(terms));
}

bool is_reversal_symmetric(const OperatorPolynomial& p, const std::string& first, const std::string& second,
                           double tolerance) {
  return (p - reverse(p, first, second)).canonical(tolerance).empty();
}

TruncatedOperator eval_poly(const OperatorPolynomial& p, const Assignment& assignment) {
  if (assignment.empty()) throw Error(ErrorKind::UnassignedSymbol, "empty assignment");
  const Index dim = assignment.begin()->second.dim();
  for (const auto& [name, op] : assignment)
    if (op.dim() != dim) throw Error(ErrorKind::DimMismatch, "assigned operator '" + name + "' has a different dimension");

  TruncatedOperator total = TruncatedOperator::zero(dim);
  for (const auto& t : p.terms()) {
    TruncatedOperator product = TruncatedOperator::identity(dim);
    for (const auto& s : t.word) {
      auto it = assignment.find(s);
      if (it == assignment.end()) throw Error(ErrorKind::UnassignedSymbol, "symbol '" + s + "' has no operator");
      product = product * it->second;
    }
    total = total + t.coefficient * product;
  }
  return total.relabeled(p.to_string());
}

OperatorPolynomial casimir_polynomial() {
  const auto h = OperatorPolynomial::symbol("H");
  const auto e = OperatorPolynomial::symbol("E");
  const auto f = OperatorPolynomial::symbol("F");
  return Complex(0.5) * (h * h) + e * f + f * e;
}

namespace {

// Omega = square (H^2 + Y^2) + cross (H Y + Y H) + commutator [H, Y]^2.
template <typename S>
struct RewriteCoefficients {
  S square, cross, commutator;
};

template <typename S>
RewriteCoefficients<S> sep_rewrite_coefficients(S p) {
  const S q = p * (1 - p);
  return {1 / (8 * q), -(1 - 2 * p) / (8 * q), -1 / (32 * q)};
}

template <typename S>
RewriteCoefficients<S> sip_rewrite_coefficients(S c) {
  const S s = (c - 1) * (c - 1);
  return {-s / (8 * c), (1 - c * c) / (8 * c), s / (32 * c)};
}

OperatorPolynomial rewrite_polynomial(const RewriteCoefficients<double>& k, const std::string& other) {
  const auto h = OperatorPolynomial::symbol("H");
  const auto y = OperatorPolynomial::symbol(other);
  const auto comm = poly_commutator(h, y);
  return Complex(k.square) * (h * h + y * y) + Complex(k.cross) * (h * y + y * h) + Complex(k.commutator) * (comm * comm);
}

// The rewrite cancels quartic terms of size ~(2 dim)^4, so the check forms
// generators, derived operator and coefficients in extended precision.
using WideMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;

struct WideGenerators {
  WideMatrix h, e, f;
};

WideGenerators wide_generators(const RepSpec& spec) {
  const int dim = rep_dimension(spec);
  WideGenerators g{WideMatrix::Zero(dim, dim), WideMatrix::Zero(dim, dim), WideMatrix::Zero(dim, dim)};
  if (spec.algebra == AlgebraKind::su2) {
    const long double j = spec.params.require("j");
    for (int n = 0; n < dim; ++n) {
      g.h(n, n) = 2 * (n - j);
      if (n > 0) g.e(n, n - 1) = n;
      if (n + 1 < dim) g.f(n, n + 1) = 2 * j - n;
    }
  } else {
    const long double k = spec.params.require("k");
    for (int n = 0; n < dim; ++n) {
      g.h(n, n) = 2 * (k + n);
      if (n + 1 < dim) g.e(n, n + 1) = 2 * k + n;
      if (n > 0) g.f(n, n - 1) = -n;
    }
  }
  return g;
}

}  // namespace

OperatorPolynomial sep_casimir_rewrite(double p) {
  validate_param("p", p);
  return rewrite_polynomial(sep_rewrite_coefficients(p), "H_p");
}

OperatorPolynomial sip_casimir_rewrite(double c) {
  validate_param("c", c);
  return rewrite_polynomial(sip_rewrite_coefficients(c), "H_c");
}

CheckReport check_casimir_rewrite(const RepSpec& spec, Family variant, double tolerance) {
  std::map<std::string, double> params;
  for (auto name : {"j", "p", "k", "c"})
    if (auto v = spec.params.get(name)) params[name] = *v;
  params["dim"] = rep_dimension(spec);

  std::string other;
  RewriteCoefficients<long double> coef{};
  const auto g = wide_generators(spec);
  WideMatrix y;
  switch (variant) {
    case Family::SEP: {
      if (spec.algebra != AlgebraKind::su2) throw Error(ErrorKind::NotApplicable, "SEP rewrite lives in su(2)");
      const long double p = spec.params.require("p");
      validate_param("p", static_cast<double>(p));
      other = "H_p";
      coef = sep_rewrite_coefficients(p);
      const long double shift = (1 - 2 * p) / (2 * std::sqrt(p * (1 - p)));
      y = -2 * std::sqrt(p * (1 - p)) * (g.e + g.f - shift * g.h);
      break;
    }
    case Family::SIP: {
      if (spec.algebra != AlgebraKind::su11_discrete)
        throw Error(ErrorKind::NotApplicable, "SIP rewrite lives in discrete su(1,1)");
      const long double c = spec.params.require("c");
      validate_param("c", static_cast<double>(c));
      other = "H_c";
      coef = sip_rewrite_coefficients(c);
      const long double shift = (1 + c) / (2 * std::sqrt(c));
      y = 2 * std::sqrt(c) / (c - 1) * (g.e - g.f - shift * g.h);
      break;
    }
    case Family::BEP:
      throw Error(ErrorKind::NotApplicable, "the BEP rewrite has no finite matrix form; see diffops");
    default:
      throw Error(ErrorKind::NotApplicable, "no Casimir rewrite for this family");
  }

  // Validity follows the sparsity pattern, so the double operators supply it.
  const auto pattern = eval_poly(rewrite_polynomial({1.0, 1.0, 1.0}, other),
                                 {{"H", rep_matrix(spec, "H")}, {other, rep_matrix(spec, other)}});
  const auto omega_pattern = casimir(spec);

  const WideMatrix comm = g.h * y - y * g.h;
  const WideMatrix rewritten = coef.square * (g.h * g.h + y * y) + coef.cross * (g.h * y + y * g.h) + coef.commutator * (comm * comm);
  const WideMatrix direct = 0.5L * g.h * g.h + g.e * g.f + g.f * g.e;
  long double worst = 0;
  for (Index r = 0; r < rewritten.rows(); ++r)
    if (pattern.is_valid(r) && omega_pattern.is_valid(r))
      worst = std::max(worst, (rewritten.row(r) - direct.row(r)).cwiseAbs().maxCoeff());
  return make_report("casimir_rewrite", std::string(to_string(variant)), params, static_cast<double>(worst), tolerance,
                     "Casimir as a reversal-symmetric polynomial in H and the eigen-operator");
}

Eigen::MatrixXd kernel_matrix(const KernelId& id, Index rows, Index cols) {
  Eigen::MatrixXd m(rows, cols);
  for (Index x = 0; x < rows; ++x)
    for (Index n = 0; n < cols; ++n) m(x, n) = specfun::kernel_value(id, double(x), double(n));
  return m;
}

double intertwining_residual(const TruncatedOperator& a, const TruncatedOperator& b, const Eigen::MatrixXd& kernel) {
  if (a.dim() != kernel.rows() || b.dim() != kernel.cols())
    throw Error(ErrorKind::DimMismatch, "kernel shape does not match the operator dimensions");
  const Matrix f = kernel.cast<Complex>();
  const Matrix lhs = a.entries() * f;
  const Matrix rhs = f * b.entries().transpose();
  const Eigen::MatrixXd abs_f = kernel.cwiseAbs();
  const Eigen::MatrixXd scale = a.entries().cwiseAbs() * abs_f + abs_f * b.entries().cwiseAbs().transpose();
  double worst = 0.0;
  for (Index x = 0; x < kernel.rows(); ++x) {
    if (!a.is_valid(x)) continue;
    for (Index n = 0; n < kernel.cols(); ++n) {
      if (!b.is_valid(n)) continue;
      worst = std::max(worst, std::abs(lhs(x, n) - rhs(x, n)) / std::max(1.0, scale(x, n)));
    }
  }
  return worst;
}

CheckReport check_casimir(const RepSpec& spec, int coproduct_dim, double tolerance) {
  const auto omega = casimir(spec);
  double worst = 0.0;
  for (auto name : {"H", "E", "F"}) worst = std::max(worst, valid_max_norm(commutator(omega, rep_matrix(spec, name))));
  const double value = spec.algebra == AlgebraKind::su2 ? 2.0 * spec.params.require("j") * (spec.params.require("j") + 1.0)
                                                         : 2.0 * spec.params.require("k") * (spec.params.require("k") - 1.0);
  worst = std::max(worst, residual(omega, value * TruncatedOperator::identity(omega.dim())));

  RepSpec small = spec;
  small.dim = coproduct_dim;
  const auto h = rep_matrix(small, "H"), e = rep_matrix(small, "E"), f = rep_matrix(small, "F");
  const auto om = casimir(small);
  const auto one = TruncatedOperator::identity(h.dim());
  const auto lhs = eval_poly(casimir_polynomial(), {{"H", coproduct(h)}, {"E", coproduct(e)}, {"F", coproduct(f)}});
  const auto rhs = tensor(one, om) + tensor(om, one) + tensor(h, h) + 2.0 * tensor(f, e) + 2.0 * tensor(e, f);
  worst = std::max(worst, residual(lhs, rhs));

  std::map<std::string, double> params;
  for (auto name : {"j", "k"})
    if (auto v = spec.params.get(name)) params[name] = *v;
  params["dim"] = rep_dimension(spec);
  params["coproduct_dim"] = rep_dimension(small);
  return make_report("casimir", std::string(to_string(spec.algebra)), params, worst, tolerance,
                     "Casimir is central, scalar, and expands under the coproduct");
}

CheckReport check_intertwining(Family family, const Params& params, int dim, int sites, double tolerance) {
  if (sites != 1 && sites != 2) throw Error(ErrorKind::BadParamRange, "sites must be 1 or 2");
  RepSpec spec;
  spec.params = params;
  spec.dim = dim;
  std::string first, second;
  switch (family) {
    case Family::SEP: spec.algebra = AlgebraKind::su2; first = "H"; second = "H_p"; break;
    case Family::SIP: spec.algebra = AlgebraKind::su11_discrete; first = "H"; second = "H_c"; break;
    case Family::IRW: spec.algebra = AlgebraKind::heisenberg; first = "a"; second = "X"; break;
    default: throw Error(ErrorKind::NotApplicable, "discrete families only");
  }
  const int d = rep_dimension(spec);
  const Eigen::MatrixXd single = kernel_matrix(KernelId(family, params), d, d);
  auto a = rep_matrix(spec, first), b = rep_matrix(spec, second);
  Eigen::MatrixXd kernel = single;
  if (sites == 2) {
    kernel = Eigen::kroneckerProduct(single, single);
    if (family == Family::IRW) {
      const auto one = TruncatedOperator::identity(d);
      a = tensor(a, one) - tensor(one, a);
      b = tensor(b, one) - tensor(one, b);
    } else {
      a = coproduct(a);
      b = coproduct(b);
    }
  }
  const double worst = std::max(intertwining_residual(a, b, kernel), intertwining_residual(b, a, kernel));
  auto rp = params.as_map();
  rp["dim"] = d;
  rp["sites"] = sites;
  return make_report("intertwining", std::string(to_string(family)), rp, worst, tolerance,
                     sites == 1 ? "the kernel intertwines the operator pair in both directions"
                                : "the product kernel intertwines the lifted pair");
}

}  // namespace duality::algebra
