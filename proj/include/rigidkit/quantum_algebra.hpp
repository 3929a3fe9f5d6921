#pragma once

// Finite-rank graded commutative algebras over the Novikov field, given by
// structure constants over Λ = K[q, q^-1] on a classical homology basis.
//
// Degree conventions: a basis class b_i has degree d_i in [0, 2n], q has
// degree 2, s has degree 0, and b_i * b_j is homogeneous of degree
// d_i + d_j - 2n. The degree-2n piece QH_{2n} is a K-algebra with basis
// e_i = q^{(2n - d_i)/2} b_i over the classes with d_i even; ring-theoretic
// questions (idempotents, semisimplicity) are asked there.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rigidkit/exact_matrix.hpp"
#include "rigidkit/novikov.hpp"

namespace rigidkit {

struct BasisClass {
  std::string label;
  int degree = 0;
  friend bool operator==(const BasisClass&, const BasisClass&) = default;
};

struct GradedBasis {
  std::vector<BasisClass> classes;
  int dimension_2n = 0;
  std::size_t unity = 0;
  std::size_t point = 0;

  std::size_t size() const { return classes.size(); }
  std::optional<std::size_t> find(std::string_view label) const;
  friend bool operator==(const GradedBasis&, const GradedBasis&) = default;
};

/// Σ_i λ_i b_i with λ_i ∈ Λ.
struct QHElement {
  std::vector<LambdaElement> coeffs;

  static QHElement zero(BaseField field, std::size_t rank);
  static QHElement basis(BaseField field, std::size_t rank, std::size_t i);

  BaseField field() const { return coeffs.empty() ? BaseField::Qmodel : coeffs.front().field(); }
  bool is_zero() const;

  QHElement& operator+=(const QHElement& o);
  QHElement& operator-=(const QHElement& o);
  friend QHElement operator+(QHElement a, const QHElement& b) { return a += b; }
  friend QHElement operator-(QHElement a, const QHElement& b) { return a -= b; }
  QHElement operator-() const;
  /// Scalar action of Λ.
  friend QHElement operator*(const LambdaElement& c, const QHElement& x);
  friend QHElement operator*(const NovikovScalar& c, const QHElement& x);

  friend bool operator==(const QHElement&, const QHElement&) = default;
};

using KVector = std::vector<NovikovScalar>;

class QuantumAlgebra {
 public:
  struct Entry {
    std::size_t i = 0;
    std::size_t j = 0;
    QHElement product;
  };

  /// Missing (j,i) entries are filled from (i,j) with the graded sign;
  /// missing unity rows default to [M] * b = b. Structural invariants of the
  /// basis and of scalar data are validated here; ring axioms are checked by
  /// check_axioms().
  QuantumAlgebra(BaseField field, GradedBasis basis, PeriodGroup gamma, std::vector<Entry> entries,
                 std::optional<Rational> kappa = std::nullopt);

  BaseField field() const { return field_; }
  const GradedBasis& basis() const { return basis_; }
  const PeriodGroup& gamma() const { return gamma_; }
  const std::optional<Rational>& kappa() const { return kappa_; }
  std::size_t rank() const { return basis_.size(); }
  int n() const { return basis_.dimension_2n / 2; }

  const QHElement& product(std::size_t i, std::size_t j) const { return table_[i][j]; }
  QHElement unity() const { return QHElement::basis(field_, rank(), basis_.unity); }
  QHElement point() const { return QHElement::basis(field_, rank(), basis_.point); }
  QHElement element(std::size_t i) const { return QHElement::basis(field_, rank(), i); }

  /// Table entries in (i ≤ j) order, the canonical serialized form.
  std::vector<Entry> entries() const;

  /// Indices of the classes spanning QH_{2n} (even-degree classes).
  const std::vector<std::size_t>& top_classes() const { return top_; }

 private:
  BaseField field_;
  GradedBasis basis_;
  PeriodGroup gamma_;
  std::optional<Rational> kappa_;
  std::vector<std::vector<QHElement>> table_;
  std::vector<std::size_t> top_;
};

bool operator==(const QuantumAlgebra& a, const QuantumAlgebra& b);

QHElement qprod(const QuantumAlgebra& alg, const QHElement& x, const QHElement& y);

/// Degree of a homogeneous element; nullopt for zero or mixed degree.
std::optional<int> homogeneous_degree(const QuantumAlgebra& alg, const QHElement& x);

struct AxiomViolation {
  std::string axiom;
  std::string detail;
};

/// Unity, graded commutativity, grading rule, and associativity on all basis triples.
std::vector<AxiomViolation> check_axioms(const QuantumAlgebra& alg);

bool is_idempotent(const QuantumAlgebra& alg, const QHElement& x);

/// Ω(x, y): the K-coefficient of [point]·q^0 in x * y.
NovikovScalar omega_pairing(const QuantumAlgebra& alg, const QHElement& x, const QHElement& y);
/// Π(x, y) = τ Ω(x, y).
Rational frobenius(const QuantumAlgebra& alg, const QHElement& x, const QHElement& y);
/// Gram matrix of Ω on the classical basis.
ExactMatrix<NovikovScalar> frobenius_gram(const QuantumAlgebra& alg);

/// Coordinates of x in QH_{2n} with respect to e_i (order of top_classes()).
std::optional<KVector> to_top_degree(const QuantumAlgebra& alg, const QHElement& x);
QHElement from_top_degree(const QuantumAlgebra& alg, const KVector& v);

enum class Semisimplicity { Semisimple, NotSemisimple, Inconclusive };
std::string to_string(Semisimplicity s);

struct SemisimplicityReport {
  Semisimplicity verdict = Semisimplicity::Inconclusive;
  std::string method;
  std::string detail;
  std::optional<QHElement> nilpotent;  // NotSemisimple witness
  std::optional<QHElement> generator;  // X of a K[X]/(X^m - c) presentation
  std::optional<NovikovScalar> power_constant;
  std::size_t field_summands = 0;
};

/// Decides semisimplicity of QH_{2n}. Over Qmodel via the trace form; over F2
/// via a supplied idempotent decomposition or the X^m - c criterion; a
/// nilpotent basis element settles the negative case over either field.
SemisimplicityReport is_semisimple(const QuantumAlgebra& alg,
                                   const std::vector<QHElement>& idempotents = {});

/// Some x with c * x = a, or nullopt. c must be homogeneous.
std::optional<QHElement> divide(const QuantumAlgebra& alg, const QHElement& c, const QHElement& a);

/// Tensor-product algebra on the basis b_i ⊗ b'_j (lexicographic order) over
/// K_{Γ₁+Γ₂}, with the Koszul sign (-1)^{|b_j||b'_i|} in Qmodel.
QuantumAlgebra kunneth(const QuantumAlgebra& a, const QuantumAlgebra& b);

/// deg S > dim L + 1 - N_L; N_L absent means infinity.
bool albers_check(int dim_l, std::optional<int> n_l, int deg_s);

/// m > β_Y + 1: too many disjoint Lagrangians for a semisimple QH.
bool semisimplicity_obstruction(int m, int beta_y);

/// Parses "1/2*[M] + 1/2*s^(2)*q^(2)*[p]"; a factor may also be a
/// parenthesized Novikov scalar such as "(1*s^(1))/(1*s^(0) + 1*s^(-1))".
QHElement parse_qh_element(const QuantumAlgebra& alg, std::string_view text);
std::string to_string(const QuantumAlgebra& alg, const QHElement& x);

/// Built-in algebras: "cp1".."cp4" (either field), "s2" and "quadric"
/// (Qmodel), "t2" (F2, classical), "dual" (Qmodel, x*x = 0).
/// kappa overrides the default monotonicity constant.
QuantumAlgebra builtin_algebra(std::string_view name, BaseField field,
                               std::optional<Rational> kappa = std::nullopt);
std::vector<std::string> builtin_algebra_names();

}  // namespace rigidkit
