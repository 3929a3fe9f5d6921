#include "rigidkit/quantum_algebra.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <stdexcept>

namespace rigidkit {

std::optional<std::size_t> GradedBasis::find(std::string_view label) const {
  for (std::size_t i = 0; i < classes.size(); ++i) {
    if (classes[i].label == label) return i;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------- elements

QHElement QHElement::zero(BaseField field, std::size_t rank) {
  return QHElement{std::vector<LambdaElement>(rank, LambdaElement(field))};
}

QHElement QHElement::basis(BaseField field, std::size_t rank, std::size_t i) {
  auto x = zero(field, rank);
  x.coeffs.at(i) = LambdaElement::term(NovikovScalar::one(field), 0);
  return x;
}

bool QHElement::is_zero() const {
  return std::all_of(coeffs.begin(), coeffs.end(), [](const auto& c) { return c.is_zero(); });
}

QHElement& QHElement::operator+=(const QHElement& o) {
  if (o.coeffs.size() != coeffs.size()) throw std::invalid_argument("QH elements of different rank");
  for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] += o.coeffs[i];
  return *this;
}

QHElement& QHElement::operator-=(const QHElement& o) { return *this += -o; }

QHElement QHElement::operator-() const {
  QHElement out = *this;
  for (auto& c : out.coeffs) c = -c;
  return out;
}

QHElement operator*(const LambdaElement& c, const QHElement& x) {
  QHElement out = x;
  for (auto& v : out.coeffs) v = c * v;
  return out;
}

QHElement operator*(const NovikovScalar& c, const QHElement& x) {
  QHElement out = x;
  for (auto& v : out.coeffs) v = v * c;
  return out;
}

// ---------------------------------------------------------------- algebra

namespace {

bool odd(int d) { return d % 2 != 0; }

/// Sign of b_j * b_i relative to b_i * b_j.
int graded_sign(BaseField field, int di, int dj) {
  if (field == BaseField::F2) return 1;
  return odd(di) && odd(dj) ? -1 : 1;
}

QHElement signed_copy(const QHElement& x, int sign) {
  return sign > 0 ? x : -x;
}

}  // namespace

QuantumAlgebra::QuantumAlgebra(BaseField field, GradedBasis basis, PeriodGroup gamma, std::vector<Entry> entries,
                               std::optional<Rational> kappa)
    : field_(field), basis_(std::move(basis)), gamma_(std::move(gamma)), kappa_(std::move(kappa)) {
  const std::size_t r = basis_.size();
  const int top = basis_.dimension_2n;
  if (r == 0) throw std::invalid_argument("graded basis is empty");
  if (top < 0 || odd(top)) throw std::invalid_argument("dimension_2n must be a non-negative even integer");
  if (basis_.unity >= r || basis_.point >= r) throw std::invalid_argument("unity/point index out of range");
  std::size_t tops = 0, bottoms = 0;
  std::set<std::string> labels;
  for (const auto& c : basis_.classes) {
    if (c.degree < 0 || c.degree > top) {
      throw std::invalid_argument("class '" + c.label + "' has degree outside [0, 2n]");
    }
    if (!labels.insert(c.label).second) throw std::invalid_argument("duplicate class label '" + c.label + "'");
    tops += c.degree == top;
    bottoms += c.degree == 0;
  }
  if (top > 0 && (tops != 1 || bottoms != 1)) {
    throw std::invalid_argument("basis must have exactly one class of degree 2n and one of degree 0");
  }
  if (basis_.classes[basis_.unity].degree != top) throw std::invalid_argument("unity class must have degree 2n");
  if (basis_.classes[basis_.point].degree != 0) throw std::invalid_argument("point class must have degree 0");
  if (kappa_ && *kappa_ <= 0) throw std::invalid_argument("kappa must be positive");

  std::vector<std::vector<std::optional<QHElement>>> given(r, std::vector<std::optional<QHElement>>(r));
  for (auto& e : entries) {
    if (e.i >= r || e.j >= r) throw std::invalid_argument("table index out of range");
    if (e.product.coeffs.size() != r) throw std::invalid_argument("table entry has wrong rank");
    for (const auto& lam : e.product.coeffs) {
      if (lam.field() != field_) throw std::invalid_argument("table scalar has wrong base field");
      for (const auto& [k, c] : lam.terms()) {
        if (!c.exponents_in(gamma_)) {
          throw std::invalid_argument("table scalar " + to_string(c) + " has exponents outside Γ");
        }
      }
    }
    if (given[e.i][e.j]) throw std::invalid_argument("duplicate table entry");
    given[e.i][e.j] = std::move(e.product);
  }
  table_.assign(r, std::vector<QHElement>(r, QHElement::zero(field_, r)));
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < r; ++j) {
      int sign = graded_sign(field_, basis_.classes[i].degree, basis_.classes[j].degree);
      if (given[i][j]) {
        table_[i][j] = *given[i][j];
      } else if (given[j][i]) {
        table_[i][j] = signed_copy(*given[j][i], sign);
      } else if (i == basis_.unity) {
        table_[i][j] = element(j);
      } else if (j == basis_.unity) {
        table_[i][j] = element(i);
      }
    }
  }
  for (std::size_t i = 0; i < r; ++i) {
    if (!odd(basis_.classes[i].degree)) top_.push_back(i);
  }
}

std::vector<QuantumAlgebra::Entry> QuantumAlgebra::entries() const {
  std::vector<Entry> out;
  for (std::size_t i = 0; i < rank(); ++i) {
    for (std::size_t j = i; j < rank(); ++j) {
      if (!table_[i][j].is_zero()) out.push_back({i, j, table_[i][j]});
    }
  }
  return out;
}

bool operator==(const QuantumAlgebra& a, const QuantumAlgebra& b) {
  if (a.field() != b.field() || !(a.basis() == b.basis()) || !(a.gamma() == b.gamma()) || a.kappa() != b.kappa()) {
    return false;
  }
  for (std::size_t i = 0; i < a.rank(); ++i) {
    for (std::size_t j = 0; j < a.rank(); ++j) {
      if (!(a.product(i, j) == b.product(i, j))) return false;
    }
  }
  return true;
}

QHElement qprod(const QuantumAlgebra& alg, const QHElement& x, const QHElement& y) {
  if (x.coeffs.size() != alg.rank() || y.coeffs.size() != alg.rank()) {
    throw std::invalid_argument("qprod: element rank does not match the algebra");
  }
  auto out = QHElement::zero(alg.field(), alg.rank());
  for (std::size_t i = 0; i < alg.rank(); ++i) {
    if (x.coeffs[i].is_zero()) continue;
    for (std::size_t j = 0; j < alg.rank(); ++j) {
      if (y.coeffs[j].is_zero()) continue;
      const auto& bij = alg.product(i, j);
      if (bij.is_zero()) continue;
      out += (x.coeffs[i] * y.coeffs[j]) * bij;
    }
  }
  return out;
}

std::optional<int> homogeneous_degree(const QuantumAlgebra& alg, const QHElement& x) {
  std::optional<int> deg;
  for (std::size_t i = 0; i < x.coeffs.size(); ++i) {
    for (const auto& [k, c] : x.coeffs[i].terms()) {
      int d = alg.basis().classes[i].degree + 2 * k;
      if (deg && *deg != d) return std::nullopt;
      deg = d;
    }
  }
  return deg;
}

std::vector<AxiomViolation> check_axioms(const QuantumAlgebra& alg) {
  std::vector<AxiomViolation> out;
  const auto& cls = alg.basis().classes;
  const std::size_t r = alg.rank();
  for (std::size_t i = 0; i < r; ++i) {
    if (!(alg.product(alg.basis().unity, i) == alg.element(i))) {
      out.push_back({"unity", "[M] * " + cls[i].label + " != " + cls[i].label});
    }
  }
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = i + 1; j < r; ++j) {
      int sign = graded_sign(alg.field(), cls[i].degree, cls[j].degree);
      if (!(alg.product(i, j) == signed_copy(alg.product(j, i), sign))) {
        out.push_back({"commutativity", cls[i].label + " * " + cls[j].label});
      }
    }
  }
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < r; ++j) {
      int expected = cls[i].degree + cls[j].degree - alg.basis().dimension_2n;
      const auto& p = alg.product(i, j);
      for (std::size_t k = 0; k < r; ++k) {
        for (const auto& [qpow, c] : p.coeffs[k].terms()) {
          if (cls[k].degree + 2 * qpow != expected) {
            out.push_back({"grading", cls[i].label + " * " + cls[j].label + " has a term q^" + std::to_string(qpow) +
                                          " " + cls[k].label + " of degree " +
                                          std::to_string(cls[k].degree + 2 * qpow) + ", expected " +
                                          std::to_string(expected)});
          }
        }
      }
    }
  }
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < r; ++j) {
      auto ij = alg.product(i, j);
      for (std::size_t k = 0; k < r; ++k) {
        auto left = qprod(alg, ij, alg.element(k));
        auto right = qprod(alg, alg.element(i), alg.product(j, k));
        if (!(left == right)) {
          out.push_back({"associativity", "(" + cls[i].label + " * " + cls[j].label + ") * " + cls[k].label});
        }
      }
    }
  }
  return out;
}

bool is_idempotent(const QuantumAlgebra& alg, const QHElement& x) { return qprod(alg, x, x) == x; }

NovikovScalar omega_pairing(const QuantumAlgebra& alg, const QHElement& x, const QHElement& y) {
  return qprod(alg, x, y).coeffs[alg.basis().point].coeff(0);
}

Rational frobenius(const QuantumAlgebra& alg, const QHElement& x, const QHElement& y) {
  return free_term(omega_pairing(alg, x, y));
}

ExactMatrix<NovikovScalar> frobenius_gram(const QuantumAlgebra& alg) {
  ExactMatrix<NovikovScalar> g(alg.rank(), alg.rank(), NovikovScalar::zero(alg.field()));
  for (std::size_t i = 0; i < alg.rank(); ++i) {
    for (std::size_t j = 0; j < alg.rank(); ++j) g(i, j) = alg.product(i, j).coeffs[alg.basis().point].coeff(0);
  }
  return g;
}

// ---------------------------------------------------------------- graded pieces

namespace {

/// Classes contributing to the degree-D piece, with their q-power.
std::vector<std::pair<std::size_t, int>> piece(const QuantumAlgebra& alg, int degree) {
  std::vector<std::pair<std::size_t, int>> out;
  for (std::size_t i = 0; i < alg.rank(); ++i) {
    int diff = degree - alg.basis().classes[i].degree;
    if (!odd(diff)) out.emplace_back(i, diff / 2);
  }
  return out;
}

std::optional<KVector> to_piece(const QuantumAlgebra& alg, const QHElement& x, int degree) {
  auto cls = piece(alg, degree);
  std::vector<int> slot(alg.rank(), -1);
  for (std::size_t a = 0; a < cls.size(); ++a) slot[cls[a].first] = static_cast<int>(a);
  KVector v(cls.size(), NovikovScalar::zero(alg.field()));
  for (std::size_t i = 0; i < alg.rank(); ++i) {
    for (const auto& [k, c] : x.coeffs[i].terms()) {
      if (slot[i] < 0 || cls[slot[i]].second != k) return std::nullopt;
      v[slot[i]] = c;
    }
  }
  return v;
}

QHElement from_piece(const QuantumAlgebra& alg, const KVector& v, int degree) {
  auto cls = piece(alg, degree);
  auto x = QHElement::zero(alg.field(), alg.rank());
  for (std::size_t a = 0; a < cls.size(); ++a) x.coeffs[cls[a].first].add_term(cls[a].second, v[a]);
  return x;
}

/// K-algebra QH_{2n}: structure constants mult[i][j] = e_i * e_j in coordinates.
struct TopAlgebra {
  BaseField field;
  std::size_t dim = 0;
  std::vector<std::vector<KVector>> mult;
  KVector unity;

  NovikovScalar zero() const { return NovikovScalar::zero(field); }

  KVector prod(const KVector& x, const KVector& y) const {
    KVector out(dim, zero());
    for (std::size_t i = 0; i < dim; ++i) {
      if (x[i].is_zero()) continue;
      for (std::size_t j = 0; j < dim; ++j) {
        if (y[j].is_zero()) continue;
        NovikovScalar c = x[i] * y[j];
        for (std::size_t k = 0; k < dim; ++k) {
          if (!mult[i][j][k].is_zero()) out[k] += c * mult[i][j][k];
        }
      }
    }
    return out;
  }

  bool is_zero(const KVector& v) const {
    return std::all_of(v.begin(), v.end(), [](const auto& c) { return c.is_zero(); });
  }

  KVector basis(std::size_t i) const {
    KVector v(dim, zero());
    v[i] = NovikovScalar::one(field);
    return v;
  }

  /// Matrix of y ↦ x*y.
  ExactMatrix<NovikovScalar> left_mult(const KVector& x) const {
    std::vector<KVector> cols;
    for (std::size_t j = 0; j < dim; ++j) cols.push_back(prod(x, basis(j)));
    return ExactMatrix<NovikovScalar>::from_columns(cols, zero());
  }
};

TopAlgebra top_algebra(const QuantumAlgebra& alg) {
  const int top = alg.basis().dimension_2n;
  TopAlgebra t{alg.field(), alg.top_classes().size(), {}, {}};
  std::vector<QHElement> e;
  for (auto [i, k] : piece(alg, top)) e.push_back(LambdaElement::term(NovikovScalar::one(alg.field()), k) * alg.element(i));
  t.mult.assign(t.dim, std::vector<KVector>(t.dim));
  for (std::size_t i = 0; i < t.dim; ++i) {
    for (std::size_t j = 0; j < t.dim; ++j) {
      auto v = to_piece(alg, qprod(alg, e[i], e[j]), top);
      if (!v) throw std::logic_error("product of degree-2n elements left QH_{2n}; grading violated");
      t.mult[i][j] = std::move(*v);
    }
  }
  t.unity = *to_piece(alg, alg.unity(), top);
  return t;
}

bool is_nilpotent(const TopAlgebra& t, const KVector& x) {
  if (t.is_zero(x)) return false;
  KVector p = x;
  for (std::size_t k = 0; k <= t.dim; ++k) {
    p = t.prod(p, x);
    if (t.is_zero(p)) return true;
  }
  return false;
}

std::vector<unsigned> prime_divisors(std::size_t m) {
  std::vector<unsigned> out;
  for (unsigned p = 2; p * p <= m; ++p) {
    if (m % p) continue;
    out.push_back(p);
    while (m % p == 0) m /= p;
  }
  if (m > 1) out.push_back(static_cast<unsigned>(m));
  return out;
}

/// ν(c)/g is an integer not divisible by p, so c is not a p-th power in K_Γ.
bool valuation_blocks_roots(const NovikovScalar& c, const PeriodGroup& gamma, const std::vector<unsigned>& primes) {
  auto nu = valuation(c);
  if (!nu.is_finite() || gamma.is_trivial()) return false;
  Rational ratio = nu.value() / gamma.generator();
  if (!is_integer(ratio)) return false;
  Integer n = ratio.get_num();
  for (unsigned p : primes) {
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return false;
  }
  return true;
}

struct PowerPresentation {
  KVector generator;
  NovikovScalar constant;
};

/// Looks for X in the summand e·A (dimension m) with e, X, ..., X^{m-1}
/// independent and X^m = c·e, c not a p-th power for primes p | m. By the
/// irreducibility criterion for X^m - c the summand is then a field.
std::optional<PowerPresentation> power_presentation(const TopAlgebra& t, const KVector& e, std::size_t m,
                                                    const PeriodGroup& gamma) {
  auto primes = prime_divisors(m);
  std::size_t anchor = 0;
  while (anchor < t.dim && e[anchor].is_zero()) ++anchor;
  // Later classes first: for degree-ordered bases this tries the hyperplane-type generator early.
  for (std::size_t j = t.dim; j-- > 0;) {
    KVector x = t.prod(e, t.basis(j));
    if (t.is_zero(x)) continue;
    std::vector<KVector> powers{e};
    for (std::size_t k = 1; k <= m; ++k) powers.push_back(t.prod(powers.back(), x));
    std::vector<KVector> span(powers.begin(), powers.begin() + static_cast<long>(m));
    if (rank(ExactMatrix<NovikovScalar>::from_columns(span, t.zero())) != m) continue;
    const KVector& top = powers[m];
    NovikovScalar c = top[anchor] / e[anchor];
    bool multiple = true;
    for (std::size_t i = 0; i < t.dim && multiple; ++i) multiple = top[i] == c * e[i];
    if (!multiple) continue;
    if (m == 1 || valuation_blocks_roots(c, gamma, primes)) return PowerPresentation{x, c};
  }
  return std::nullopt;
}

struct DecompositionCheck {
  bool ok = false;
  std::string detail;
};

DecompositionCheck check_decomposition(const QuantumAlgebra& alg, const TopAlgebra& t,
                                       const std::vector<QHElement>& idempotents) {
  std::vector<KVector> es;
  for (const auto& x : idempotents) {
    auto v = to_top_degree(alg, x);
    if (!v) return {false, "idempotent " + to_string(alg, x) + " is not in QH_{2n}"};
    if (t.is_zero(*v)) return {false, "zero idempotent supplied"};
    if (!(t.prod(*v, *v) == *v)) return {false, to_string(alg, x) + " is not idempotent"};
    es.push_back(std::move(*v));
  }
  KVector sum(t.dim, t.zero());
  for (std::size_t a = 0; a < es.size(); ++a) {
    for (std::size_t i = 0; i < t.dim; ++i) sum[i] += es[a][i];
    for (std::size_t b = a + 1; b < es.size(); ++b) {
      if (!t.is_zero(t.prod(es[a], es[b]))) return {false, "idempotents " + std::to_string(a) + ", " + std::to_string(b) + " are not orthogonal"};
    }
  }
  if (!(sum == t.unity)) return {false, "idempotents do not sum to [M]"};
  for (std::size_t a = 0; a < es.size(); ++a) {
    std::size_t m = rank(t.left_mult(es[a]));
    if (m == 1) continue;
    if (!power_presentation(t, es[a], m, alg.gamma())) {
      return {false, "summand " + std::to_string(a) + " (dimension " + std::to_string(m) +
                         ") has no certified X^m - c presentation"};
    }
  }
  return {true, std::to_string(es.size()) + " orthogonal idempotents, each summand a field"};
}

}  // namespace

std::optional<KVector> to_top_degree(const QuantumAlgebra& alg, const QHElement& x) {
  return to_piece(alg, x, alg.basis().dimension_2n);
}

QHElement from_top_degree(const QuantumAlgebra& alg, const KVector& v) {
  return from_piece(alg, v, alg.basis().dimension_2n);
}

std::string to_string(Semisimplicity s) {
  switch (s) {
    case Semisimplicity::Semisimple: return "Semisimple";
    case Semisimplicity::NotSemisimple: return "NotSemisimple";
    case Semisimplicity::Inconclusive: return "Inconclusive";
  }
  return "?";
}

SemisimplicityReport is_semisimple(const QuantumAlgebra& alg, const std::vector<QHElement>& idempotents) {
  TopAlgebra t = top_algebra(alg);
  SemisimplicityReport rep;

  std::optional<DecompositionCheck> decomposition;
  if (!idempotents.empty()) decomposition = check_decomposition(alg, t, idempotents);

  if (alg.field() == BaseField::Qmodel) {
    // Trace form T(x, y) = tr L_{xy}; its radical is the nilradical in characteristic zero.
    KVector traces;
    for (std::size_t k = 0; k < t.dim; ++k) {
      NovikovScalar tr = t.zero();
      for (std::size_t l = 0; l < t.dim; ++l) tr += t.mult[k][l][l];
      traces.push_back(tr);
    }
    ExactMatrix<NovikovScalar> form(t.dim, t.dim, t.zero());
    for (std::size_t i = 0; i < t.dim; ++i) {
      for (std::size_t j = 0; j < t.dim; ++j) {
        for (std::size_t k = 0; k < t.dim; ++k) {
          if (!t.mult[i][j][k].is_zero() && !traces[k].is_zero()) form(i, j) += t.mult[i][j][k] * traces[k];
        }
      }
    }
    auto kernel = nullspace(form, t.zero());
    rep.method = "trace-form";
    if (kernel.empty()) {
      rep.verdict = Semisimplicity::Semisimple;
      rep.detail = "trace form nondegenerate (rank " + std::to_string(t.dim) + ")";
      if (decomposition) {
        rep.detail += decomposition->ok ? "; decomposition verified: " + decomposition->detail
                                        : "; supplied decomposition rejected: " + decomposition->detail;
        if (decomposition->ok) rep.field_summands = idempotents.size();
      }
      return rep;
    }
    for (const auto& v : kernel) {
      if (is_nilpotent(t, v)) {
        rep.verdict = Semisimplicity::NotSemisimple;
        rep.nilpotent = from_top_degree(alg, v);
        rep.detail = "trace form has a " + std::to_string(kernel.size()) + "-dimensional radical";
        return rep;
      }
    }
    rep.verdict = Semisimplicity::Inconclusive;
    rep.detail = "trace-form radical without a verified nilpotent";
    return rep;
  }

  if (decomposition && decomposition->ok) {
    rep.verdict = Semisimplicity::Semisimple;
    rep.method = "idempotent-decomposition";
    rep.detail = decomposition->detail;
    rep.field_summands = idempotents.size();
    return rep;
  }
  if (auto pres = power_presentation(t, t.unity, t.dim, alg.gamma())) {
    rep.verdict = Semisimplicity::Semisimple;
    rep.method = "power-irreducibility";
    rep.generator = from_top_degree(alg, pres->generator);
    rep.power_constant = pres->constant;
    rep.field_summands = 1;
    rep.detail = "QH_{2n} = K[X]/(X^" + std::to_string(t.dim) + " - c), c = " + to_string(pres->constant) +
                 " not a p-th power; the algebra is a field";
    return rep;
  }
  std::vector<KVector> candidates;
  for (std::size_t i = 0; i < t.dim; ++i) candidates.push_back(t.basis(i));
  for (std::size_t i = 0; i < t.dim; ++i) {
    for (std::size_t j = i + 1; j < t.dim; ++j) {
      KVector v = t.basis(i);
      v[j] = NovikovScalar::one(t.field);
      candidates.push_back(std::move(v));
    }
  }
  for (const auto& v : candidates) {
    if (is_nilpotent(t, v)) {
      rep.verdict = Semisimplicity::NotSemisimple;
      rep.method = "nilpotent-search";
      rep.nilpotent = from_top_degree(alg, v);
      rep.detail = "nilpotent element found";
      return rep;
    }
  }
  rep.method = "none";
  rep.detail = decomposition ? "supplied decomposition rejected: " + decomposition->detail
                             : "no certificate over F2 (trace form is unsound in characteristic 2)";
  return rep;
}

std::optional<QHElement> divide(const QuantumAlgebra& alg, const QHElement& c, const QHElement& a) {
  const auto zero = NovikovScalar::zero(alg.field());
  if (c.is_zero()) {
    if (a.is_zero()) return QHElement::zero(alg.field(), alg.rank());
    return std::nullopt;
  }
  auto dc = homogeneous_degree(alg, c);
  if (!dc) throw std::invalid_argument("divide: divisor must be homogeneous");
  std::map<int, QHElement> components;
  for (std::size_t i = 0; i < alg.rank(); ++i) {
    for (const auto& [k, v] : a.coeffs[i].terms()) {
      int d = alg.basis().classes[i].degree + 2 * k;
      auto [it, fresh] = components.try_emplace(d, QHElement::zero(alg.field(), alg.rank()));
      it->second.coeffs[i].add_term(k, v);
    }
  }
  auto x = QHElement::zero(alg.field(), alg.rank());
  const int top = alg.basis().dimension_2n;
  for (const auto& [da, part] : components) {
    int dx = da - *dc + top;
    auto domain = piece(alg, dx);
    auto target = *to_piece(alg, part, da);
    std::vector<KVector> cols;
    for (auto [i, k] : domain) {
      auto img = qprod(alg, c, LambdaElement::term(NovikovScalar::one(alg.field()), k) * alg.element(i));
      cols.push_back(*to_piece(alg, img, da));
    }
    if (cols.empty()) return std::nullopt;
    auto m = ExactMatrix<NovikovScalar>::from_columns(cols, zero);
    auto sol = solve(m, target, zero);
    if (!sol) return std::nullopt;
    x += from_piece(alg, *sol, dx);
  }
  return x;
}

QuantumAlgebra kunneth(const QuantumAlgebra& a, const QuantumAlgebra& b) {
  if (a.field() != b.field()) throw std::invalid_argument("kunneth: base fields differ");
  const std::size_t ra = a.rank(), rb = b.rank();
  GradedBasis basis;
  basis.dimension_2n = a.basis().dimension_2n + b.basis().dimension_2n;
  for (const auto& ca : a.basis().classes) {
    for (const auto& cb : b.basis().classes) basis.classes.push_back({ca.label + "x" + cb.label, ca.degree + cb.degree});
  }
  basis.unity = a.basis().unity * rb + b.basis().unity;
  basis.point = a.basis().point * rb + b.basis().point;

  auto tensor = [&](const QHElement& x, const QHElement& y) {
    auto out = QHElement::zero(a.field(), ra * rb);
    for (std::size_t k = 0; k < ra; ++k) {
      if (x.coeffs[k].is_zero()) continue;
      for (std::size_t l = 0; l < rb; ++l) {
        if (!y.coeffs[l].is_zero()) out.coeffs[k * rb + l] = x.coeffs[k] * y.coeffs[l];
      }
    }
    return out;
  };

  std::vector<QuantumAlgebra::Entry> entries;
  for (std::size_t i1 = 0; i1 < ra; ++i1) {
    for (std::size_t i2 = 0; i2 < rb; ++i2) {
      for (std::size_t j1 = 0; j1 < ra; ++j1) {
        for (std::size_t j2 = 0; j2 < rb; ++j2) {
          int sign = graded_sign(a.field(), b.basis().classes[i2].degree, a.basis().classes[j1].degree);
          auto p = tensor(a.product(i1, j1), b.product(i2, j2));
          entries.push_back({i1 * rb + i2, j1 * rb + j2, signed_copy(p, sign)});
        }
      }
    }
  }
  std::optional<Rational> kappa;
  if (a.kappa() && b.kappa() && *a.kappa() == *b.kappa()) kappa = a.kappa();
  return QuantumAlgebra(a.field(), std::move(basis), group_sum(a.gamma(), b.gamma()), std::move(entries), kappa);
}

bool albers_check(int dim_l, std::optional<int> n_l, int deg_s) {
  if (n_l && *n_l < 2) throw std::invalid_argument("albers_check: N_L must be at least 2");
  if (!n_l) return true;
  return deg_s > dim_l + 1 - *n_l;
}

bool semisimplicity_obstruction(int m, int beta_y) {
  if (m < 1 || beta_y < 0) throw std::invalid_argument("semisimplicity_obstruction: need m >= 1, beta >= 0");
  return m > beta_y + 1;
}

// ---------------------------------------------------------------- text form

namespace {

class ElementParser {
 public:
  ElementParser(const QuantumAlgebra& alg, std::string_view text) : alg_(alg) {
    for (char c : text) {
      if (!std::isspace(static_cast<unsigned char>(c))) s_.push_back(c);
    }
  }

  QHElement parse() {
    auto out = QHElement::zero(alg_.field(), alg_.rank());
    if (s_.empty()) fail("empty expression");
    if (s_ == "0") return out;
    bool negative = false;
    if (peek() == '-' || peek() == '+') negative = s_[pos_++] == '-';
    out += term(negative);
    while (pos_ < s_.size()) {
      if (peek() != '+' && peek() != '-') fail("expected '+' or '-'");
      negative = s_[pos_++] == '-';
      out += term(negative);
    }
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("element parse error at offset " + std::to_string(pos_) + ": " + what + " in '" +
                                s_ + "'");
  }
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

  std::string signed_number() {
    std::size_t start = pos_;
    if (peek() == '-' || peek() == '+') ++pos_;
    while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (peek() == '/' && pos_ + 1 < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_ + 1]))) {
      ++pos_;
      while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    }
    if (start == pos_) fail("expected a number");
    return s_.substr(start, pos_ - start);
  }

  std::string exponent_text() {
    if (peek() != '^') return "1";
    ++pos_;
    if (peek() == '(') {
      std::size_t close = s_.find(')', pos_);
      if (close == std::string::npos) fail("unbalanced exponent");
      std::string inner = s_.substr(pos_ + 1, close - pos_ - 1);
      pos_ = close + 1;
      return inner;
    }
    return signed_number();
  }

  std::string group() {
    std::size_t start = pos_;
    int depth = 0;
    do {
      if (pos_ >= s_.size()) fail("unbalanced parentheses");
      if (s_[pos_] == '(') ++depth;
      if (s_[pos_] == ')') --depth;
      ++pos_;
    } while (depth > 0);
    return s_.substr(start, pos_ - start);
  }

  QHElement term(bool negative) {
    const BaseField f = alg_.field();
    NovikovScalar scalar = NovikovScalar::one(f);
    int qpow = 0;
    std::optional<std::size_t> cls;
    while (true) {
      char c = peek();
      if (c == '[') {
        std::size_t close = s_.find(']', pos_);
        if (close == std::string::npos) fail("unterminated class label");
        std::string label = s_.substr(pos_ + 1, close - pos_ - 1);
        auto idx = alg_.basis().find(label);
        if (!idx) fail("unknown class label '" + label + "'");
        if (cls) fail("two class labels in one term");
        cls = idx;
        pos_ = close + 1;
      } else if (c == 's') {
        ++pos_;
        scalar *= NovikovScalar::monomial(f, 1, parse_rational(exponent_text()));
      } else if (c == 'q') {
        ++pos_;
        Rational k = parse_rational(exponent_text());
        if (!is_integer(k)) fail("q-power must be an integer");
        qpow += static_cast<int>(k.get_num().get_si());
      } else if (c == '(') {
        std::string text = group();
        if (peek() == '/' && pos_ + 1 < s_.size() && s_[pos_ + 1] == '(') {
          ++pos_;
          text += "/" + group();
        }
        scalar *= parse_scalar(f, text);
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        Rational r = parse_rational(signed_number());
        if (f == BaseField::F2 && !is_integer(r)) fail("F2 coefficients must be integers");
        scalar *= NovikovScalar::constant(f, r);
      } else {
        fail("unexpected character");
      }
      if (peek() != '*') break;
      ++pos_;
    }
    if (!cls) fail("term without a class label");
    if (negative) scalar = -scalar;
    auto out = QHElement::zero(f, alg_.rank());
    out.coeffs[*cls].add_term(qpow, scalar);
    return out;
  }

  const QuantumAlgebra& alg_;
  std::string s_;
  std::size_t pos_ = 0;
};

}  // namespace

QHElement parse_qh_element(const QuantumAlgebra& alg, std::string_view text) {
  return ElementParser(alg, text).parse();
}

std::string to_string(const QuantumAlgebra& alg, const QHElement& x) {
  std::string out;
  for (std::size_t i = 0; i < x.coeffs.size(); ++i) {
    for (const auto& [k, c] : x.coeffs[i].terms()) {
      if (!out.empty()) out += " + ";
      out += "(" + to_string(c) + ")";
      if (k != 0) out += "*q^(" + std::to_string(k) + ")";
      out += "*[" + alg.basis().classes[i].label + "]";
    }
  }
  return out.empty() ? "0" : out;
}

// ---------------------------------------------------------------- built-ins

namespace {

QHElement term_element(BaseField f, std::size_t rank, std::size_t cls, const Rational& coeff, const Rational& theta,
                       int qpow) {
  auto x = QHElement::zero(f, rank);
  x.coeffs[cls].add_term(qpow, NovikovScalar::monomial(f, coeff, theta));
  return x;
}

QuantumAlgebra complex_projective(int n, BaseField f, const Rational& kappa) {
  // Classes P^i (i = 0..n) of degree 2i; P^n = [M], P^0 = point.
  GradedBasis basis;
  basis.dimension_2n = 2 * n;
  for (int i = 0; i <= n; ++i) {
    std::string label = i == n ? "M" : i == 0 ? "p" : "P" + std::to_string(i);
    basis.classes.push_back({label, 2 * i});
  }
  basis.unity = static_cast<std::size_t>(n);
  basis.point = 0;
  const std::size_t r = static_cast<std::size_t>(n) + 1;
  std::vector<QuantumAlgebra::Entry> entries;
  for (int i = 0; i <= n; ++i) {
    for (int j = i; j <= n; ++j) {
      QHElement prod = i + j >= n
                           ? term_element(f, r, static_cast<std::size_t>(i + j - n), 1, 0, 0)
                           : term_element(f, r, static_cast<std::size_t>(i + j + 1), 1, -kappa * (n + 1), -(n + 1));
      entries.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(j), prod});
    }
  }
  return QuantumAlgebra(f, basis, PeriodGroup(kappa * (n + 1)), entries, kappa);
}

QuantumAlgebra quadric(BaseField f, const Rational& kappa) {
  // Basis p, B = pt×[S²], A = [S²]×pt, [M] (the tensor order of S² ⊗ S²); w = s^{2κ} q².
  GradedBasis basis{{{"p", 0}, {"B", 2}, {"A", 2}, {"M", 4}}, 4, 3, 0};
  const Rational w = 2 * kappa;
  auto t = [&](std::size_t cls, const Rational& theta, int qpow) { return term_element(f, 4, cls, 1, theta, qpow); };
  const std::size_t P = 0, B = 1, A = 2, M = 3;
  std::vector<QuantumAlgebra::Entry> entries{
      {A, A, t(M, -w, -2)},      // A*A = w^{-1}[M]
      {B, B, t(M, -w, -2)},      // B*B = w^{-1}[M]
      {B, A, t(P, 0, 0)},        // A*B = p
      {P, A, t(B, -w, -2)},      // A*p = w^{-1}B
      {P, B, t(A, -w, -2)},      // B*p = w^{-1}A
      {P, P, t(M, -2 * w, -4)},  // p*p = w^{-2}[M]
  };
  return QuantumAlgebra(f, basis, PeriodGroup(w), entries, kappa);
}

}  // namespace

std::vector<std::string> builtin_algebra_names() { return {"cp1", "cp2", "cp3", "cp4", "s2", "quadric", "t2", "dual"}; }

QuantumAlgebra builtin_algebra(std::string_view name, BaseField field, std::optional<Rational> kappa) {
  if (name.size() == 3 && name.substr(0, 2) == "cp" && name[2] >= '1' && name[2] <= '4') {
    return complex_projective(name[2] - '0', field, kappa.value_or(1));
  }
  if (name == "s2") return complex_projective(1, field, kappa.value_or(Rational(1, 2)));
  if (name == "quadric") return quadric(field, kappa.value_or(Rational(1, 2)));
  if (name == "t2") {
    GradedBasis basis{{{"M", 2}, {"a", 1}, {"b", 1}, {"p", 0}}, 2, 0, 3};
    std::vector<QuantumAlgebra::Entry> entries{{1, 2, term_element(field, 4, 3, 1, 0, 0)}};
    if (field == BaseField::Qmodel) entries.push_back({2, 1, term_element(field, 4, 3, -1, 0, 0)});
    return QuantumAlgebra(field, basis, PeriodGroup(), entries, kappa);
  }
  if (name == "dual") {
    GradedBasis basis{{{"M", 2}, {"x", 0}}, 2, 0, 1};
    return QuantumAlgebra(field, basis, PeriodGroup(), {}, kappa);
  }
  throw std::invalid_argument("unknown built-in algebra '" + std::string(name) + "'");
}

}  // namespace rigidkit
