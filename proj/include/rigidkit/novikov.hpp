#pragma once

// Exact arithmetic in the Novikov field K_Γ and the ring Λ_Γ = K_Γ[q, q^-1].
//
// An element of K_Γ is stored as a reduced fraction p/r of finite formal sums
// Σ z_θ s^θ with rational exponents. The fraction field of the group algebra
// embeds in K_Γ by expanding 1/r as a descending series, so every computation
// below is exact and never materializes an infinite series.
//
// Canonical form: gcd(p, r) = 1 in the Laurent ring, r has leading (top
// exponent) term 1·s^0. Two scalars are equal iff their canonical forms are.

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "rigidkit/rational.hpp"

namespace rigidkit {

enum class BaseField { F2, Qmodel };

std::string to_string(BaseField field);
BaseField parse_base_field(std::string_view name);

/// Γ = generator·ℤ, with generator 0 encoding the trivial group.
class PeriodGroup {
 public:
  PeriodGroup() = default;
  explicit PeriodGroup(Rational generator);

  const Rational& generator() const { return generator_; }
  bool is_trivial() const { return generator_ == 0; }
  bool contains(const Rational& theta) const;

  friend bool operator==(const PeriodGroup& a, const PeriodGroup& b) {
    return a.generator_ == b.generator_;
  }

 private:
  Rational generator_ = 0;
};

/// Γ₁ + Γ₂; every finitely generated subgroup of ℚ is cyclic.
PeriodGroup group_sum(const PeriodGroup& a, const PeriodGroup& b);

struct Monomial {
  Rational exponent;
  Rational coeff;
  friend bool operator==(const Monomial&, const Monomial&) = default;
};

/// Finite formal sum Σ z_θ s^θ, terms sorted by strictly decreasing exponent,
/// no zero coefficients.
class LaurentSum {
 public:
  LaurentSum() = default;
  static LaurentSum monomial(BaseField field, const Rational& coeff, const Rational& exponent);

  bool is_zero() const { return terms_.empty(); }
  const std::vector<Monomial>& terms() const { return terms_; }
  const Monomial& lead() const { return terms_.front(); }

  /// Builds from arbitrary terms: merges equal exponents, drops zeros.
  static LaurentSum from_terms(BaseField field, std::vector<Monomial> terms);

  friend bool operator==(const LaurentSum&, const LaurentSum&) = default;

 private:
  std::vector<Monomial> terms_;
};

class NovikovScalar {
 public:
  /// Zero of the given base field.
  explicit NovikovScalar(BaseField field = BaseField::Qmodel) : field_(field) { den_ = one_sum(); }

  static NovikovScalar zero(BaseField field) { return NovikovScalar(field); }
  static NovikovScalar one(BaseField field) { return constant(field, 1); }
  static NovikovScalar constant(BaseField field, const Rational& c);
  /// c·s^θ
  static NovikovScalar monomial(BaseField field, const Rational& c, const Rational& theta);
  static NovikovScalar fraction(BaseField field, LaurentSum num, LaurentSum den);

  BaseField field() const { return field_; }
  const LaurentSum& numerator() const { return num_; }
  const LaurentSum& denominator() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const;
  /// True when the denominator is 1 (a finite formal sum).
  bool is_laurent() const;
  bool is_monomial() const { return is_laurent() && num_.terms().size() == 1; }

  /// All exponents of numerator and denominator lie in gamma.
  bool exponents_in(const PeriodGroup& gamma) const;

  NovikovScalar operator-() const;
  NovikovScalar& operator+=(const NovikovScalar& o);
  NovikovScalar& operator-=(const NovikovScalar& o);
  NovikovScalar& operator*=(const NovikovScalar& o);
  NovikovScalar& operator/=(const NovikovScalar& o);
  friend NovikovScalar operator+(NovikovScalar a, const NovikovScalar& b) { return a += b; }
  friend NovikovScalar operator-(NovikovScalar a, const NovikovScalar& b) { return a -= b; }
  friend NovikovScalar operator*(NovikovScalar a, const NovikovScalar& b) { return a *= b; }
  friend NovikovScalar operator/(NovikovScalar a, const NovikovScalar& b) { return a /= b; }
  NovikovScalar inverse() const;

  /// Multiplies by c·s^θ without a gcd pass.
  NovikovScalar scaled(const Rational& c, const Rational& theta) const;

  friend bool operator==(const NovikovScalar& a, const NovikovScalar& b) {
    return a.field_ == b.field_ && a.num_ == b.num_ && a.den_ == b.den_;
  }

 private:
  static LaurentSum one_sum();
  void normalize();

  BaseField field_;
  LaurentSum num_;
  LaurentSum den_;
};

/// ν(Σ z_θ s^θ) = max{θ | z_θ ≠ 0}; ν(0) = -∞; ν(p/r) = ν(p) - ν(r).
ExtRational valuation(const NovikovScalar& x);

/// Top `depth` terms of the descending series expansion of x.
std::vector<Monomial> truncated_series(const NovikovScalar& x, std::size_t depth = 10);

/// Coefficient of s^0 in the series expansion (the map τ: K → F).
Rational free_term(const NovikovScalar& x);

/// Coefficient of the top term of the series expansion (0 for x = 0).
Rational leading_coefficient(const NovikovScalar& x);

/// Text form, e.g. "1*s^(3) + 1*s^(1)" or "(1*s^(1))/(1*s^(0) - 1*s^(-1))".
std::string to_string(const NovikovScalar& x);
NovikovScalar parse_scalar(BaseField field, std::string_view text);

/// Element of Λ_Γ: finitely many q-powers with K_Γ coefficients; deg q = 2.
class LambdaElement {
 public:
  explicit LambdaElement(BaseField field = BaseField::Qmodel) : field_(field) {}
  static LambdaElement term(const NovikovScalar& c, int qpow);

  BaseField field() const { return field_; }
  const std::map<int, NovikovScalar>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// Coefficient of q^k (zero if absent).
  NovikovScalar coeff(int k) const;
  void add_term(int k, const NovikovScalar& c);

  LambdaElement operator-() const;
  LambdaElement& operator+=(const LambdaElement& o);
  LambdaElement& operator-=(const LambdaElement& o);
  friend LambdaElement operator+(LambdaElement a, const LambdaElement& b) { return a += b; }
  friend LambdaElement operator-(LambdaElement a, const LambdaElement& b) { return a -= b; }
  friend LambdaElement operator*(const LambdaElement& a, const LambdaElement& b);
  LambdaElement operator*(const NovikovScalar& c) const;

  friend bool operator==(const LambdaElement& a, const LambdaElement& b) {
    return a.field_ == b.field_ && a.terms_ == b.terms_;
  }

 private:
  BaseField field_;
  std::map<int, NovikovScalar> terms_;
};

/// ν(λ) = max over q-terms of the valuation of their coefficients.
ExtRational valuation(const LambdaElement& x);

}  // namespace rigidkit
