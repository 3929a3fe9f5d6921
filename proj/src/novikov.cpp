#include "rigidkit/novikov.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace rigidkit {

std::string to_string(BaseField field) { return field == BaseField::F2 ? "F2" : "Qmodel"; }

BaseField parse_base_field(std::string_view name) {
  if (name == "F2" || name == "Z2") return BaseField::F2;
  if (name == "Qmodel" || name == "Q") return BaseField::Qmodel;
  throw std::invalid_argument("unknown base field '" + std::string(name) + "'");
}

PeriodGroup::PeriodGroup(Rational generator) : generator_(abs(generator)) {}

bool PeriodGroup::contains(const Rational& theta) const {
  if (generator_ == 0) return theta == 0;
  return is_integer(Rational(theta / generator_));
}

PeriodGroup group_sum(const PeriodGroup& a, const PeriodGroup& b) {
  return PeriodGroup(rational_gcd(a.generator(), b.generator()));
}

namespace {

void reduce(BaseField field, Rational& c) {
  if (field == BaseField::Qmodel) return;
  if (!is_integer(c)) throw std::invalid_argument("F2 coefficient must be 0 or 1, got " + c.get_str());
  Integer r;
  mpz_fdiv_r_ui(r.get_mpz_t(), c.get_num_mpz_t(), 2);
  c = Rational(r);
}

Rational coeff_inverse(BaseField field, const Rational& c) {
  if (c == 0) throw std::domain_error("division by zero");
  if (field == BaseField::F2) return 1;
  return Rational(1 / c);
}

LaurentSum add(BaseField field, const LaurentSum& a, const LaurentSum& b, bool subtract) {
  std::vector<Monomial> out;
  out.reserve(a.terms().size() + b.terms().size());
  auto ia = a.terms().begin();
  auto ib = b.terms().begin();
  auto neg = [&](const Rational& c) {
    Rational r = subtract ? Rational(-c) : c;
    reduce(field, r);
    return r;
  };
  while (ia != a.terms().end() || ib != b.terms().end()) {
    if (ib == b.terms().end() || (ia != a.terms().end() && ia->exponent > ib->exponent)) {
      out.push_back(*ia++);
    } else if (ia == a.terms().end() || ib->exponent > ia->exponent) {
      out.push_back({ib->exponent, neg(ib->coeff)});
      ++ib;
    } else {
      Rational c = subtract ? Rational(ia->coeff - ib->coeff) : Rational(ia->coeff + ib->coeff);
      reduce(field, c);
      if (c != 0) out.push_back({ia->exponent, c});
      ++ia;
      ++ib;
    }
  }
  return LaurentSum::from_terms(field, std::move(out));
}

LaurentSum mul(BaseField field, const LaurentSum& a, const LaurentSum& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Monomial> out;
  out.reserve(a.terms().size() * b.terms().size());
  for (const auto& x : a.terms()) {
    for (const auto& y : b.terms()) {
      out.push_back({Rational(x.exponent + y.exponent), Rational(x.coeff * y.coeff)});
    }
  }
  return LaurentSum::from_terms(field, std::move(out));
}

LaurentSum mul_monomial(BaseField field, const LaurentSum& a, const Rational& c, const Rational& theta) {
  std::vector<Monomial> out;
  out.reserve(a.terms().size());
  for (const auto& x : a.terms()) {
    Rational v = x.coeff * c;
    reduce(field, v);
    if (v != 0) out.push_back({Rational(x.exponent + theta), v});
  }
  return LaurentSum::from_terms(field, std::move(out));
}

// Dense polynomial in t with t = s^(1/D), coefficient i ↔ t^i.
using Dense = std::vector<Rational>;

void trim(Dense& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

Integer exponent_lcm(const LaurentSum& a, const LaurentSum& b) {
  Integer d = 1;
  for (const auto* s : {&a, &b}) {
    for (const auto& m : s->terms()) {
      mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), m.exponent.get_den_mpz_t());
    }
  }
  return d;
}

Dense to_dense(const LaurentSum& a, const Integer& grid, Rational& shift) {
  shift = a.terms().back().exponent;
  Rational span = (a.lead().exponent - shift) * grid;
  Dense p(span.get_num().get_ui() + 1, Rational(0));
  for (const auto& m : a.terms()) {
    Rational idx = (m.exponent - shift) * grid;
    p[idx.get_num().get_ui()] = m.coeff;
  }
  return p;
}

LaurentSum from_dense(BaseField field, const Dense& p, const Integer& grid, const Rational& shift) {
  std::vector<Monomial> out;
  for (std::size_t i = p.size(); i-- > 0;) {
    if (p[i] != 0) out.push_back({Rational(shift + Rational(Integer(static_cast<unsigned long>(i)), grid)), p[i]});
  }
  return LaurentSum::from_terms(field, std::move(out));
}

// Remainder of a by b (b nonzero, trimmed).
Dense poly_rem(BaseField field, Dense a, const Dense& b) {
  Rational inv_lead = coeff_inverse(field, b.back());
  trim(a);
  while (a.size() >= b.size()) {
    Rational f = a.back() * inv_lead;
    reduce(field, f);
    std::size_t off = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) {
      a[off + i] -= f * b[i];
      reduce(field, a[off + i]);
    }
    a.back() = 0;
    trim(a);
  }
  return a;
}

Dense poly_exact_div(BaseField field, Dense a, const Dense& b) {
  trim(a);
  Rational inv_lead = coeff_inverse(field, b.back());
  Dense q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, Rational(0));
  while (a.size() >= b.size()) {
    Rational f = a.back() * inv_lead;
    reduce(field, f);
    std::size_t off = a.size() - b.size();
    q[off] = f;
    for (std::size_t i = 0; i < b.size(); ++i) {
      a[off + i] -= f * b[i];
      reduce(field, a[off + i]);
    }
    a.back() = 0;
    trim(a);
  }
  if (!a.empty()) throw std::logic_error("inexact polynomial division");
  return q;
}

Dense make_monic(BaseField field, Dense p) {
  Rational inv = coeff_inverse(field, p.back());
  for (auto& c : p) {
    c *= inv;
    reduce(field, c);
  }
  return p;
}

Dense poly_gcd(BaseField field, Dense a, Dense b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Dense r = poly_rem(field, a, b);
    a = std::move(b);
    b = r.empty() ? r : make_monic(field, std::move(r));
  }
  return make_monic(field, std::move(a));
}

}  // namespace

LaurentSum LaurentSum::monomial(BaseField field, const Rational& coeff, const Rational& exponent) {
  return from_terms(field, {{exponent, coeff}});
}

LaurentSum LaurentSum::from_terms(BaseField field, std::vector<Monomial> terms) {
  bool sorted = true;
  for (std::size_t i = 1; i < terms.size() && sorted; ++i) {
    sorted = terms[i - 1].exponent > terms[i].exponent;
  }
  if (!sorted) {
    std::sort(terms.begin(), terms.end(),
              [](const Monomial& a, const Monomial& b) { return a.exponent > b.exponent; });
  }
  LaurentSum out;
  out.terms_.reserve(terms.size());
  for (auto& m : terms) {
    m.exponent.canonicalize();
    if (!out.terms_.empty() && out.terms_.back().exponent == m.exponent) {
      out.terms_.back().coeff += m.coeff;
    } else {
      out.terms_.push_back(std::move(m));
    }
  }
  std::vector<Monomial> kept;
  kept.reserve(out.terms_.size());
  for (auto& m : out.terms_) {
    reduce(field, m.coeff);
    if (m.coeff != 0) kept.push_back(std::move(m));
  }
  out.terms_ = std::move(kept);
  return out;
}

LaurentSum NovikovScalar::one_sum() { return LaurentSum::monomial(BaseField::Qmodel, 1, 0); }

NovikovScalar NovikovScalar::constant(BaseField field, const Rational& c) { return monomial(field, c, 0); }

NovikovScalar NovikovScalar::monomial(BaseField field, const Rational& c, const Rational& theta) {
  NovikovScalar x(field);
  x.num_ = LaurentSum::monomial(field, c, theta);
  return x;
}

NovikovScalar NovikovScalar::fraction(BaseField field, LaurentSum num, LaurentSum den) {
  if (den.is_zero()) throw std::domain_error("zero denominator");
  NovikovScalar x(field);
  x.num_ = LaurentSum::from_terms(field, num.terms());
  x.den_ = LaurentSum::from_terms(field, den.terms());
  if (x.den_.is_zero()) throw std::domain_error("zero denominator");
  x.normalize();
  return x;
}

bool NovikovScalar::is_one() const { return is_laurent() && num_ == one_sum(); }

bool NovikovScalar::is_laurent() const {
  return den_.terms().size() == 1 && den_.lead().exponent == 0 && den_.lead().coeff == 1;
}

bool NovikovScalar::exponents_in(const PeriodGroup& gamma) const {
  for (const auto* s : {&num_, &den_}) {
    for (const auto& m : s->terms()) {
      if (!gamma.contains(m.exponent)) return false;
    }
  }
  return true;
}

void NovikovScalar::normalize() {
  if (num_.is_zero()) {
    den_ = one_sum();
    return;
  }
  if (den_.terms().size() == 1) {
    const Monomial m = den_.lead();
    num_ = mul_monomial(field_, num_, coeff_inverse(field_, m.coeff), Rational(-m.exponent));
    den_ = one_sum();
    return;
  }
  if (num_.terms().size() > 1) {
    Integer grid = exponent_lcm(num_, den_);
    Rational shift_num, shift_den;
    Dense pn = to_dense(num_, grid, shift_num);
    Dense pd = to_dense(den_, grid, shift_den);
    Dense g = poly_gcd(field_, pn, pd);
    if (g.size() > 1) {
      num_ = from_dense(field_, poly_exact_div(field_, pn, g), grid, shift_num);
      den_ = from_dense(field_, poly_exact_div(field_, pd, g), grid, shift_den);
    }
  }
  const Monomial lead = den_.lead();
  Rational inv = coeff_inverse(field_, lead.coeff);
  num_ = mul_monomial(field_, num_, inv, Rational(-lead.exponent));
  den_ = mul_monomial(field_, den_, inv, Rational(-lead.exponent));
}

NovikovScalar NovikovScalar::operator-() const {
  NovikovScalar x = *this;
  if (field_ == BaseField::Qmodel) x.num_ = mul_monomial(field_, num_, -1, 0);
  return x;
}

namespace {
void check_fields(const NovikovScalar& a, const NovikovScalar& b) {
  if (a.field() != b.field()) throw std::invalid_argument("base-field mismatch");
}
}  // namespace

NovikovScalar& NovikovScalar::operator+=(const NovikovScalar& o) {
  check_fields(*this, o);
  if (o.is_zero()) return *this;
  if (is_zero()) return *this = o;
  if (den_ == o.den_) {
    num_ = add(field_, num_, o.num_, false);
    if (!is_laurent()) normalize();
    else if (num_.is_zero()) den_ = one_sum();
    return *this;
  }
  num_ = add(field_, mul(field_, num_, o.den_), mul(field_, o.num_, den_), false);
  den_ = mul(field_, den_, o.den_);
  normalize();
  return *this;
}

NovikovScalar& NovikovScalar::operator-=(const NovikovScalar& o) {
  check_fields(*this, o);
  return *this += -o;
}

NovikovScalar& NovikovScalar::operator*=(const NovikovScalar& o) {
  check_fields(*this, o);
  if (is_zero() || o.is_zero()) return *this = zero(field_);
  if (o.is_monomial()) {
    num_ = mul_monomial(field_, num_, o.num_.lead().coeff, o.num_.lead().exponent);
    return *this;
  }
  if (is_monomial()) {
    Monomial m = num_.lead();
    *this = o;
    num_ = mul_monomial(field_, num_, m.coeff, m.exponent);
    return *this;
  }
  num_ = mul(field_, num_, o.num_);
  den_ = mul(field_, den_, o.den_);
  normalize();
  return *this;
}

NovikovScalar NovikovScalar::inverse() const {
  if (is_zero()) throw std::domain_error("division by zero");
  NovikovScalar x(field_);
  x.num_ = den_;
  x.den_ = num_;
  x.normalize();
  return x;
}

NovikovScalar& NovikovScalar::operator/=(const NovikovScalar& o) {
  check_fields(*this, o);
  if (o.is_zero()) throw std::domain_error("division by zero");
  return *this *= o.inverse();
}

NovikovScalar NovikovScalar::scaled(const Rational& c, const Rational& theta) const {
  NovikovScalar x = *this;
  x.num_ = mul_monomial(field_, num_, c, theta);
  if (x.num_.is_zero()) x.den_ = one_sum();
  return x;
}

ExtRational valuation(const NovikovScalar& x) {
  if (x.is_zero()) return ExtRational::neg_infinity();
  return ExtRational(Rational(x.numerator().lead().exponent - x.denominator().lead().exponent));
}

namespace {

// Long division from the top: yields successive series terms of num/den.
class SeriesExpander {
 public:
  explicit SeriesExpander(const NovikovScalar& x) : field_(x.field()), rem_(x.numerator()), den_(x.denominator()) {
    inv_lead_ = coeff_inverse(field_, den_.lead().coeff);
  }
  bool done() const { return rem_.is_zero(); }
  Rational next_exponent() const { return rem_.lead().exponent - den_.lead().exponent; }
  Monomial next() {
    Rational c = rem_.lead().coeff * inv_lead_;
    reduce(field_, c);
    Rational e = next_exponent();
    rem_ = add(field_, rem_, mul_monomial(field_, den_, c, e), true);
    return {e, c};
  }

 private:
  BaseField field_;
  LaurentSum rem_;
  LaurentSum den_;
  Rational inv_lead_;
};

}  // namespace

std::vector<Monomial> truncated_series(const NovikovScalar& x, std::size_t depth) {
  std::vector<Monomial> out;
  SeriesExpander ex(x);
  while (out.size() < depth && !ex.done()) out.push_back(ex.next());
  return out;
}

Rational free_term(const NovikovScalar& x) {
  SeriesExpander ex(x);
  while (!ex.done() && ex.next_exponent() >= 0) {
    Monomial m = ex.next();
    if (m.exponent == 0) return m.coeff;
  }
  return 0;
}

Rational leading_coefficient(const NovikovScalar& x) {
  if (x.is_zero()) return 0;
  Rational c = x.numerator().lead().coeff / x.denominator().lead().coeff;
  reduce(x.field(), c);
  return c;
}

namespace {

std::string sum_to_string(const LaurentSum& s) {
  if (s.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& m : s.terms()) {
    Rational c = m.coeff;
    if (first) {
      out += c.get_str();
    } else {
      out += c < 0 ? " - " : " + ";
      out += Rational(abs(c)).get_str();
    }
    out += "*s^(" + m.exponent.get_str() + ")";
    first = false;
  }
  return out;
}

class ScalarParser {
 public:
  ScalarParser(BaseField field, std::string_view text) : field_(field) {
    for (char c : text) {
      if (!std::isspace(static_cast<unsigned char>(c))) s_.push_back(c);
    }
  }

  NovikovScalar parse() {
    if (s_.empty()) fail("empty scalar");
    LaurentSum num = parse_group();
    if (pos_ < s_.size() && s_[pos_] == '/') {
      ++pos_;
      LaurentSum den = parse_group();
      expect_end();
      return NovikovScalar::fraction(field_, num, den);
    }
    expect_end();
    return NovikovScalar::fraction(field_, num, LaurentSum::monomial(field_, 1, 0));
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("scalar parse error at offset " + std::to_string(pos_) + ": " + what +
                                " in '" + s_ + "'");
  }

  void expect_end() const {
    if (pos_ != s_.size()) fail("trailing characters");
  }

  LaurentSum parse_group() {
    if (pos_ < s_.size() && s_[pos_] == '(') {
      ++pos_;
      LaurentSum inner = parse_sum();
      if (pos_ >= s_.size() || s_[pos_] != ')') fail("expected ')'");
      ++pos_;
      return inner;
    }
    return parse_sum();
  }

  LaurentSum parse_sum() {
    std::vector<Monomial> terms;
    bool negative = false;
    if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) negative = s_[pos_++] == '-';
    terms.push_back(parse_term(negative));
    while (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) {
      negative = s_[pos_++] == '-';
      terms.push_back(parse_term(negative));
    }
    return LaurentSum::from_terms(field_, std::move(terms));
  }

  std::string digits() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    return s_.substr(start, pos_ - start);
  }

  Rational parse_coeff() {
    std::string num = digits();
    if (num.empty()) fail("expected coefficient");
    std::string text = num;
    if (pos_ + 1 < s_.size() && s_[pos_] == '/' && std::isdigit(static_cast<unsigned char>(s_[pos_ + 1]))) {
      ++pos_;
      text += "/" + digits();
    }
    return parse_rational(text);
  }

  Rational parse_exponent() {
    // s^(e) | s^e | s
    if (pos_ >= s_.size() || s_[pos_] != '^') return 1;
    ++pos_;
    bool paren = pos_ < s_.size() && s_[pos_] == '(';
    if (paren) ++pos_;
    bool negative = false;
    if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) negative = s_[pos_++] == '-';
    Rational e = parse_coeff();
    if (paren) {
      if (pos_ >= s_.size() || s_[pos_] != ')') fail("expected ')' after exponent");
      ++pos_;
    }
    return negative ? Rational(-e) : e;
  }

  Monomial parse_term(bool negative) {
    Rational coeff = 1;
    Rational exponent = 0;
    if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      coeff = parse_coeff();
      if (pos_ < s_.size() && s_[pos_] == '*') {
        ++pos_;
        if (pos_ >= s_.size() || s_[pos_] != 's') fail("expected 's' after '*'");
      }
    }
    if (pos_ < s_.size() && s_[pos_] == 's') {
      ++pos_;
      exponent = parse_exponent();
    } else if (pos_ < s_.size() && !std::isdigit(static_cast<unsigned char>(s_[pos_])) && s_[pos_] != '+' &&
               s_[pos_] != '-' && s_[pos_] != ')' && s_[pos_] != '/') {
      fail("unexpected character");
    }
    if (negative) coeff = -coeff;
    if (field_ == BaseField::F2 && !is_integer(coeff)) fail("F2 coefficients must be 0 or 1");
    return {exponent, coeff};
  }

  BaseField field_;
  std::string s_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string to_string(const NovikovScalar& x) {
  if (x.is_laurent()) return sum_to_string(x.numerator());
  return "(" + sum_to_string(x.numerator()) + ")/(" + sum_to_string(x.denominator()) + ")";
}

NovikovScalar parse_scalar(BaseField field, std::string_view text) { return ScalarParser(field, text).parse(); }

LambdaElement LambdaElement::term(const NovikovScalar& c, int qpow) {
  LambdaElement out(c.field());
  out.add_term(qpow, c);
  return out;
}

NovikovScalar LambdaElement::coeff(int k) const {
  auto it = terms_.find(k);
  return it == terms_.end() ? NovikovScalar::zero(field_) : it->second;
}

void LambdaElement::add_term(int k, const NovikovScalar& c) {
  if (c.field() != field_) throw std::invalid_argument("base-field mismatch");
  if (c.is_zero()) return;
  auto it = terms_.find(k);
  if (it == terms_.end()) {
    terms_.emplace(k, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

LambdaElement LambdaElement::operator-() const {
  LambdaElement out(field_);
  for (const auto& [k, c] : terms_) out.terms_.emplace(k, -c);
  return out;
}

LambdaElement& LambdaElement::operator+=(const LambdaElement& o) {
  if (o.field_ != field_) throw std::invalid_argument("base-field mismatch");
  for (const auto& [k, c] : o.terms_) add_term(k, c);
  return *this;
}

LambdaElement& LambdaElement::operator-=(const LambdaElement& o) { return *this += -o; }

LambdaElement operator*(const LambdaElement& a, const LambdaElement& b) {
  if (a.field_ != b.field_) throw std::invalid_argument("base-field mismatch");
  LambdaElement out(a.field_);
  for (const auto& [ka, ca] : a.terms_) {
    for (const auto& [kb, cb] : b.terms_) out.add_term(ka + kb, ca * cb);
  }
  return out;
}

LambdaElement LambdaElement::operator*(const NovikovScalar& c) const {
  LambdaElement out(field_);
  for (const auto& [k, x] : terms_) out.add_term(k, x * c);
  return out;
}

ExtRational valuation(const LambdaElement& x) {
  ExtRational best;
  for (const auto& [k, c] : x.terms()) best = max(best, valuation(c));
  return best;
}

}  // namespace rigidkit
