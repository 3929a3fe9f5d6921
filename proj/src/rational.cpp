#include "rigidkit/rational.hpp"

#include <stdexcept>

namespace rigidkit {

Rational parse_rational(std::string_view text) {
  std::string s;
  for (char c : text) {
    if (c != ' ' && c != '\t') s.push_back(c);
  }
  if (s.empty()) throw std::invalid_argument("empty rational");
  if (s.front() == '+') s.erase(s.begin());
  auto dot = s.find('.');
  if (dot != std::string::npos) {
    if (s.find_first_of("eE/") != std::string::npos) {
      throw std::invalid_argument("unsupported rational literal '" + std::string(text) + "'");
    }
    bool negative = !s.empty() && s.front() == '-';
    std::string digits = negative ? s.substr(1) : s;
    dot = digits.find('.');
    std::string whole = digits.substr(0, dot);
    std::string frac = digits.substr(dot + 1);
    if (whole.empty()) whole = "0";
    for (char c : whole + frac) {
      if (c < '0' || c > '9') throw std::invalid_argument("bad rational '" + std::string(text) + "'");
    }
    Integer num(whole + frac);
    Integer den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    Rational r(num, den);
    r.canonicalize();
    return negative ? Rational(-r) : r;
  }
  Rational r;
  if (r.set_str(s, 10) != 0) {
    throw std::invalid_argument("bad rational '" + std::string(text) + "'");
  }
  if (r.get_den() == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& r) { return r.get_str(); }

Rational rational_gcd(const Rational& a, const Rational& b) {
  if (a == 0) return abs(b);
  if (b == 0) return abs(a);
  Integer num, den;
  mpz_gcd(num.get_mpz_t(), Integer(a.get_num() * b.get_den()).get_mpz_t(),
          Integer(b.get_num() * a.get_den()).get_mpz_t());
  den = a.get_den() * b.get_den();
  Rational g(num, den);
  g.canonicalize();
  return abs(g);
}

Integer floor(const Rational& r) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

bool is_integer(const Rational& r) { return r.get_den() == 1; }

std::optional<Rational> exact_root(const Rational& r, unsigned p) {
  if (r < 0) {
    if (p % 2 == 0) return std::nullopt;
    auto root = exact_root(Rational(-r), p);
    if (!root) return std::nullopt;
    return Rational(-*root);
  }
  Integer num, den;
  if (mpz_root(num.get_mpz_t(), r.get_num_mpz_t(), p) == 0) return std::nullopt;
  if (mpz_root(den.get_mpz_t(), r.get_den_mpz_t(), p) == 0) return std::nullopt;
  Rational out(num, den);
  out.canonicalize();
  return out;
}

double to_double(const Rational& r) { return r.get_d(); }

const Rational& ExtRational::value() const {
  if (!finite_) throw std::logic_error("value() of -infinity");
  return value_;
}

bool operator==(const ExtRational& a, const ExtRational& b) {
  if (a.finite_ != b.finite_) return false;
  return !a.finite_ || a.value_ == b.value_;
}

bool operator<(const ExtRational& a, const ExtRational& b) {
  if (!b.finite_) return false;
  if (!a.finite_) return true;
  return a.value_ < b.value_;
}

ExtRational operator+(const ExtRational& a, const ExtRational& b) {
  if (!a.finite_ || !b.finite_) return {};
  return ExtRational(Rational(a.value_ + b.value_));
}

ExtRational operator-(const ExtRational& a, const Rational& b) {
  if (!a.finite_) return {};
  return ExtRational(Rational(a.value_ - b));
}

std::string ExtRational::str() const { return finite_ ? value_.get_str() : "-inf"; }

ExtRational max(const ExtRational& a, const ExtRational& b) { return a < b ? b : a; }

}  // namespace rigidkit
