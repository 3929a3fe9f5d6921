#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rigidkit {

using Rational = mpq_class;
using Integer = mpz_class;

/// Parses "p", "-p/q" or a plain decimal like "0.25" into an exact rational.
Rational parse_rational(std::string_view text);

/// Canonical text form: "p" for integers, "p/q" otherwise.
std::string to_string(const Rational& r);

Rational rational_gcd(const Rational& a, const Rational& b);

/// Largest integer not exceeding r.
Integer floor(const Rational& r);

bool is_integer(const Rational& r);

/// Exact p-th root of a non-negative rational when it exists.
std::optional<Rational> exact_root(const Rational& r, unsigned p);

double to_double(const Rational& r);

/// Extended rational: a rational or -infinity (valuations, filter levels).
class ExtRational {
 public:
  ExtRational() = default;  // -infinity
  ExtRational(Rational value) : finite_(true), value_(std::move(value)) {}  // NOLINT

  static ExtRational neg_infinity() { return {}; }

  bool is_finite() const { return finite_; }
  const Rational& value() const;

  friend bool operator==(const ExtRational& a, const ExtRational& b);
  friend bool operator<(const ExtRational& a, const ExtRational& b);
  friend bool operator<=(const ExtRational& a, const ExtRational& b) { return !(b < a); }
  friend bool operator>(const ExtRational& a, const ExtRational& b) { return b < a; }
  friend bool operator>=(const ExtRational& a, const ExtRational& b) { return !(a < b); }

  /// -inf absorbs: (-inf) + x = -inf.
  friend ExtRational operator+(const ExtRational& a, const ExtRational& b);
  friend ExtRational operator-(const ExtRational& a, const Rational& b);

  std::string str() const;

 private:
  bool finite_ = false;
  Rational value_;
};

ExtRational max(const ExtRational& a, const ExtRational& b);

using RationalPoint = std::vector<Rational>;

}  // namespace rigidkit
