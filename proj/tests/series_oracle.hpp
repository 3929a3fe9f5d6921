#pragma once

// Test-only: truncated power-series arithmetic used as an oracle for the
// fraction representation of Novikov scalars.

#include <map>

#include "rigidkit/novikov.hpp"

namespace oracle {

using rigidkit::Rational;

/// Series Σ c_θ s^θ kept only for θ ≥ cutoff.
struct Series {
  std::map<Rational, Rational, std::greater<>> terms;
  Rational cutoff;
};

inline Rational reduce(rigidkit::BaseField f, Rational c) {
  if (f == rigidkit::BaseField::F2) {
    mpz_class r;
    mpz_fdiv_r_ui(r.get_mpz_t(), c.get_num_mpz_t(), 2);
    return Rational(r);
  }
  return c;
}

inline Series multiply(rigidkit::BaseField f, const Series& a, const Series& b, const Rational& cutoff) {
  Series out{{}, cutoff};
  for (const auto& [ea, ca] : a.terms) {
    for (const auto& [eb, cb] : b.terms) {
      Rational e = ea + eb;
      if (e < cutoff) continue;
      out.terms[e] = reduce(f, out.terms[e] + ca * cb);
    }
  }
  std::erase_if(out.terms, [](const auto& kv) { return kv.second == 0; });
  return out;
}

inline Series from_sum(const rigidkit::LaurentSum& s, const Rational& cutoff) {
  Series out{{}, cutoff};
  for (const auto& m : s.terms()) {
    if (m.exponent >= cutoff) out.terms[m.exponent] = m.coeff;
  }
  return out;
}

/// 1/den expanded down to `cutoff` via den = c s^e (1 + r), 1/(1+r) = Σ (-r)^k.
inline Series invert(rigidkit::BaseField f, const rigidkit::LaurentSum& den, const Rational& cutoff) {
  const auto& lead = den.lead();
  Rational inv_c = f == rigidkit::BaseField::F2 ? Rational(1) : Rational(1 / lead.coeff);
  Series r{{}, cutoff - 1000};
  for (std::size_t i = 1; i < den.terms().size(); ++i) {
    const auto& m = den.terms()[i];
    r.terms[Rational(m.exponent - lead.exponent)] = reduce(f, Rational(-m.coeff * inv_c));
  }
  // Geometric series in the (negative-exponent) tail.
  Rational inner_cutoff = cutoff + lead.exponent;
  Series acc{{{Rational(0), Rational(1)}}, inner_cutoff};
  Series power = acc;
  for (int k = 0; k < 200 && !power.terms.empty(); ++k) {
    power = multiply(f, power, r, inner_cutoff);
    for (const auto& [e, c] : power.terms) acc.terms[e] = reduce(f, acc.terms[e] + c);
  }
  std::erase_if(acc.terms, [](const auto& kv) { return kv.second == 0; });
  Series out{{}, cutoff};
  for (const auto& [e, c] : acc.terms) {
    Rational ee = e - lead.exponent;
    if (ee >= cutoff) out.terms[ee] = reduce(f, Rational(c * inv_c));
  }
  return out;
}

/// Series of num/den, truncated at `cutoff`.
inline Series expand(const rigidkit::NovikovScalar& x, const Rational& cutoff) {
  auto f = x.field();
  Series num = from_sum(x.numerator(), Rational(cutoff - 100));
  Series inv = invert(f, x.denominator(), Rational(cutoff - 100));
  return multiply(f, num, inv, cutoff);
}

}  // namespace oracle
