#include <random>

#include "doctest.h"
#include "rigidkit/novikov.hpp"
#include "series_oracle.hpp"

using namespace rigidkit;

namespace {

LaurentSum random_sum(std::mt19937_64& rng, BaseField field, int max_terms) {
  std::uniform_int_distribution<int> count(1, max_terms);
  std::uniform_int_distribution<int> expo(-6, 6);
  std::uniform_int_distribution<int> coef(-4, 4);
  std::vector<Monomial> terms;
  int n = count(rng);
  for (int i = 0; i < n; ++i) {
    Rational c = field == BaseField::F2 ? Rational(1) : Rational(coef(rng));
    terms.push_back({Rational(expo(rng), 2), c});
  }
  auto s = LaurentSum::from_terms(field, terms);
  if (s.is_zero()) s = LaurentSum::monomial(field, 1, Rational(expo(rng), 2));
  return s;
}

NovikovScalar random_scalar(std::mt19937_64& rng, BaseField field) {
  std::bernoulli_distribution frac(0.5);
  auto num = random_sum(rng, field, 3);
  if (!frac(rng)) return NovikovScalar::fraction(field, num, LaurentSum::monomial(field, 1, 0));
  return NovikovScalar::fraction(field, num, random_sum(rng, field, 3));
}

Rational oracle_top(const NovikovScalar& x) {
  auto series = oracle::expand(x, Rational(-40));
  REQUIRE_FALSE(series.terms.empty());
  return series.terms.begin()->first;
}

}  // namespace

TEST_CASE("valuation of reference scalars") {
  auto f = BaseField::Qmodel;
  CHECK_FALSE(valuation(NovikovScalar::zero(f)).is_finite());

  auto s3s = NovikovScalar::monomial(f, 1, 3) + NovikovScalar::monomial(f, 1, 1);
  CHECK(valuation(s3s) == ExtRational(Rational(3)));

  auto frac = (NovikovScalar::monomial(f, 1, 2) + NovikovScalar::one(f)) / NovikovScalar::monomial(f, 1, 5);
  CHECK(valuation(frac) == ExtRational(Rational(-3)));
  CHECK(oracle_top(frac) == -3);
  auto series = truncated_series(frac, 10);
  REQUIRE(series.size() == 2);
  CHECK(series[0].exponent == -3);
  CHECK(series[1].exponent == -5);
}

TEST_CASE("valuation of a genuine fraction matches the series oracle") {
  auto f = BaseField::Qmodel;
  // 1/(1 - s^-1) = 1 + s^-1 + s^-2 + ...
  auto den = NovikovScalar::one(f) - NovikovScalar::monomial(f, 1, -1);
  auto x = den.inverse();
  auto series = truncated_series(x, 10);
  REQUIRE(series.size() == 10);
  for (std::size_t i = 0; i < 10; ++i) {
    CHECK(series[i].exponent == -Rational(static_cast<long>(i)));
    CHECK(series[i].coeff == 1);
  }
  CHECK(free_term(x) == 1);
}

TEST_CASE("field identities") {
  auto f = BaseField::Qmodel;
  auto s = NovikovScalar::monomial(f, 1, 1);
  auto one = NovikovScalar::one(f);
  CHECK((s + one) * (s - one) == s * s - one);
  CHECK(((s + one) * (s - one)).is_laurent());

  std::mt19937_64 rng(11);
  for (auto field : {BaseField::Qmodel, BaseField::F2}) {
    for (int i = 0; i < 100; ++i) {
      auto x = random_scalar(rng, field);
      CHECK((x * x.inverse()).is_one());
      CHECK((x - x).is_zero());
      CHECK(-(-x) == x);
    }
  }
}

TEST_CASE("F2 arithmetic reduces coefficients") {
  auto f = BaseField::F2;
  auto s = NovikovScalar::monomial(f, 1, 1);
  auto one = NovikovScalar::one(f);
  CHECK((s + one) * (s + one) == s * s + one);
  CHECK((one + one).is_zero());
}

TEST_CASE("valuation is multiplicative and ultrametric on random pairs") {
  std::mt19937_64 rng(2024);
  for (auto field : {BaseField::Qmodel, BaseField::F2}) {
    for (int i = 0; i < 100; ++i) {
      auto x = random_scalar(rng, field);
      auto y = random_scalar(rng, field);
      auto xy = x * y;
      CHECK(valuation(xy) == valuation(x) + valuation(y));
      CHECK(valuation(xy) == ExtRational(oracle_top(xy)));
      CHECK(valuation(x) == ExtRational(oracle_top(x)));

      auto sum = x + y;
      CHECK(valuation(sum) <= max(valuation(x), valuation(y)));
      if (!(valuation(x) == valuation(y))) CHECK(valuation(sum) == max(valuation(x), valuation(y)));
    }
  }
}

TEST_CASE("associativity and distributivity on random triples") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 40; ++i) {
    auto f = BaseField::Qmodel;
    auto a = random_scalar(rng, f);
    auto b = random_scalar(rng, f);
    auto c = random_scalar(rng, f);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK((a + b) + c == a + (b + c));
  }
}

TEST_CASE("errors") {
  auto q = NovikovScalar::one(BaseField::Qmodel);
  auto z = NovikovScalar::one(BaseField::F2);
  CHECK_THROWS_AS(q / NovikovScalar::zero(BaseField::Qmodel), std::domain_error);
  CHECK_THROWS_AS(NovikovScalar::zero(BaseField::Qmodel).inverse(), std::domain_error);
  CHECK_THROWS_AS(q + z, std::invalid_argument);
  CHECK_THROWS_AS(q * z, std::invalid_argument);
}

TEST_CASE("group sums") {
  CHECK(group_sum(PeriodGroup(Rational(1, 2)), PeriodGroup(Rational(1, 3))) == PeriodGroup(Rational(1, 6)));
  CHECK(group_sum(PeriodGroup(1), PeriodGroup(1)) == PeriodGroup(1));
  CHECK(group_sum(PeriodGroup(), PeriodGroup(Rational(2, 5))) == PeriodGroup(Rational(2, 5)));
  CHECK(group_sum(PeriodGroup(Rational(4, 3)), PeriodGroup(2)) == PeriodGroup(Rational(2, 3)));

  PeriodGroup trivial;
  CHECK(trivial.contains(0));
  CHECK_FALSE(trivial.contains(1));
  PeriodGroup half(Rational(1, 2));
  CHECK(half.contains(Rational(3, 2)));
  CHECK_FALSE(half.contains(Rational(1, 3)));
}

TEST_CASE("membership closure") {
  std::mt19937_64 rng(9);
  PeriodGroup half(Rational(1, 2));
  for (int i = 0; i < 50; ++i) {
    auto x = random_scalar(rng, BaseField::Qmodel);
    auto y = random_scalar(rng, BaseField::Qmodel);
    REQUIRE(x.exponents_in(half));
    CHECK((x + y).exponents_in(half));
    CHECK((x * y).exponents_in(half));
    CHECK((x / y).exponents_in(half));
  }
}

TEST_CASE("serialization round trip") {
  std::mt19937_64 rng(77);
  for (auto field : {BaseField::Qmodel, BaseField::F2}) {
    for (int i = 0; i < 100; ++i) {
      auto x = random_scalar(rng, field);
      auto text = to_string(x);
      CHECK(parse_scalar(field, text) == x);
      CHECK(to_string(parse_scalar(field, text)) == text);
    }
  }
  auto f = BaseField::Qmodel;
  CHECK(parse_scalar(f, "(1*s^(3) + 1*s^(1))/(1*s^(0))") ==
        NovikovScalar::monomial(f, 1, 3) + NovikovScalar::monomial(f, 1, 1));
  CHECK(parse_scalar(f, "-3/2*s^(1/2)") == NovikovScalar::monomial(f, Rational(-3, 2), Rational(1, 2)));
  CHECK(parse_scalar(f, "s^2 - 1") == NovikovScalar::monomial(f, 1, 2) - NovikovScalar::one(f));
  CHECK(parse_scalar(f, "0").is_zero());
  CHECK_THROWS(parse_scalar(f, "1*s^("));
  CHECK_THROWS(parse_scalar(BaseField::F2, "3/2*s^(1)"));
}

TEST_CASE("lambda valuation") {
  auto f = BaseField::Qmodel;
  auto lam = LambdaElement::term(NovikovScalar::monomial(f, 1, 2), -1) +
             LambdaElement::term(NovikovScalar::monomial(f, 1, 1), 1);
  CHECK(valuation(lam) == ExtRational(Rational(2)));
  CHECK_FALSE(valuation(LambdaElement(f)).is_finite());
  auto shifted = lam * NovikovScalar::monomial(f, 1, Rational(5, 3));
  CHECK(valuation(shifted) == ExtRational(Rational(2) + Rational(5, 3)));
  auto sq = lam * lam;
  CHECK(sq.coeff(-2) == NovikovScalar::monomial(f, 1, 4));
  CHECK(sq.coeff(0) == NovikovScalar::monomial(f, 2, 3));
  CHECK((lam - lam).is_zero());
}
