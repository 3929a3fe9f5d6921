#include <cmath>
#include <random>

#include "doctest.h"
#include "rigidkit/model_quasi_state.hpp"

using namespace rigidkit;

namespace {

Rational q(long n, long d = 1) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}

RationalPoint random_point_in(const DelzantPolytope& p, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> w(0, 9);
  RationalPoint x(p.dimension(), Rational(0));
  Rational total = 0;
  for (const auto& v : p.vertices()) {
    Rational a = w(rng) + (total == 0 ? 1 : 0);
    total += a;
    for (std::size_t j = 0; j < x.size(); ++j) x[j] += a * v[j];
  }
  for (auto& c : x) c /= total;
  return x;
}

SmoothSampler gaussian(const std::vector<double>& center, double sigma, double half_width) {
  SmoothSampler s;
  s.f = [center, sigma](const std::vector<double>& x) {
    double r2 = 0;
    for (std::size_t i = 0; i < x.size(); ++i) r2 += (x[i] - center[i]) * (x[i] - center[i]);
    return std::exp(-r2 / (2 * sigma * sigma));
  };
  for (double c : center) s.box.emplace_back(c - half_width, c + half_width);
  return s;
}

}  // namespace

TEST_CASE("PL interpolation reproduces affine functions exactly") {
  std::mt19937_64 rng(3);
  for (const auto& m : {projective_space(2), quadric_square(), blowup_projective_plane(3), projective_space(3)}) {
    for (int trial = 0; trial < 5; ++trial) {
      PLFunction f = random_pl_function(m.polytope, rng, 3);
      validate(f, &m.polytope);
      RationalPoint a;
      for (std::size_t j = 0; j < m.polytope.dimension(); ++j) a.push_back(q(static_cast<long>(rng() % 11) - 5, 3));
      Rational b = q(2, 7);
      auto affine = [&](const RationalPoint& x) {
        Rational s = b;
        for (std::size_t j = 0; j < x.size(); ++j) s += a[j] * x[j];
        return s;
      };
      for (std::size_t i = 0; i < f.vertices.size(); ++i) f.values[i] = affine(f.vertices[i]);
      for (int k = 0; k < 10; ++k) {
        RationalPoint x = random_point_in(m.polytope, rng);
        auto v = f.evaluate(x);
        REQUIRE(v);
        CHECK(*v == affine(x));
      }
    }
  }
}

TEST_CASE("zeta examples") {
  ModelState s(projective_space(2));
  PLFunction one = constant_on(s.moment().polytope, 1);
  CHECK(zeta(s, one) == 1);

  // A convex cone with its minimum at p_spec.
  PLFunction cone = stellar_refine(constant_on(s.moment().polytope, 3), s.p_spec());
  cone.values.back() = q(-2, 5);
  CHECK(zeta(s, cone) == q(-2, 5));
  std::mt19937_64 rng(9);
  for (int i = 0; i < 20; ++i) {
    auto v = cone.evaluate(random_point_in(s.moment().polytope, rng));
    REQUIRE(v);
    CHECK(*v >= q(-2, 5));
  }
  CHECK(zeta(s, shifted(cone, 5)) == zeta(s, cone) + 5);

  ModelState blow(blowup_projective_plane(1));
  PLFunction f = random_pl_function(blow.moment().polytope, rng);
  CHECK(zeta(blow, f) == *f.evaluate(special_point(blow.moment()).point));

  // A function on a region missing p_spec.
  PLFunction off{{{q(1, 3), q(0)}, {q(2, 3), q(-1, 3)}, {q(1, 3), q(-1, 3)}}, {{0, 1, 2}}, {q(1), q(1), q(1)}};
  CHECK_THROWS_AS(zeta(s, off), std::domain_error);
}

TEST_CASE("validation and continuity") {
  auto m = projective_space(2);
  PLFunction f = constant_on(m.polytope, 0);
  CHECK_NOTHROW(validate(f, &m.polytope));
  PLFunction bad = f;
  bad.values.pop_back();
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = f;
  bad.simplices[0][1] = 17;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = f;
  bad.vertices[2] = bad.vertices[1];
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  // Half the triangle does not cover Δ.
  PLFunction half{{m.polytope.vertices()[0], m.polytope.vertices()[1], {q(-1, 3), q(1, 6)}}, {{0, 1, 2}}, {q(0), q(0), q(0)}};
  CHECK_THROWS_AS(validate(half, &m.polytope), std::invalid_argument);
  CHECK_NOTHROW(validate(half));

  // Two copies of a shared vertex carrying different values.
  PLFunction torn{{{q(0), q(0)}, {q(1), q(0)}, {q(0), q(1)}, {q(1), q(1)}, {q(1), q(0)}},
                  {{0, 1, 2}, {4, 3, 2}},
                  {q(0), q(1), q(0), q(0), q(2)}};
  CHECK_THROWS_AS(torn.evaluate({q(1), q(0)}), std::logic_error);
  CHECK(*torn.evaluate({q(1, 4), q(1, 4)}) == q(1, 4));

  std::mt19937_64 rng(1);
  PLFunction g = random_pl_function(m.polytope, rng);
  CHECK_THROWS_AS(sum(f, g), std::invalid_argument);
  CHECK_THROWS_AS(pointwise_leq(f, g), std::invalid_argument);
}

TEST_CASE("stellar refinement preserves the function") {
  std::mt19937_64 rng(17);
  auto m = blowup_projective_plane(2);
  PLFunction f = random_pl_function(m.polytope, rng, 1);
  for (int i = 0; i < 4; ++i) {
    RationalPoint p = random_point_in(m.polytope, rng);
    PLFunction g = stellar_refine(f, p);
    validate(g, &m.polytope);
    for (int t = 0; t < 10; ++t) {
      RationalPoint x = random_point_in(m.polytope, rng);
      CHECK(*g.evaluate(x) == *f.evaluate(x));
    }
    f = g;
  }
}

TEST_CASE("axiom suite on seeded samples") {
  std::mt19937_64 rng(2024);
  for (const auto& m : {projective_space(2), quadric_square(), blowup_projective_plane(2), projective_space(1)}) {
    ModelState s(m);
    std::vector<PLFunction> sample;
    for (int i = 0; i < 20; ++i) sample.push_back(random_pl_function(m.polytope, rng, 4));
    auto report = axiom_suite(s, sample);
    CHECK(report.ok());
    for (const auto& c : report.checks) {
      INFO(c.name);
      if (c.name == "vanishing") {
        CHECK((c.instances > 0) == m.compressible);
      } else {
        CHECK(c.instances >= sample.size());
      }
    }
  }
}

TEST_CASE("model heaviness") {
  ModelState s(projective_space(2));
  const auto& delta = s.moment().polytope;
  auto r = model_heavy(s, {ConvexBody{delta.vertices()}});
  CHECK(r.heavy);
  CHECK(r.witness == std::size_t{0});
  CHECK(!r.test_class.empty());
  CHECK(model_heavy(s, {ConvexBody{{s.p_spec()}}}).heavy);
  ConvexBody away{{{q(1, 3), q(-1, 3)}, {q(2, 3), q(-1, 3)}, {q(1, 3), q(0)}}};
  CHECK(!model_heavy(s, {away}).heavy);
  auto u = model_heavy(s, {away, ConvexBody{{s.p_spec()}}});
  CHECK(u.heavy);
  CHECK(u.witness == std::size_t{1});

  CHECK(contains(ConvexBody{delta.vertices()}, {q(0), q(0)}));
  CHECK(!contains(away, {q(0), q(0)}));
  CHECK(disjoint(away, ConvexBody{{s.p_spec()}}));
  CHECK(!disjoint(away, ConvexBody{delta.vertices()}));
}

TEST_CASE("intersection property on random disjoint families") {
  std::mt19937_64 rng(77);
  for (const auto& m : {projective_space(2), blowup_projective_plane(1), quadric_square()}) {
    ModelState s(m);
    for (int t = 0; t < 8; ++t) {
      auto family = random_disjoint_family(s, rng, 3 + t % 3, t % 2 == 0);
      CHECK(intersection_property(s, family));
      std::size_t heavy = 0;
      for (const auto& b : family) heavy += model_heavy(s, {b}).heavy;
      if (t % 2 == 0) CHECK(heavy == 1);
      CHECK(heavy <= 1);
    }
  }
  ModelState s(projective_space(2));
  ConvexBody whole{s.moment().polytope.vertices()};
  CHECK_THROWS_AS(intersection_property(s, {whole, ConvexBody{{s.p_spec()}}}), std::invalid_argument);
}

TEST_CASE("Fourier reduction recovers a Gaussian at p_spec") {
  ModelState s(projective_space(2));
  auto h = gaussian({0.0, 0.0}, 1.0, 8.0);
  auto rep = fourier_reduction_demo(s, h, 10.0, 0.05);
  CHECK(rep.h_at_spec == doctest::Approx(1.0));
  CHECK(rep.error <= 1e-3);
  REQUIRE(rep.table.size() == 9);
  // Halving ε at fixed R never makes things worse beyond quadrature noise.
  for (std::size_t r = 0; r < 3; ++r) {
    for (std::size_t e = 0; e + 1 < 3; ++e) {
      CHECK(rep.table[(e + 1) * 3 + r].error <= rep.table[e * 3 + r].error + 1e-9);
    }
  }
  // Lattice counts grow like the disc area.
  CHECK(rep.table.back().lattice_points > 120000);

  auto par = fourier_reduction_demo(s, h, 10.0, 0.05, {256, 1e-6, 3});
  CHECK(par.zeta == rep.zeta);

  // Off-centre bump on the blow-up, where p_spec ≠ 0.
  ModelState b(blowup_projective_plane(1));
  std::vector<double> ps{b.p_spec()[0].get_d(), b.p_spec()[1].get_d()};
  auto hb = gaussian(ps, 1.0, 8.0);
  CHECK(fourier_reduction_demo(b, hb, 10.0, 0.05).error <= 1e-3);
}

TEST_CASE("Fourier reduction edge cases") {
  ModelState s(projective_space(2));
  SmoothSampler zero{[](const std::vector<double>&) { return 0.0; }, {{-4, 4}, {-4, 4}}};
  auto rep = fourier_reduction_demo(s, zero, 5.0, 0.1);
  for (const auto& row : rep.table) {
    CHECK(row.zeta == 0.0);
    CHECK(row.error == 0.0);
  }
  SmoothSampler flat{[](const std::vector<double>&) { return 1.0; }, {{-4, 4}, {-4, 4}}};
  CHECK_THROWS_AS(fourier_reduction_demo(s, flat, 5.0, 0.1), std::domain_error);
  CHECK_THROWS_AS(fourier_reduction_demo(s, zero, -1.0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(fourier_reduction_demo(ModelState(projective_space(3)), gaussian({0, 0, 0}, 1, 8), 5.0, 0.1),
                  std::invalid_argument);
}

TEST_CASE("Fourier reduction is separable") {
  // The spectrum of a wide Gaussian sits well inside every ball used, so the
  // disc and the square truncation agree.
  ModelState s2(projective_space(2));
  ModelState s1(projective_space(1));
  auto h2 = gaussian({0.0, 0.0}, 2.0, 16.0);
  auto h1 = gaussian({0.0}, 2.0, 16.0);
  auto r2 = fourier_reduction_demo(s2, h2, 10.0, 0.05);
  auto r1 = fourier_reduction_demo(s1, h1, 10.0, 0.05);
  REQUIRE(r1.table.size() == r2.table.size());
  for (std::size_t i = 0; i < r1.table.size(); ++i) {
    CHECK(std::abs(r2.table[i].zeta - r1.table[i].zeta * r1.table[i].zeta) <= 1e-3);
  }
}
