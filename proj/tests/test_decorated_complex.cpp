#include <algorithm>
#include <numeric>
#include <random>

#include "doctest.h"
#include "rigidkit/decorated_complex.hpp"

using namespace rigidkit;

namespace {

constexpr BaseField Q = BaseField::Qmodel;

NovikovScalar mono(const Rational& c, const Rational& e, BaseField f = Q) { return NovikovScalar::monomial(f, c, e); }

/// Two-element complex d x₂ = s^{-1} x₁ with the given filters.
DecoratedComplex two_cell(const Rational& f1, const Rational& f2) {
  ExactMatrix<NovikovScalar> d(2, 2, NovikovScalar::zero(Q));
  d(0, 1) = mono(1, -1);
  return DecoratedComplex(Q, PeriodGroup(1), {{"x1", 1, f1}, {"x2", 0, f2}}, d);
}

DecoratedComplex zero_complex(const std::vector<Rational>& filters, const PeriodGroup& gamma = PeriodGroup(1)) {
  std::vector<ChainBasisElement> basis;
  for (std::size_t i = 0; i < filters.size(); ++i) {
    basis.push_back({"x" + std::to_string(i + 1), static_cast<int>(i % 2), filters[i]});
  }
  return DecoratedComplex(Q, gamma, basis);
}

/// Random options matching the acceptance regime: Γ = (1/d)ℤ, d ≤ 12.
RandomComplexOptions random_options(std::mt19937_64& rng, std::size_t max_dim, BaseField field = Q) {
  std::uniform_int_distribution<int> den(1, 12);
  RandomComplexOptions opts;
  opts.field = field;
  opts.max_dim = max_dim;
  opts.gamma_denominator = den(rng);
  return opts;
}

Rational min_gap(const RandomComplexOptions& o) { return Rational(1, o.gamma_denominator * o.filter_denominator); }

DecoratedComplex random_generic(std::mt19937_64& rng, const RandomComplexOptions& opts) {
  return make_generic(random_complex(rng, opts), min_gap(opts) / 4);
}

/// Span test by exact row reduction: rank(A) = rank(B) = rank(A ∪ B).
bool same_span(const std::vector<Chain>& a, const std::vector<Chain>& b, std::size_t n) {
  auto zero = NovikovScalar::zero(Q);
  auto to_matrix = [&](const std::vector<Chain>& rows) {
    ExactMatrix<NovikovScalar> m(rows.size(), n, zero);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      for (std::size_t c = 0; c < n; ++c) m(r, c) = rows[r][c];
    }
    return m;
  };
  auto both = a;
  both.insert(both.end(), b.begin(), b.end());
  auto ra = rank(to_matrix(a));
  return ra == rank(to_matrix(b)) && ra == rank(to_matrix(both));
}

std::size_t homology_dim(const DecoratedComplex& v) {
  return v.dim() - 2 * rank(v.differential());
}

bool distinct(std::vector<std::size_t> xs) {
  std::sort(xs.begin(), xs.end());
  return std::adjacent_find(xs.begin(), xs.end()) == xs.end();
}

Chain add(const Chain& a, const Chain& b) {
  Chain out = a;
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += b[i];
  return out;
}

/// Any cycle in the class of `cycle`: cycle + d(random chain).
Chain random_representative(std::mt19937_64& rng, const DecoratedComplex& v, const Chain& cycle) {
  return add(cycle, v.apply(random_chain(rng, v, 0.6)));
}

}  // namespace

TEST_CASE("validate") {
  CHECK(validate(zero_complex({Rational(3), Rational(-1, 2)})).empty());
  auto ok = two_cell(Rational(1, 2), 0);
  CHECK(validate(ok).empty());
  CHECK(filter_value(ok, ok.apply(ok.basis_chain(1))) == ExtRational(Rational(-1, 2)));

  auto bad = two_cell(2, 0);
  auto diags = validate(bad);
  REQUIRE(diags.size() == 1);
  CHECK(diags[0].check == "filter");
  CHECK(diags[0].basis_label == "x2");

  ExactMatrix<NovikovScalar> d(2, 2, NovikovScalar::zero(Q));
  d(0, 1) = mono(1, Rational(1, 3));
  auto off_gamma = validate(DecoratedComplex(Q, PeriodGroup(1), {{"x1", 0, -5}, {"x2", 0, 0}}, d));
  CHECK(std::any_of(off_gamma.begin(), off_gamma.end(), [](const auto& g) { return g.check == "gamma"; }));
  CHECK(std::any_of(off_gamma.begin(), off_gamma.end(), [](const auto& g) { return g.check == "parity"; }));

  // d² ≠ 0: x3 → x2 → x1 with nonzero composite.
  ExactMatrix<NovikovScalar> d3(3, 3, NovikovScalar::zero(Q));
  d3(1, 2) = mono(1, 0);
  d3(0, 1) = mono(1, 0);
  auto chain3 = validate(DecoratedComplex(Q, PeriodGroup(1), {{"x1", 0, 0}, {"x2", 1, 1}, {"x3", 0, 2}}, d3));
  REQUIRE_FALSE(chain3.empty());
  CHECK(chain3.back().check == "d^2");
  CHECK(chain3.back().basis_label == "x3");
}

TEST_CASE("filter values") {
  auto v = zero_complex({0, 1});
  CHECK(filter_value(v, v.basis_chain(0)) == ExtRational(Rational(0)));
  CHECK(filter_value(v, {mono(1, 2), mono(1, 0)}) == ExtRational(Rational(2)));
  CHECK_FALSE(filter_value(v, v.zero_chain()).is_finite());
}

TEST_CASE("genericity and dominant terms") {
  CHECK(is_generic(zero_complex({0, Rational(1, 2)})));
  CHECK_FALSE(is_generic(zero_complex({0, 1})));
  CHECK(is_generic(zero_complex({0, 1, 2}, PeriodGroup(0))));

  auto v3 = zero_complex({0, 1, Rational(1, 3)});
  auto d = dominant(v3, v3.basis_chain(2));
  CHECK(d.index == 2);
  CHECK(d.scale.is_one());

  auto v = zero_complex({0, 1}, PeriodGroup(3));
  auto dv = dominant(v, {mono(1, 2), mono(1, 0)});
  CHECK(dv.index == 0);
  CHECK(dv.scale == mono(1, 2));

  auto tie = zero_complex({0, 1});
  CHECK_THROWS_AS(dominant(tie, {mono(1, 1), mono(1, 0)}), std::domain_error);
}

TEST_CASE("normal bases against exact row reduction") {
  auto v = zero_complex({0, Rational(1, 2)});
  auto nb1 = normal_basis(v, {v.basis_chain(0)});
  REQUIRE(nb1.size() == 1);
  CHECK(nb1[0] == v.basis_chain(0));

  std::vector<Chain> span = {{mono(1, 0), mono(1, 1)}, v.basis_chain(1)};
  auto nb = normal_basis(v, span);
  REQUIRE(nb.size() == 2);
  CHECK(same_span(nb, span, 2));
  std::vector<std::size_t> doms;
  for (const auto& x : nb) {
    CHECK(is_normalized(v, x));
    doms.push_back(dominant(v, x).index);
  }
  std::sort(doms.begin(), doms.end());
  CHECK(doms == std::vector<std::size_t>{0, 1});

  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    auto c = random_generic(rng, random_options(rng, 6));
    std::vector<Chain> spanning;
    for (std::size_t i = 0; i < c.dim() + 2; ++i) spanning.push_back(random_chain(rng, c, 0.7));
    for (std::size_t i = 0; i < c.dim(); ++i) spanning.push_back(c.basis_chain(i));
    auto basis = normal_basis(c, spanning);
    CHECK(basis.size() == c.dim());
    CHECK(same_span(basis, spanning, c.dim()));
    std::vector<std::size_t> dom;
    for (const auto& x : basis) {
      CHECK(is_normalized(c, x));
      dom.push_back(dominant(c, x).index);
    }
    CHECK(distinct(dom));
  }
}

TEST_CASE("normal systems are independent and realize the max formula") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 40; ++trial) {
    auto c = random_generic(rng, random_options(rng, 6));
    std::vector<Chain> spanning;
    std::uniform_int_distribution<std::size_t> k(1, c.dim());
    std::size_t m = k(rng);
    for (std::size_t i = 0; i < m; ++i) spanning.push_back(random_chain(rng, c, 0.6));
    auto basis = normal_basis(c, spanning);
    CHECK(same_span(basis, spanning, c.dim()));
    ExactMatrix<NovikovScalar> rows(basis.size(), c.dim(), c.zero());
    for (std::size_t r = 0; r < basis.size(); ++r) {
      for (std::size_t j = 0; j < c.dim(); ++j) rows(r, j) = basis[r][j];
    }
    CHECK(rank(rows) == basis.size());

    for (int combo = 0; combo < 5; ++combo) {
      Chain sum = c.zero_chain();
      ExtRational expected;
      for (const auto& e : basis) {
        auto lambda = random_chain(rng, c, 0.7)[0];
        if (lambda.is_zero()) continue;
        Chain term = e;
        for (auto& x : term) x *= lambda;
        sum = add(sum, term);
        expected = max(expected, filter_value(c, term));
      }
      CHECK(filter_value(c, sum) == expected);
    }
  }
}

TEST_CASE("spectral bases: counts and rank oracle") {
  auto z = zero_complex({0, Rational(1, 2), Rational(1, 3)});
  auto sb0 = spectral_basis(z);
  CHECK(sb0.p() == 3);
  CHECK(sb0.q() == 0);
  for (std::size_t i = 0; i < 3; ++i) CHECK(sb0.h_part[i] == z.basis_chain(sb0.h_dominant[i]));

  auto acyclic = spectral_basis(two_cell(Rational(1, 2), 0));
  CHECK(acyclic.p() == 0);
  CHECK(acyclic.q() == 1);
  CHECK(acyclic.x_part == std::vector<std::size_t>{1});

  CHECK_THROWS_AS(spectral_basis(zero_complex({0, 1})), std::domain_error);

  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 40; ++trial) {
    auto opts = random_options(rng, 6);
    opts.min_dim = 6;
    opts.max_dim = 6;
    auto c = random_generic(rng, opts);
    REQUIRE(validate(c).empty());
    auto sb = spectral_basis(c);
    auto r = rank(c.differential());
    CHECK(sb.q() == r);
    CHECK(sb.p() == c.dim() - 2 * r);
    CHECK(sb.x_part.size() + sb.g_part.size() + sb.h_part.size() == c.dim());
    std::vector<Chain> image;
    for (std::size_t j = 0; j < c.dim(); ++j) image.push_back(c.differential().column(j));
    CHECK(same_span(sb.g_part, image, c.dim()));
    std::vector<std::size_t> dom = sb.g_dominant;
    dom.insert(dom.end(), sb.h_dominant.begin(), sb.h_dominant.end());
    dom.insert(dom.end(), sb.x_part.begin(), sb.x_part.end());
    CHECK(distinct(dom));
    for (const auto* part : {&sb.g_part, &sb.h_part}) {
      for (const auto& x : *part) {
        CHECK(is_normalized(c, x));
        CHECK(c.apply(x) == c.zero_chain());
      }
    }
  }
}

TEST_CASE("spectral invariants of simple complexes") {
  auto z = zero_complex({Rational(1, 3), Rational(-2, 5), Rational(7, 4)});
  SpectralData data(z);
  for (std::size_t i = 0; i < z.dim(); ++i) {
    CHECK(data.spectral_invariant_of_cycle(z.basis_chain(i)) == ExtRational(z.basis()[i].filter));
  }
  CHECK_FALSE(data.spectral_invariant_of_cycle(z.zero_chain()).is_finite());
  CHECK_THROWS_AS(SpectralData(two_cell(Rational(1, 2), 0)).class_of({mono(0, 0), mono(1, 0)}), std::invalid_argument);

  // x1 is a boundary, so a cycle x1 + s^{-2} x3 sits in the class of s^{-2} x3.
  ExactMatrix<NovikovScalar> d(3, 3, NovikovScalar::zero(Q));
  d(0, 1) = mono(1, -1);
  DecoratedComplex v(Q, PeriodGroup(1), {{"x1", 1, Rational(1, 2)}, {"x2", 0, 0}, {"x3", 1, Rational(1, 3)}}, d);
  REQUIRE(validate(v).empty());
  SpectralData sd(v);
  CHECK(sd.spectral_invariant_of_cycle({mono(1, 0), mono(0, 0), mono(1, -2)}) == ExtRational(Rational(-5, 3)));
}

TEST_CASE("spectral invariant is the minimum over random representatives") {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 15; ++trial) {
    auto opts = random_options(rng, 6);
    opts.min_dim = 6;
    opts.max_dim = 6;
    auto c = random_generic(rng, opts);
    SpectralData data(c);
    if (data.basis().p() == 0) continue;
    auto cycle = random_cycle(rng, c, data);
    auto a = data.class_of(cycle);
    auto value = data.spectral_invariant(a);
    auto canonical = data.canonical_representative(a);
    CHECK(filter_value(c, canonical) == value);
    CHECK(data.class_of(canonical).coeffs == a.coeffs);
    for (int k = 0; k < 50; ++k) {
      auto rep = random_representative(rng, c, cycle);
      CHECK(data.class_of(rep).coeffs == a.coeffs);
      CHECK(filter_value(c, rep) >= value);
    }
  }
}

TEST_CASE("characteristic-exponent inequality c(a+b) ≤ max(c(a), c(b))") {
  std::mt19937_64 rng(15);
  int pairs = 0;
  while (pairs < 200) {
    auto c = random_generic(rng, random_options(rng, 8));
    SpectralData data(c);
    if (data.basis().p() == 0) continue;
    for (int k = 0; k < 10; ++k, ++pairs) {
      auto u = random_cycle(rng, c, data);
      auto w = random_cycle(rng, c, data);
      CHECK(data.spectral_invariant_of_cycle(add(u, w)) <=
            max(data.spectral_invariant_of_cycle(u), data.spectral_invariant_of_cycle(w)));
    }
  }
}

TEST_CASE("spectral invariants do not depend on basis order") {
  std::mt19937_64 rng(16);
  for (int trial = 0; trial < 20; ++trial) {
    auto c = random_generic(rng, random_options(rng, 8));
    SpectralData data(c);
    std::vector<Chain> cycles;
    for (int k = 0; k < 5; ++k) cycles.push_back(random_cycle(rng, c, data));
    std::vector<std::size_t> perm(c.dim());
    std::iota(perm.begin(), perm.end(), 0);
    for (int run = 0; run < 5; ++run) {
      std::shuffle(perm.begin(), perm.end(), rng);
      SpectralData shuffled(permute_basis(c, perm));
      for (const auto& z : cycles) {
        CHECK(shuffled.spectral_invariant_of_cycle(permute_chain(z, perm)) == data.spectral_invariant_of_cycle(z));
      }
    }
  }
}

TEST_CASE("rescaling preferred vectors by s^α leaves invariants unchanged") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    auto opts = random_options(rng, 6);
    auto c = random_generic(rng, opts);
    std::uniform_int_distribution<int> shift(-3, 3);
    std::vector<Rational> alpha;
    for (std::size_t i = 0; i < c.dim(); ++i) alpha.push_back(c.gamma().generator() * shift(rng));
    // x'_i = s^{α_i} x_i: F' = F + α and d'(i, j) = s^{α_j - α_i} d(i, j).
    auto basis = c.basis();
    ExactMatrix<NovikovScalar> d(c.dim(), c.dim(), c.zero());
    for (std::size_t i = 0; i < c.dim(); ++i) {
      basis[i].filter += alpha[i];
      for (std::size_t j = 0; j < c.dim(); ++j) {
        if (!c.differential()(i, j).is_zero()) d(i, j) = c.differential()(i, j) * mono(1, alpha[j] - alpha[i]);
      }
    }
    DecoratedComplex scaled(Q, c.gamma(), basis, d);
    REQUIRE(validate(scaled).empty());
    SpectralData a(c), b(scaled);
    for (int k = 0; k < 5; ++k) {
      auto z = random_cycle(rng, c, a);
      Chain z2 = z;
      for (std::size_t i = 0; i < c.dim(); ++i) {
        if (!z2[i].is_zero()) z2[i] *= mono(1, -alpha[i]);
      }
      CHECK(b.spectral_invariant_of_cycle(z2) == a.spectral_invariant_of_cycle(z));
    }
  }
}

TEST_CASE("tensor products") {
  std::mt19937_64 rng(18);
  auto unit = DecoratedComplex(Q, PeriodGroup(0), {{"u", 0, 0}});
  for (int trial = 0; trial < 10; ++trial) {
    auto c = random_complex(rng, random_options(rng, 6));
    auto t = tensor(c, unit);
    CHECK(t.differential() == c.differential());
    for (std::size_t i = 0; i < c.dim(); ++i) {
      CHECK(t.basis()[i].filter == c.basis()[i].filter);
      CHECK(t.basis()[i].parity == c.basis()[i].parity);
    }
  }
  for (int trial = 0; trial < 100; ++trial) {
    auto field = trial % 4 == 0 ? BaseField::F2 : Q;
    auto a = random_complex(rng, random_options(rng, 6, field));
    auto b = random_complex(rng, random_options(rng, 6, field));
    auto t = tensor(a, b);
    auto diags = validate(t);
    CHECK_MESSAGE(diags.empty(), (diags.empty() ? "" : diags.front().check + " " + diags.front().detail));
    CHECK(t.gamma() == group_sum(a.gamma(), b.gamma()));
    for (std::size_t p = 0; p < a.dim(); ++p) {
      for (std::size_t q = 0; q < b.dim(); ++q) {
        CHECK(t.basis()[p * b.dim() + q].filter == a.basis()[p].filter + b.basis()[q].filter);
      }
    }
    CHECK(homology_dim(t) == homology_dim(a) * homology_dim(b));
  }
}

TEST_CASE("product formula with zero differentials") {
  auto a = zero_complex({Rational(1, 3), Rational(1, 5)}, PeriodGroup(1));
  auto b = zero_complex({Rational(1, 7), Rational(1, 11)}, PeriodGroup(1));
  REQUIRE(in_general_position(a, b));
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      auto rep = verify_product_formula(a, b, a.basis_chain(i), b.basis_chain(j));
      CHECK(rep.equal);
      CHECK(rep.lhs == ExtRational(a.basis()[i].filter + b.basis()[j].filter));
    }
  }
  auto c = zero_complex({0, Rational(1, 2)});
  CHECK_THROWS_AS(verify_product_formula(c, c, c.basis_chain(0), c.basis_chain(1)), std::domain_error);
}

TEST_CASE("product formula on random generic pairs") {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 30; ++trial) {
    auto o1 = random_options(rng, 6);
    auto o2 = random_options(rng, 6);
    Rational eps = std::min(min_gap(o1), min_gap(o2)) / 4;
    auto [a, b] = make_generic_pair(random_complex(rng, o1), random_complex(rng, o2), eps);
    REQUIRE(in_general_position(a, b));
    SpectralData da(a), db(b);
    if (da.basis().p() == 0 || db.basis().p() == 0) continue;
    auto z1 = random_cycle(rng, a, da);
    auto z2 = random_cycle(rng, b, db);
    auto rep = verify_product_formula(a, b, z1, z2);
    CHECK(rep.equal);
    // The product value is a lower bound over representatives of the product class.
    auto t = tensor(a, b);
    auto zt = tensor_chain(a, b, z1, z2);
    for (int k = 0; k < 5; ++k) CHECK(filter_value(t, random_representative(rng, t, zt)) >= rep.lhs);
  }
}

TEST_CASE("perturbation laws") {
  std::mt19937_64 rng(20);
  for (int trial = 0; trial < 20; ++trial) {
    auto c = random_generic(rng, random_options(rng, 6));
    SpectralData data(c);
    std::vector<Chain> cycles;
    for (int k = 0; k < 4; ++k) cycles.push_back(random_cycle(rng, c, data));

    SpectralData shifted(perturb_filter(c, Rational(3)));
    SpectralData same(perturb_filter(c, std::vector<Rational>(c.dim(), 0)));
    for (const auto& z : cycles) {
      auto v = data.spectral_invariant_of_cycle(z);
      CHECK(shifted.spectral_invariant_of_cycle(z) == (v.is_finite() ? ExtRational(v.value() + 3) : v));
      CHECK(same.spectral_invariant_of_cycle(z) == v);
    }
  }
  // Random δ with sup-norm 1/10 on complexes whose filter gap exceeds 1/5.
  int done = 0;
  while (done < 20) {
    auto opts = random_options(rng, 6);
    opts.filter_denominator = 7;
    auto c = random_generic(rng, opts);
    auto gap = filter_gap(c);
    if (gap && *gap <= Rational(1, 5)) continue;
    std::vector<Rational> delta(c.dim());
    std::uniform_int_distribution<int> num(-97, 97);
    for (auto& x : delta) x = Rational(num(rng), 970);
    delta[0] = Rational(1, 10);
    auto perturbed = perturb_filter(c, delta);
    if (!is_generic(perturbed)) continue;
    std::vector<Rational> up(c.dim());
    for (std::size_t i = 0; i < c.dim(); ++i) up[i] = abs(delta[i]);
    auto raised = perturb_filter(c, up);
    if (!is_generic(raised)) continue;
    ++done;
    SpectralData d0(c), d1(perturbed), d2(raised);
    for (int k = 0; k < 4; ++k) {
      auto z = random_cycle(rng, c, d0);
      auto base = d0.spectral_invariant_of_cycle(z);
      auto moved = d1.spectral_invariant_of_cycle(z);
      auto high = d2.spectral_invariant_of_cycle(z);
      CHECK(base <= high);
      if (!base.is_finite()) {
        CHECK_FALSE(moved.is_finite());
        continue;
      }
      CHECK(abs(Rational(moved.value() - base.value())) <= Rational(1, 10));
    }
  }
  CHECK_THROWS_AS(perturb_filter(two_cell(Rational(1, 2), 0), std::vector<Rational>{Rational(2), 0}),
                  std::invalid_argument);
}

TEST_CASE("make_generic") {
  auto g = zero_complex({0, Rational(1, 2)});
  CHECK(make_generic(g, Rational(1, 7)) == g);

  auto v = zero_complex({0, 1});
  auto out = make_generic(v, Rational(1, 7));
  CHECK(is_generic(out));
  for (std::size_t i = 0; i < 2; ++i) CHECK(abs(Rational(out.basis()[i].filter - v.basis()[i].filter)) <= Rational(1, 7));
  auto down = make_generic(v, Rational(1, 7), PerturbDirection::Down);
  auto up = make_generic(v, Rational(1, 7), PerturbDirection::Up);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(down.basis()[i].filter <= v.basis()[i].filter);
    CHECK(up.basis()[i].filter >= v.basis()[i].filter);
  }

  auto [a, b] = make_generic_pair(v, zero_complex({Rational(1, 2), Rational(3, 2)}), Rational(1, 7));
  CHECK(is_generic(a));
  CHECK(is_generic(b));
  CHECK(is_generic(tensor(a, b)));

  // Separating x1 from x0 lifts it above F(x2) = 1/10, so d x2 = x1 stops decreasing.
  ExactMatrix<NovikovScalar> d(3, 3, NovikovScalar::zero(Q));
  d(1, 2) = mono(1, 0);
  DecoratedComplex tight(Q, PeriodGroup(0), {{"x0", 1, 0}, {"x1", 1, 0}, {"x2", 0, Rational(1, 10)}}, d);
  REQUIRE(validate(tight).empty());
  CHECK_THROWS_AS(make_generic(tight, Rational(1, 2)), std::invalid_argument);
  CHECK(is_generic(make_generic(tight, Rational(1, 20))));
}

TEST_CASE("non-generic pairs through one-sided perturbations") {
  std::mt19937_64 rng(21);
  int done = 0;
  while (done < 20) {
    auto opts = random_options(rng, 5);
    opts.filter_denominator = 1;  // integer filters: never generic for Γ ⊇ ℤ
    auto a = random_complex(rng, opts);
    auto b = random_complex(rng, opts);
    if (is_generic(a) && is_generic(b)) continue;
    auto eps = Rational(1, 4 * opts.gamma_denominator);
    auto sa = SpectralData(make_generic(a, eps));
    auto sb = SpectralData(make_generic(b, eps));
    if (sa.basis().p() == 0 || sb.basis().p() == 0) continue;
    auto z1 = random_cycle(rng, a, sa);
    auto z2 = random_cycle(rng, b, sb);
    auto rep = verify_product_formula_perturbed(a, b, z1, z2, eps);
    CHECK(rep.within_bound);
    auto ia = spectral_interval(a, z1, eps);
    CHECK(ia.lower <= ia.upper);
    if (ia.lower.is_finite()) CHECK(Rational(ia.upper.value() - ia.lower.value()) <= 2 * eps);
    ++done;
  }
}
