#include "rigidkit/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace rigidkit {

namespace {

/// Tallies named checks; a suite passes when every tally is clean.
class Ledger {
 public:
  void check(const std::string& name, bool ok) {
    auto& t = tallies_[name];
    ++t.first;
    if (!ok) ++t.second;
  }
  bool clean(const std::string& name) const {
    auto it = tallies_.find(name);
    return it != tallies_.end() && it->second.second == 0;
  }
  bool all_clean() const {
    return std::all_of(tallies_.begin(), tallies_.end(), [](const auto& t) { return t.second.second == 0; });
  }
  std::size_t count(const std::string& name) const {
    auto it = tallies_.find(name);
    return it == tallies_.end() ? 0 : it->second.first;
  }
  std::size_t passed(const std::string& name) const {
    auto it = tallies_.find(name);
    return it == tallies_.end() ? 0 : it->second.first - it->second.second;
  }
  Json json() const {
    Json j = Json::object();
    for (const auto& [name, t] : tallies_) j[name] = {{"checked", t.first}, {"failed", t.second}};
    return j;
  }
  /// "name a/b" for every tally, failures first.
  std::string summary() const {
    std::vector<std::string> bad, good;
    for (const auto& [name, t] : tallies_) {
      std::string s = name + " " + std::to_string(t.first - t.second) + "/" + std::to_string(t.first);
      (t.second ? bad : good).push_back(s);
    }
    bad.insert(bad.end(), good.begin(), good.end());
    std::string out;
    for (const auto& s : bad) out += (out.empty() ? "" : ", ") + s;
    return out;
  }

 private:
  std::map<std::string, std::pair<std::size_t, std::size_t>> tallies_;
};

// ------------------------------------------------------------ ring-cpn

SuiteResult ring_cpn(std::uint64_t, int) {
  SuiteResult r;
  Ledger led;
  for (int n = 1; n <= 4; ++n) {
    auto alg = builtin_algebra("cp" + std::to_string(n), BaseField::F2);
    auto bad = check_axioms(alg);
    led.check("axioms", bad.empty());
    auto rep = is_semisimple(alg);
    led.check("semisimple", rep.verdict == Semisimplicity::Semisimple && rep.method == "power-irreducibility");
    r.facts["cp" + std::to_string(n)] = {{"axiom_violations", bad.size()},
                                         {"verdict", to_string(rep.verdict)},
                                         {"method", rep.method}};
  }
  r.pass = led.all_clean();
  r.detail = "CP^1..CP^4 over F2: " + led.summary();
  r.facts["checks"] = led.json();
  return r;
}

// -------------------------------------------------------------- quadric

SuiteResult quadric(std::uint64_t, int) {
  SuiteResult r;
  Ledger led;
  const auto f = BaseField::Qmodel;
  auto alg = builtin_algebra("quadric", f);
  led.check("axioms", check_axioms(alg).empty());
  auto M = alg.unity();
  auto p = alg.point();
  auto A = alg.element(*alg.basis().find("A"));
  auto B = alg.element(*alg.basis().find("B"));
  auto half = NovikovScalar::constant(f, Rational(1, 2));
  auto w = LambdaElement::term(NovikovScalar::monomial(f, 1, 1), 2);
  auto winv = LambdaElement::term(NovikovScalar::monomial(f, 1, -1), -2);
  auto a_plus = half * (M + w * p);
  auto a_minus = half * (M - w * p);
  led.check("idempotent", is_idempotent(alg, a_plus));
  led.check("idempotent", is_idempotent(alg, a_minus));
  led.check("orthogonal", qprod(alg, a_plus, a_minus).is_zero());
  led.check("sum", a_plus + a_minus == M);
  led.check("p*p", qprod(alg, p, p) == (winv * winv) * M);
  auto x = divide(alg, B - A, a_minus);
  led.check("divide", x && qprod(alg, B - A, *x) == a_minus);
  auto s2 = builtin_algebra("s2", f);
  auto prod = kunneth(s2, s2);
  bool same_shape = prod.rank() == alg.rank() && prod.basis().unity == alg.basis().unity &&
                    prod.basis().point == alg.basis().point && prod.gamma() == alg.gamma();
  led.check("kunneth-shape", same_shape);
  if (same_shape) {
    for (std::size_t i = 0; i < alg.rank(); ++i) {
      led.check("kunneth-entry", prod.basis().classes[i].degree == alg.basis().classes[i].degree);
      for (std::size_t j = 0; j < alg.rank(); ++j) led.check("kunneth-entry", prod.product(i, j) == alg.product(i, j));
    }
  }
  r.pass = led.all_clean();
  r.detail = "S2xS2 over Qmodel: " + led.summary();
  r.facts["checks"] = led.json();
  r.facts["a_plus"] = to_string(alg, a_plus);
  r.facts["a_minus"] = to_string(alg, a_minus);
  if (x) r.facts["quotient"] = to_string(alg, *x);
  return r;
}

// ------------------------------------------------------ complex-product

RandomComplexOptions complex_options(std::mt19937_64& rng, std::size_t max_dim) {
  std::uniform_int_distribution<int> den(1, 12);
  RandomComplexOptions o;
  o.max_dim = max_dim;
  o.gamma_denominator = den(rng);
  return o;
}

Rational min_gap(const RandomComplexOptions& o) { return Rational(1, o.gamma_denominator * o.filter_denominator); }

Chain add(const Chain& a, const Chain& b) {
  Chain out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += b[i];
  return out;
}

SuiteResult complex_product(std::uint64_t seed, int) {
  SuiteResult r;
  Ledger led;
  std::mt19937_64 rng(seed);

  std::size_t pairs = 0, max_product_dim = 0;
  while (pairs < 200) {
    auto o1 = complex_options(rng, 8);
    auto o2 = complex_options(rng, 8);
    Rational eps = std::min(min_gap(o1), min_gap(o2)) / 4;
    auto [a, b] = make_generic_pair(random_complex(rng, o1), random_complex(rng, o2), eps);
    SpectralData da(a), db(b);
    if (da.basis().p() == 0 || db.basis().p() == 0) continue;
    ++pairs;
    led.check("general-position", in_general_position(a, b));
    auto rep = verify_product_formula(a, b, random_cycle(rng, a, da), random_cycle(rng, b, db));
    led.check("product", rep.equal);
    max_product_dim = std::max(max_product_dim, a.dim() * b.dim());
  }

  // Shift, monotonicity and Lipschitz laws.
  std::size_t law_complexes = 0;
  while (law_complexes < 50) {
    auto opts = complex_options(rng, 8);
    opts.filter_denominator = 7;
    auto c = make_generic(random_complex(rng, opts), min_gap(opts) / 4);
    auto gap = filter_gap(c);
    if (gap && *gap <= Rational(1, 5)) continue;
    std::vector<Rational> delta(c.dim());
    std::uniform_int_distribution<int> num(-97, 97);
    for (auto& d : delta) d = Rational(num(rng), 970);
    delta[0] = Rational(1, 10);
    std::vector<Rational> up(c.dim());
    for (std::size_t i = 0; i < c.dim(); ++i) up[i] = abs(delta[i]);
    DecoratedComplex moved = c, raised = c;
    try {
      moved = perturb_filter(c, delta);
      raised = perturb_filter(c, up);
    } catch (const std::invalid_argument&) {
      continue;
    }
    if (!is_generic(moved) || !is_generic(raised)) continue;
    ++law_complexes;
    Rational theta(7, 3);
    SpectralData d0(c), d_shift(perturb_filter(c, theta)), d_moved(moved), d_raised(raised);
    for (int k = 0; k < 4; ++k) {
      auto z = random_cycle(rng, c, d0);
      auto base = d0.spectral_invariant_of_cycle(z);
      auto shifted = d_shift.spectral_invariant_of_cycle(z);
      led.check("shift", shifted == (base.is_finite() ? ExtRational(base.value() + theta) : base));
      led.check("monotone", base <= d_raised.spectral_invariant_of_cycle(z));
      auto m = d_moved.spectral_invariant_of_cycle(z);
      if (base.is_finite() != m.is_finite()) {
        led.check("lipschitz", false);
      } else if (base.is_finite()) {
        led.check("lipschitz", abs(Rational(m.value() - base.value())) <= Rational(1, 10));
      }
    }
  }

  std::size_t sums = 0;
  while (sums < 200) {
    auto c = make_generic(random_complex(rng, complex_options(rng, 8)), Rational(1, 4 * 12 * 13));
    SpectralData data(c);
    if (data.basis().p() == 0) continue;
    for (int k = 0; k < 10 && sums < 200; ++k, ++sums) {
      auto u = random_cycle(rng, c, data);
      auto w = random_cycle(rng, c, data);
      led.check("sum-max", data.spectral_invariant_of_cycle(add(u, w)) <=
                               max(data.spectral_invariant_of_cycle(u), data.spectral_invariant_of_cycle(w)));
    }
  }

  for (int trial = 0; trial < 20; ++trial) {
    auto o = complex_options(rng, 8);
    auto c = make_generic(random_complex(rng, o), min_gap(o) / 4);
    SpectralData data(c);
    std::vector<Chain> cycles;
    for (int k = 0; k < 5; ++k) cycles.push_back(random_cycle(rng, c, data));
    std::vector<std::size_t> perm(c.dim());
    std::iota(perm.begin(), perm.end(), 0);
    for (int run = 0; run < 5; ++run) {
      std::shuffle(perm.begin(), perm.end(), rng);
      SpectralData shuffled(permute_basis(c, perm));
      for (const auto& z : cycles) {
        led.check("shuffle", shuffled.spectral_invariant_of_cycle(permute_chain(z, perm)) ==
                                 data.spectral_invariant_of_cycle(z));
      }
    }
  }

  r.pass = led.all_clean();
  r.detail = led.summary();
  r.facts["checks"] = led.json();
  r.facts["max_product_dim"] = max_product_dim;
  return r;
}

// ---------------------------------------------------------------- index

LagrangianFrame random_lagrangian(std::mt19937_64& rng, int k) { return {random_symplectic(rng, k) * q_plane(k).columns}; }

SuiteResult index_suite(std::uint64_t seed, int jobs) {
  SuiteResult r;
  Ledger led;
  std::mt19937_64 rng(seed);

  double worst_snap = 0;
  for (int l = 1; l <= 5; ++l) {
    auto m = maslov_loop(SymplecticPath::from(rotation_loop(1, l)));
    led.check("maslov", m.halves == 4 * l && m.snap_residual < 1e-6);
    worst_snap = std::max(worst_snap, m.snap_residual);
  }
  r.facts["maslov_snap_residual"] = worst_snap;

  for (int trial = 0; trial < 50; ++trial) {
    auto path = SymplecticPath::from(random_path(rng, 1 + trial % 2));
    led.check("cz-doubled", cz_matr(path).halves == cz_matr_doubled(path).halves);
  }

  // Literal formula on general transversal pairs, with the rotation-generated
  // family and the composed generating function reported alongside.
  double worst_literal = 0;
  for (int k = 1; k <= 2; ++k) {
    for (bool rotation : {false, true}) {
      int done = 0;
      while (done < 100) {
        auto a = SymplecticPath::from(rotation ? random_rotation_path(rng, k, 2.5) : random_path(rng, k));
        auto b = SymplecticPath::from(rotation ? random_rotation_path(rng, k, 2.5) : random_path(rng, k));
        LerayReport rep;
        try {
          rep = leray_verify(a, b);
        } catch (const std::invalid_argument&) {
          continue;  // not transversal
        }
        ++done;
        if (rotation) {
          led.check("leray-rotation-generated", rep.residual < 1e-6);
        } else {
          led.check("leray", rep.residual < 1e-6);
          worst_literal = std::max(worst_literal, rep.residual);
          led.check("leray-composition-form", rep.composition_residual < 1e-6);
        }
      }
    }
  }
  r.facts["leray_worst_residual"] = worst_literal;

  double worst_natural = 0;
  for (int trial = 0; trial < 50; ++trial) {
    int k = 1 + trial % 2;
    auto path = SymplecticPath::from(random_path(rng, k));
    auto v = random_lagrangian(rng, k);
    Mat b = random_symplectic(rng, k);
    auto lhs = ind(path.conjugated(b), {b * v.columns});
    auto rhs = ind(path, v);
    double res = std::abs(lhs.raw - rhs.raw);
    worst_natural = std::max(worst_natural, res);
    led.check("naturality", lhs.halves == rhs.halves && res < 1e-6);
  }
  r.facts["naturality_worst_residual"] = worst_natural;

  // The corpus bound was recorded at seed 1; other seeds get one unit of slack.
  std::mt19937_64 corpus(seed);
  auto s1 = sample_defect(corpus, 1, 200, {}, jobs);
  auto s2 = sample_defect(corpus, 2, 200, {}, jobs);
  double defect = std::max(s1.max_defect, s2.max_defect);
  double bound = seed == 1 ? kDefectCorpusBound : kDefectCorpusBound + 1;
  led.check("qm-defect", std::isfinite(defect) && defect <= bound && s1.failures + s2.failures == 0);
  r.facts["qm_defect"] = {{"max", defect}, {"bound", bound}, {"failures", s1.failures + s2.failures}};

  r.pass = led.all_clean();
  std::ostringstream d;
  d << led.summary() << "; literal Leray worst residual " << worst_literal;
  r.detail = d.str();
  r.facts["checks"] = led.json();
  return r;
}

// ---------------------------------------------------------------- toric

SuiteResult toric_suite(std::uint64_t, int) {
  SuiteResult r;
  Ledger led;
  Json balls = Json::array();
  for (int n = 1; n <= 4; ++n) {
    auto m = projective_space(n);
    Rational edge(n, n + 1);
    std::vector<Rational> rs{Rational(1, n + 1), Rational(1, 2), edge - Rational(1, 10 * (n + 1)), edge,
                             (edge + 1) / 2, Rational(1)};
    for (auto& x : rs) x.canonicalize();
    std::sort(rs.begin(), rs.end());
    rs.erase(std::unique(rs.begin(), rs.end()), rs.end());
    for (const auto& rad : rs) {
      bool cert = stable_displaceability_certificate(m, ball_subpolytope(n, rad)).has_value();
      led.check("ball", cert == (rad <= edge));
      led.check("ball-strict", cert == (rad < edge));
      balls.push_back({{"n", n}, {"r", to_string(rad)}, {"certificate", cert}});
    }
  }
  r.facts["balls"] = balls;

  std::vector<std::pair<std::string, MomentData>> data{{"CP2", projective_space(2)},
                                                       {"CP1xCP1", quadric_square()},
                                                       {"blowup1", blowup_projective_plane(1)},
                                                       {"blowup2", blowup_projective_plane(2)},
                                                       {"blowup3", blowup_projective_plane(3)}};
  for (const auto& [name, m] : data) {
    SpecialPoint sp = special_point(m);
    bool independent = std::all_of(sp.per_vertex.begin(), sp.per_vertex.end(),
                                   [&](const RationalPoint& x) { return x == sp.point; });
    led.check("pspec-vertex-independent", independent);
    led.check("pspec-vertex-average", sp.point == sp.vertex_average);
    led.check("pspec-interior", m.polytope.interior(sp.point));
    if (name == "CP2" || name == "CP1xCP1") {
      led.check("pspec-origin", std::all_of(sp.point.begin(), sp.point.end(), [](const Rational& x) { return x == 0; }));
    }
    Json pt = Json::array();
    for (const auto& x : sp.point) pt.push_back(to_string(x));
    r.facts["pspec"][name] = pt;
  }

  r.pass = led.all_clean();
  r.detail = led.summary();
  if (!led.clean("ball") && led.clean("ball-strict")) {
    r.detail += "; certificates exist exactly for r < n/(n+1), the boundary r = n/(n+1) has none";
  }
  r.facts["checks"] = led.json();
  return r;
}

// --------------------------------------------------------------- qstate

SuiteResult qstate_suite(std::uint64_t seed, int jobs) {
  SuiteResult r;
  Ledger led;
  std::mt19937_64 rng(seed);
  ModelState s(projective_space(2));

  std::vector<PLFunction> sample;
  for (int i = 0; i < 50; ++i) sample.push_back(random_pl_function(s.moment().polytope, rng, 4));
  auto axioms = axiom_suite(s, sample);
  for (const auto& c : axioms.checks) {
    led.check("axiom-" + c.name, c.violations.empty() && c.instances > 0);
    r.facts["axioms"][c.name] = {{"instances", c.instances}, {"violations", c.violations.size()}};
  }

  for (int t = 0; t < 20; ++t) {
    auto family = random_disjoint_family(s, rng, 3 + t % 4, t % 2 == 0);
    led.check("intersection", intersection_property(s, family));
  }

  SmoothSampler h;
  std::vector<double> center;
  for (const auto& x : s.p_spec()) center.push_back(x.get_d());
  h.f = [center](const std::vector<double>& x) {
    double r2 = 0;
    for (std::size_t i = 0; i < x.size(); ++i) r2 += (x[i] - center[i]) * (x[i] - center[i]);
    return std::exp(-r2 / 2);
  };
  for (double c : center) h.box.emplace_back(c - 8, c + 8);
  FourierOptions opt;
  opt.jobs = jobs;
  auto rep = fourier_reduction_demo(s, h, 10.0, 0.05, opt);
  led.check("fourier", rep.error <= 1e-3);
  r.facts["fourier"] = {{"zeta", rep.zeta}, {"h_at_spec", rep.h_at_spec}, {"error", rep.error}};

  r.pass = led.all_clean();
  std::ostringstream d;
  d << led.summary() << "; Fourier |zeta - H(p_spec)| = " << rep.error;
  r.detail = d.str();
  r.facts["checks"] = led.json();
  return r;
}

struct SuiteEntry {
  std::string name;
  double budget;
  std::function<SuiteResult(std::uint64_t, int)> run;
};

const std::vector<SuiteEntry>& registry() {
  static const std::vector<SuiteEntry> entries{
      {"ring-cpn", 5, ring_cpn},          {"quadric", 5, quadric}, {"complex-product", 60, complex_product},
      {"index", 120, index_suite},        {"toric", 5, toric_suite}, {"qstate", 30, qstate_suite},
  };
  return entries;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& e : registry()) out.push_back(e.name);
    return out;
  }();
  return names;
}

SuiteResult run_suite(std::string_view name, std::uint64_t seed, int jobs) {
  for (const auto& e : registry()) {
    if (e.name != name) continue;
    auto start = std::chrono::steady_clock::now();
    SuiteResult r = e.run(seed, jobs);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.name = e.name;
    r.budget = e.budget;
    if (r.seconds >= e.budget) {
      r.pass = false;
      r.detail += "; over the " + std::to_string(static_cast<int>(e.budget)) + " s budget";
    }
    return r;
  }
  throw std::invalid_argument("unknown suite '" + std::string(name) + "'");
}

}  // namespace rigidkit
