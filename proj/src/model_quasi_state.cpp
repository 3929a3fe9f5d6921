#include "rigidkit/model_quasi_state.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "rigidkit/exact_matrix.hpp"

namespace rigidkit {

namespace {

/// Barycentric coordinates of p in the simplex, or nullopt if degenerate.
std::optional<std::vector<Rational>> barycentric(const PLFunction& f, const std::vector<std::size_t>& simplex,
                                                 const RationalPoint& p) {
  const std::size_t k = p.size();
  ExactMatrix<Rational> a(k + 1, simplex.size(), Rational(0));
  std::vector<Rational> rhs(p);
  rhs.push_back(1);
  for (std::size_t c = 0; c < simplex.size(); ++c) {
    for (std::size_t r = 0; r < k; ++r) a(r, c) = f.vertices[simplex[c]][r];
    a(k, c) = 1;
  }
  if (rank(a) != simplex.size()) return std::nullopt;
  return solve(a, rhs, Rational(0));
}

bool nonnegative(const std::vector<Rational>& w) {
  return std::all_of(w.begin(), w.end(), [](const Rational& x) { return x >= 0; });
}

bool simplex_contains(const PLFunction& f, const std::vector<std::size_t>& simplex, const RationalPoint& p) {
  auto w = barycentric(f, simplex, p);
  return w && nonnegative(*w);
}

Rational simplex_volume(const PLFunction& f, const std::vector<std::size_t>& simplex) {
  const std::size_t k = f.vertices.front().size();
  // Gaussian elimination on the edge matrix.
  std::vector<RationalPoint> rows;
  for (std::size_t i = 1; i <= k; ++i) {
    RationalPoint r(k);
    for (std::size_t j = 0; j < k; ++j) r[j] = f.vertices[simplex[i]][j] - f.vertices[simplex[0]][j];
    rows.push_back(std::move(r));
  }
  Rational det = 1;
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t p = c;
    while (p < k && rows[p][c] == 0) ++p;
    if (p == k) return 0;
    std::swap(rows[p], rows[c]);
    det *= rows[c][c];
    for (std::size_t r = c + 1; r < k; ++r) {
      Rational m = rows[r][c] / rows[c][c];
      for (std::size_t j = c; j < k; ++j) rows[r][j] -= m * rows[c][j];
    }
  }
  Integer fact = 1;
  for (std::size_t i = 2; i <= k; ++i) fact *= static_cast<unsigned long>(i);
  return abs(det) / Rational(fact);
}

std::string point_string(const RationalPoint& p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + p[i].get_str();
  return s + ")";
}

RationalPoint random_interior(const DelzantPolytope& p, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> weight(1, 6);
  RationalPoint x(p.dimension(), Rational(0));
  Rational total = 0;
  for (const auto& v : p.vertices()) {
    Rational w = weight(rng);
    total += w;
    for (std::size_t j = 0; j < x.size(); ++j) x[j] += w * v[j];
  }
  for (auto& c : x) c /= total;
  return x;
}

/// Deterministic pairwise summation.
double pairwise_sum(const double* x, std::size_t n) {
  if (n <= 8) {
    double s = 0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  return pairwise_sum(x, n / 2) + pairwise_sum(x + n / 2, n - n / 2);
}

template <class Fn>
void parallel_for(std::size_t n, int jobs, Fn&& fn) {
  const auto workers = static_cast<std::size_t>(std::max(1, jobs));
  if (workers == 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < std::min(workers, n); ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

std::optional<Rational> PLFunction::evaluate(const RationalPoint& p) const {
  std::optional<Rational> out;
  for (const auto& s : simplices) {
    auto w = barycentric(*this, s, p);
    if (!w || !nonnegative(*w)) continue;
    Rational v = 0;
    for (std::size_t i = 0; i < s.size(); ++i) v += (*w)[i] * values[s[i]];
    if (out && *out != v) throw std::logic_error("PL function is discontinuous at " + point_string(p));
    out = v;
  }
  return out;
}

void validate(const PLFunction& f, const DelzantPolytope* domain) {
  if (f.vertices.empty()) throw std::invalid_argument("pl-function: no vertices");
  const std::size_t k = f.vertices.front().size();
  if (k == 0) throw std::invalid_argument("pl-function: zero-dimensional vertices");
  for (const auto& v : f.vertices) {
    if (v.size() != k) throw std::invalid_argument("pl-function: vertices have mixed dimensions");
  }
  if (f.values.size() != f.vertices.size()) throw std::invalid_argument("pl-function: one value per vertex required");
  if (f.simplices.empty()) throw std::invalid_argument("pl-function: no simplices");
  Rational covered = 0;
  for (std::size_t i = 0; i < f.simplices.size(); ++i) {
    const auto& s = f.simplices[i];
    if (s.size() != k + 1) throw std::invalid_argument("pl-function: simplex " + std::to_string(i) + " has wrong size");
    for (auto v : s) {
      if (v >= f.vertices.size()) throw std::invalid_argument("pl-function: simplex " + std::to_string(i) + " index out of range");
    }
    Rational vol = simplex_volume(f, s);
    if (vol == 0) throw std::invalid_argument("pl-function: simplex " + std::to_string(i) + " is degenerate");
    covered += vol;
  }
  if (domain) {
    if (domain->dimension() != k) throw std::invalid_argument("pl-function: dimension differs from the polytope");
    for (std::size_t i = 0; i < f.vertices.size(); ++i) {
      if (!domain->contains(f.vertices[i])) {
        throw std::invalid_argument("pl-function: vertex " + std::to_string(i) + " lies outside the polytope");
      }
    }
    if (covered != domain->volume()) throw std::invalid_argument("pl-function: simplices do not cover the polytope");
  }
}

PLFunction scaled(const PLFunction& f, const Rational& alpha) {
  PLFunction g = f;
  for (auto& v : g.values) v *= alpha;
  return g;
}

PLFunction shifted(const PLFunction& f, const Rational& c) {
  PLFunction g = f;
  for (auto& v : g.values) v += c;
  return g;
}

PLFunction sum(const PLFunction& f, const PLFunction& g) {
  if (!f.same_triangulation(g)) throw std::invalid_argument("sum: triangulations differ");
  PLFunction h = f;
  for (std::size_t i = 0; i < h.values.size(); ++i) h.values[i] += g.values[i];
  return h;
}

bool pointwise_leq(const PLFunction& f, const PLFunction& g) {
  if (!f.same_triangulation(g)) throw std::invalid_argument("pointwise_leq: triangulations differ");
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    if (f.values[i] > g.values[i]) return false;
  }
  return true;
}

PLFunction stellar_refine(const PLFunction& f, const RationalPoint& p) {
  if (std::find(f.vertices.begin(), f.vertices.end(), p) != f.vertices.end()) return f;
  auto value = f.evaluate(p);
  if (!value) throw std::invalid_argument("stellar_refine: point outside the triangulation");
  PLFunction g;
  g.vertices = f.vertices;
  g.values = f.values;
  g.vertices.push_back(p);
  g.values.push_back(*value);
  const std::size_t apex = g.vertices.size() - 1;
  for (const auto& s : f.simplices) {
    auto w = barycentric(f, s, p);
    if (!w || !nonnegative(*w)) {
      g.simplices.push_back(s);
      continue;
    }
    for (std::size_t i = 0; i < s.size(); ++i) {
      if ((*w)[i] == 0) continue;
      auto t = s;
      t[i] = apex;
      g.simplices.push_back(std::move(t));
    }
  }
  return g;
}

PLFunction constant_on(const DelzantPolytope& p, const Rational& c) {
  PLFunction f;
  f.vertices = p.vertices();
  f.simplices = p.triangulation();
  f.values.assign(f.vertices.size(), c);
  return f;
}

PLFunction random_pl_function(const DelzantPolytope& p, std::mt19937_64& rng, int refinements, int range) {
  std::uniform_int_distribution<int> num(-12 * range, 12 * range);
  auto draw = [&] {
    Rational r(num(rng), 12);
    r.canonicalize();
    return r;
  };
  PLFunction f = constant_on(p, 0);
  for (auto& v : f.values) v = draw();
  for (int i = 0; i < refinements; ++i) {
    f = stellar_refine(f, random_interior(p, rng));
    f.values.back() = draw();
  }
  return f;
}

ModelState::ModelState(MomentData moment) : moment_(std::move(moment)), p_spec_(special_point(moment_).point) {}

Rational zeta(const ModelState& s, const PLFunction& f) {
  auto v = f.evaluate(s.p_spec());
  if (!v) throw std::domain_error("p_spec " + point_string(s.p_spec()) + " is outside the function's domain");
  return *v;
}

bool AxiomReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const AxiomCheck& c) { return c.violations.empty(); });
}

AxiomReport axiom_suite(const ModelState& s, const std::vector<PLFunction>& sample) {
  auto named = [](const char* name) {
    AxiomCheck c;
    c.name = name;
    return c;
  };
  AxiomCheck homog = named("semi-homogeneity"), mono = named("monotonicity"), constants = named("constants"),
             triangle = named("triangle"), lipschitz = named("lipschitz"), normal = named("normalization"),
             vanish = named("vanishing");
  const std::vector<Rational> alphas{Rational(0), Rational(1, 3), Rational(2), Rational(7, 2)};
  const std::vector<Rational> shifts{Rational(-5), Rational(1, 7), Rational(5)};
  auto tag = [](std::size_t i, const std::string& what) { return "sample " + std::to_string(i) + ": " + what; };

  for (std::size_t i = 0; i < sample.size(); ++i) {
    const auto& f = sample[i];
    const Rational zf = zeta(s, f);

    PLFunction one = f;
    std::fill(one.values.begin(), one.values.end(), Rational(1));
    ++normal.instances;
    if (zeta(s, one) != 1) normal.violations.push_back(tag(i, "ζ(1) = " + zeta(s, one).get_str()));

    for (const auto& a : alphas) {
      ++homog.instances;
      Rational lhs = zeta(s, scaled(f, a));
      if (lhs != a * zf) homog.violations.push_back(tag(i, "α = " + a.get_str()));
    }
    for (const auto& c : shifts) {
      ++constants.instances;
      if (zeta(s, shifted(f, c)) != zf + c) constants.violations.push_back(tag(i, "c = " + c.get_str()));
    }

    // Partners on the same triangulation: a nonnegative bump above f and a
    // permuted copy.
    PLFunction above = f, other = f;
    const std::size_t n = f.values.size();
    for (std::size_t j = 0; j < n; ++j) {
      above.values[j] += Rational(static_cast<long>(j % 3), 4);
      other.values[j] = f.values[n - 1 - j] - Rational(1, 2);
    }
    for (const auto* g : {&above, &other}) {
      const Rational zg = zeta(s, *g);
      if (pointwise_leq(f, *g)) {
        ++mono.instances;
        if (zf > zg) mono.violations.push_back(tag(i, "ζ(f) > ζ(g) with f ≤ g"));
      }
      if (pointwise_leq(*g, f)) {
        ++mono.instances;
        if (zg > zf) mono.violations.push_back(tag(i, "ζ(g) > ζ(f) with g ≤ f"));
      }
      ++triangle.instances;
      if (zeta(s, sum(f, *g)) > zf + zg) triangle.violations.push_back(tag(i, "ζ(f+g) > ζ(f)+ζ(g)"));
      Rational gap = 0;
      for (std::size_t j = 0; j < n; ++j) gap = std::max(gap, Rational(abs(f.values[j] - g->values[j])));
      ++lipschitz.instances;
      if (abs(zf - zg) > gap) lipschitz.violations.push_back(tag(i, "|ζ(f) − ζ(g)| exceeds the sup distance"));
    }

    // Hat functions at vertices whose star misses p_spec, supported in the
    // star's hull when a certificate exists.
    if (!s.moment().compressible) continue;
    for (std::size_t w = 0; w < n; ++w) {
      if (f.values[w] == 0) continue;
      std::vector<RationalPoint> star;
      bool touches = false;
      for (const auto& simplex : f.simplices) {
        if (std::find(simplex.begin(), simplex.end(), w) == simplex.end()) continue;
        touches = touches || simplex_contains(f, simplex, s.p_spec());
        for (auto v : simplex) star.push_back(f.vertices[v]);
      }
      if (touches || star.empty()) continue;
      if (!stable_displaceability_certificate(s.moment(), ConvexBody{star})) continue;
      PLFunction hat = f;
      std::fill(hat.values.begin(), hat.values.end(), Rational(0));
      hat.values[w] = f.values[w];
      ++vanish.instances;
      if (zeta(s, hat) != 0) vanish.violations.push_back(tag(i, "nonzero on a certified-displaceable support at vertex " + std::to_string(w)));
    }
  }
  return {{homog, mono, constants, triangle, lipschitz, normal, vanish}};
}

bool contains(const ConvexBody& body, const RationalPoint& p) {
  if (body.generators.empty()) return false;
  std::vector<RationalPoint> moved;
  for (const auto& g : body.generators) {
    RationalPoint d(p.size());
    for (std::size_t j = 0; j < p.size(); ++j) d[j] = g[j] - p[j];
    moved.push_back(std::move(d));
  }
  return !separate_origin(moved).functional;
}

bool disjoint(const ConvexBody& a, const ConvexBody& b) {
  std::vector<RationalPoint> diff;
  for (const auto& x : a.generators) {
    for (const auto& y : b.generators) {
      RationalPoint d(x.size());
      for (std::size_t j = 0; j < x.size(); ++j) d[j] = x[j] - y[j];
      diff.push_back(std::move(d));
    }
  }
  return separate_origin(diff).functional.has_value();
}

HeavyReport model_heavy(const ModelState& s, const std::vector<ConvexBody>& union_of) {
  HeavyReport r;
  r.test_class = "pullbacks of continuous functions on the moment polytope; ζ is evaluation at p_spec";
  for (std::size_t i = 0; i < union_of.size(); ++i) {
    if (contains(union_of[i], s.p_spec())) {
      r.heavy = true;
      r.witness = i;
      break;
    }
  }
  return r;
}

std::vector<ConvexBody> random_disjoint_family(const ModelState& s, std::mt19937_64& rng, std::size_t count,
                                               bool cover_special) {
  const auto& poly = s.moment().polytope;
  std::uniform_int_distribution<int> shrink(3, 8);
  std::vector<ConvexBody> family;
  for (int attempt = 0; family.size() < count && attempt < 2000; ++attempt) {
    RationalPoint c = (cover_special && family.empty()) ? s.p_spec() : random_interior(poly, rng);
    // A shrunk copy of Δ around c stays inside Δ by convexity.
    Rational t(1, 4 * shrink(rng));
    ConvexBody body;
    for (const auto& v : poly.vertices()) {
      RationalPoint g(c.size());
      for (std::size_t j = 0; j < c.size(); ++j) g[j] = c[j] + t * (v[j] - c[j]);
      body.generators.push_back(std::move(g));
    }
    bool ok = std::all_of(family.begin(), family.end(), [&](const ConvexBody& b) { return disjoint(b, body); });
    if (ok) family.push_back(std::move(body));
  }
  if (family.size() < count) throw std::runtime_error("could not place a disjoint family of that size");
  return family;
}

bool intersection_property(const ModelState& s, const std::vector<ConvexBody>& family) {
  for (std::size_t i = 0; i < family.size(); ++i) {
    for (std::size_t j = i + 1; j < family.size(); ++j) {
      if (!disjoint(family[i], family[j])) {
        throw std::invalid_argument("bodies " + std::to_string(i) + " and " + std::to_string(j) + " intersect");
      }
    }
  }
  std::size_t heavy = 0;
  for (const auto& b : family) heavy += model_heavy(s, {b}).heavy ? 1 : 0;
  return heavy <= 1;
}

FourierReport fourier_reduction_demo(const ModelState& s, const SmoothSampler& h, double radius, double eps,
                                     const FourierOptions& opt) {
  const std::size_t k = s.p_spec().size();
  if (k > 2) throw std::invalid_argument("Fourier demo supports k <= 2");
  if (h.box.size() != k) throw std::invalid_argument("sampler box has the wrong dimension");
  if (!(radius > 0) || !(eps > 0)) throw std::invalid_argument("R and ε must be positive");
  if (opt.grid < 2) throw std::invalid_argument("quadrature grid needs at least 2 nodes");
  if (!h.f) throw std::invalid_argument("sampler has no callback");
  for (const auto& [lo, hi] : h.box) {
    if (!(hi > lo)) throw std::invalid_argument("sampler box is empty");
  }

  const auto n = static_cast<std::size_t>(opt.grid);
  std::vector<std::vector<double>> nodes(k), weights(k);
  for (std::size_t a = 0; a < k; ++a) {
    const auto [lo, hi] = h.box[a];
    const double step = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
      nodes[a].push_back(lo + step * static_cast<double>(i));
      weights[a].push_back(i == 0 || i + 1 == n ? step / 2 : step);
    }
  }
  std::vector<double> ps;
  for (const auto& x : s.p_spec()) ps.push_back(x.get_d());

  // Samples, row-major in the first coordinate.
  const std::size_t cols = k == 2 ? n : 1;
  std::vector<double> samples(n * cols);
  double peak = 0, edge = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      std::vector<double> x{nodes[0][i]};
      if (k == 2) x.push_back(nodes[1][j]);
      double v = h.f(x);
      if (!std::isfinite(v)) throw std::domain_error("sampler returned a non-finite value");
      samples[i * cols + j] = v;
      peak = std::max(peak, std::abs(v));
      bool boundary = i == 0 || i + 1 == n || (k == 2 && (j == 0 || j + 1 == n));
      if (boundary) edge = std::max(edge, std::abs(v));
    }
  }
  if (peak > 0 && edge > opt.tail_tolerance * peak) {
    std::ostringstream os;
    os << "sampler does not decay: boundary/peak = " << edge / peak;
    throw std::domain_error(os.str());
  }
  const double norm = std::pow(2 * std::numbers::pi, static_cast<double>(k));
  const double h_spec = h.f(ps);

  // Per-lattice-point contributions ε^k K_v(⟨v, p_spec⟩) inside B(radius),
  // ordered lexicographically in the integer coordinates.
  struct Lattice {
    std::vector<std::pair<long, long>> index;
    std::vector<double> term;
  };
  auto lattice_sum = [&](double e) {
    const long m = static_cast<long>(std::floor(radius / e + 1e-9));
    const double r2 = (radius / e) * (radius / e) + 1e-9;
    std::vector<long> m1s;
    for (long i = -m; i <= m; ++i) m1s.push_back(i);
    std::vector<Lattice> rows(m1s.size());
    parallel_for(m1s.size(), opt.jobs, [&](std::size_t r) {
      const long i = m1s[r];
      const double v1 = e * static_cast<double>(i);
      // Partial sums over the first coordinate.
      std::vector<double> ac(cols, 0), as(cols, 0);
      for (std::size_t a = 0; a < n; ++a) {
        const double c = std::cos(v1 * nodes[0][a]) * weights[0][a];
        const double sn = std::sin(v1 * nodes[0][a]) * weights[0][a];
        for (std::size_t j = 0; j < cols; ++j) {
          ac[j] += c * samples[a * cols + j];
          as[j] += sn * samples[a * cols + j];
        }
      }
      const long jmax = k == 2 ? static_cast<long>(std::floor(std::sqrt(std::max(0.0, r2 - double(i) * double(i))))) : 0;
      for (long jj = -jmax; jj <= jmax; ++jj) {
        const double v2 = e * static_cast<double>(jj);
        double c_sum = 0, s_sum = 0;  // ∫H cos⟨v,x⟩, ∫H sin⟨v,x⟩
        if (k == 1) {
          c_sum = ac[0];
          s_sum = as[0];
        } else {
          for (std::size_t j = 0; j < n; ++j) {
            const double c = std::cos(v2 * nodes[1][j]) * weights[1][j];
            const double sn = std::sin(v2 * nodes[1][j]) * weights[1][j];
            c_sum += ac[j] * c - as[j] * sn;
            s_sum += as[j] * c + ac[j] * sn;
          }
        }
        const double f_coef = s_sum / norm, g_coef = c_sum / norm;
        const double arg = v1 * ps[0] + (k == 2 ? v2 * ps[1] : 0.0);
        rows[r].index.emplace_back(i, jj);
        rows[r].term.push_back(std::pow(e, static_cast<double>(k)) * (std::sin(arg) * f_coef + std::cos(arg) * g_coef));
      }
    });
    Lattice all;
    for (auto& row : rows) {
      all.index.insert(all.index.end(), row.index.begin(), row.index.end());
      all.term.insert(all.term.end(), row.term.begin(), row.term.end());
    }
    return all;
  };
  auto restrict_sum = [&](const Lattice& l, double e, double r) {
    const double r2 = (r / e) * (r / e) + 1e-9;
    std::vector<double> kept;
    for (std::size_t t = 0; t < l.term.size(); ++t) {
      const double i = static_cast<double>(l.index[t].first), j = static_cast<double>(l.index[t].second);
      if (i * i + j * j <= r2) kept.push_back(l.term[t]);
    }
    return std::make_pair(pairwise_sum(kept.data(), kept.size()), kept.size());
  };

  FourierReport rep;
  rep.h_at_spec = h_spec;
  for (double e : {4 * eps, 2 * eps, eps}) {
    Lattice l = lattice_sum(e);
    for (double r : {radius / 4, radius / 2, radius}) {
      auto [z, count] = restrict_sum(l, e, r);
      rep.table.push_back({r, e, count, z, std::abs(z - h_spec)});
    }
  }
  rep.zeta = rep.table.back().zeta;
  rep.error = rep.table.back().error;
  return rep;
}

}  // namespace rigidkit
