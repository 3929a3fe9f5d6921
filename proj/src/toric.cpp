#include "rigidkit/toric.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "rigidkit/exact_matrix.hpp"

namespace rigidkit {

namespace {

using Points = std::vector<RationalPoint>;
using Index = std::vector<std::size_t>;

RationalPoint sub(const RationalPoint& a, const RationalPoint& b) {
  RationalPoint out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

Rational dot(const RationalPoint& a, const RationalPoint& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Rational dot(const IntVector& a, const RationalPoint& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += Rational(a[i]) * b[i];
  return s;
}

bool is_zero(const RationalPoint& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& x) { return x == 0; });
}

ExactMatrix<Rational> rows_of(const Points& rows, std::size_t cols) {
  ExactMatrix<Rational> m(rows.size(), cols, Rational(0));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = rows[r][c];
  }
  return m;
}

Rational determinant(Points rows) {
  const std::size_t n = rows.size();
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && rows[p][c] == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      std::swap(rows[p], rows[c]);
      det = -det;
    }
    det *= rows[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      if (rows[r][c] == 0) continue;
      Rational f = rows[r][c] / rows[c][c];
      for (std::size_t j = c; j < n; ++j) rows[r][j] -= f * rows[c][j];
    }
  }
  return det;
}

Integer factorial(std::size_t n) {
  Integer f = 1;
  for (std::size_t i = 2; i <= n; ++i) f *= static_cast<unsigned long>(i);
  return f;
}

/// Coordinates of `points` in an affine frame of their hull.
Points local_coordinates(const Points& points) {
  const std::size_t dim = points.front().size();
  Points diffs;
  for (const auto& p : points) diffs.push_back(sub(p, points.front()));
  // Independent directions from the differences, in order.
  Points basis;
  for (const auto& d : diffs) {
    Points trial = basis;
    trial.push_back(d);
    if (rank(rows_of(trial, dim)) == trial.size()) basis = std::move(trial);
  }
  ExactMatrix<Rational> b(dim, basis.size(), Rational(0));
  for (std::size_t c = 0; c < basis.size(); ++c) {
    for (std::size_t r = 0; r < dim; ++r) b(r, c) = basis[c][r];
  }
  Points out;
  for (const auto& d : diffs) out.push_back(*solve(b, d, Rational(0)));
  return out;
}

struct RawFacet {
  RationalPoint normal;  // inward
  Rational offset;
  Index on;
};

/// Facets of a full-dimensional point set in Q^d by exhaustive search over
/// d-subsets. The inward side holds the remaining points.
std::vector<RawFacet> hull_facets(const Points& pts) {
  const std::size_t d = pts.front().size();
  const std::size_t m = pts.size();
  std::vector<RawFacet> out;
  std::map<Index, bool> seen;
  if (d == 1) {
    auto [lo, hi] = std::minmax_element(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a[0] < b[0]; });
    out.push_back({{Rational(1)}, (*lo)[0], {static_cast<std::size_t>(lo - pts.begin())}});
    out.push_back({{Rational(-1)}, -(*hi)[0], {static_cast<std::size_t>(hi - pts.begin())}});
    return out;
  }
  Index pick(d);
  std::function<void(std::size_t, std::size_t)> choose = [&](std::size_t pos, std::size_t from) {
    if (pos == d) {
      Points diffs;
      for (std::size_t i = 1; i < d; ++i) diffs.push_back(sub(pts[pick[i]], pts[pick[0]]));
      auto ns = nullspace(rows_of(diffs, d), Rational(0));
      if (ns.size() != 1) return;
      RationalPoint normal = ns.front();
      Rational offset = dot(normal, pts[pick[0]]);
      int sign = 0;
      Index on;
      for (std::size_t i = 0; i < m; ++i) {
        int s = sgn(Rational(dot(normal, pts[i]) - offset));
        if (s == 0) {
          on.push_back(i);
        } else if (sign == 0) {
          sign = s;
        } else if (s != sign) {
          return;
        }
      }
      if (sign == 0 || seen.count(on)) return;
      seen[on] = true;
      if (sign < 0) {
        for (auto& x : normal) x = -x;
        offset = -offset;
      }
      out.push_back({normal, offset, on});
      return;
    }
    for (std::size_t i = from; i + (d - pos) <= m; ++i) {
      pick[pos] = i;
      choose(pos + 1, i + 1);
    }
  };
  choose(0, 0);
  return out;
}

/// Pulling triangulation of conv(pts) (affine dimension d) as index simplices.
std::vector<Index> pulling(const Points& pts) {
  if (pts.size() == 1) return {{0}};
  Points local = local_coordinates(pts);
  if (local.front().empty()) return {{0}};
  std::vector<Index> out;
  for (const auto& f : hull_facets(local)) {
    if (std::find(f.on.begin(), f.on.end(), 0) != f.on.end()) continue;
    Points face;
    for (auto i : f.on) face.push_back(pts[i]);
    for (const auto& s : pulling(face)) {
      Index simplex{0};
      for (auto i : s) simplex.push_back(f.on[i]);
      out.push_back(std::move(simplex));
    }
  }
  return out;
}

Rational simplex_volume(const Points& pts, const Index& s) {
  Points rows;
  for (std::size_t i = 1; i < s.size(); ++i) rows.push_back(sub(pts[s[i]], pts[s[0]]));
  return abs(determinant(rows)) / Rational(factorial(rows.size()));
}

}  // namespace

std::size_t affine_dimension(const std::vector<RationalPoint>& points) {
  if (points.empty()) return 0;
  Points diffs;
  for (const auto& p : points) diffs.push_back(sub(p, points.front()));
  return rank(rows_of(diffs, points.front().size()));
}

IntVector primitive(const RationalPoint& v) {
  if (is_zero(v)) throw std::invalid_argument("primitive: zero vector");
  Integer l = 1;
  for (const auto& x : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  IntVector out;
  Integer g = 0;
  for (const auto& x : v) {
    Rational y = x * Rational(l);
    out.push_back(y.get_num());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), out.back().get_mpz_t());
  }
  for (auto& x : out) x /= g;
  return out;
}

DelzantPolytope::DelzantPolytope(std::vector<RationalPoint> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.empty()) throw std::invalid_argument("polytope needs vertices");
  k_ = vertices_.front().size();
  if (k_ == 0 || k_ > 4) throw std::invalid_argument("polytope dimension must be between 1 and 4");
  for (const auto& v : vertices_) {
    if (v.size() != k_) throw std::invalid_argument("vertices have mixed dimensions");
  }
  if (affine_dimension(vertices_) != k_) throw std::invalid_argument("polytope is not full-dimensional");
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    Points others;
    for (std::size_t j = 0; j < vertices_.size(); ++j) {
      if (j == i) continue;
      if (vertices_[j] == vertices_[i]) throw std::invalid_argument("repeated vertex " + std::to_string(i));
      others.push_back(sub(vertices_[j], vertices_[i]));
    }
    if (!separate_origin(others).functional) {
      throw std::invalid_argument("vertex " + std::to_string(i) + " is not an extreme point");
    }
  }
  for (auto& f : hull_facets(vertices_)) facets_.push_back({primitive(f.normal), 0, f.on});
  for (auto& f : facets_) f.offset = dot(f.normal, vertices_[f.vertices.front()]);

  for (std::size_t u = 0; u < vertices_.size(); ++u) {
    for (std::size_t v = u + 1; v < vertices_.size(); ++v) {
      Points normals;
      std::vector<const Facet*> common;
      for (const auto& f : facets_) {
        bool hu = std::binary_search(f.vertices.begin(), f.vertices.end(), u);
        bool hv = std::binary_search(f.vertices.begin(), f.vertices.end(), v);
        if (hu && hv) common.push_back(&f);
      }
      for (const auto* f : common) {
        RationalPoint n;
        for (const auto& x : f->normal) n.emplace_back(x);
        normals.push_back(std::move(n));
      }
      if ((normals.empty() ? 0 : rank(rows_of(normals, k_))) != k_ - 1) continue;
      std::size_t on_all = 0;
      for (std::size_t w = 0; w < vertices_.size(); ++w) {
        bool all = std::all_of(common.begin(), common.end(), [&](const Facet* f) {
          return std::binary_search(f->vertices.begin(), f->vertices.end(), w);
        });
        on_all += all ? 1 : 0;
      }
      if (on_all == 2) edges_.push_back({u, v, primitive(sub(vertices_[v], vertices_[u]))});
    }
  }
}

std::vector<Edge> DelzantPolytope::edges_at(std::size_t vertex) const {
  std::vector<Edge> out;
  for (const auto& e : edges_) {
    if (e.from == vertex) out.push_back(e);
    if (e.to == vertex) {
      IntVector d = e.direction;
      for (auto& x : d) x = -x;
      out.push_back({vertex, e.from, d});
    }
  }
  return out;
}

bool DelzantPolytope::contains(const RationalPoint& p) const {
  if (p.size() != k_) throw std::invalid_argument("point has the wrong dimension");
  return std::all_of(facets_.begin(), facets_.end(), [&](const Facet& f) { return dot(f.normal, p) >= f.offset; });
}

bool DelzantPolytope::interior(const RationalPoint& p) const {
  if (p.size() != k_) throw std::invalid_argument("point has the wrong dimension");
  return std::all_of(facets_.begin(), facets_.end(), [&](const Facet& f) { return dot(f.normal, p) > f.offset; });
}

std::vector<std::vector<std::size_t>> DelzantPolytope::triangulation() const { return pulling(vertices_); }

Rational DelzantPolytope::volume() const {
  Rational v = 0;
  for (const auto& s : triangulation()) v += simplex_volume(vertices_, s);
  return v;
}

RationalPoint DelzantPolytope::centroid() const {
  RationalPoint c(k_, Rational(0));
  Rational total = 0;
  for (const auto& s : triangulation()) {
    Rational vol = simplex_volume(vertices_, s);
    total += vol;
    for (auto i : s) {
      for (std::size_t j = 0; j < k_; ++j) c[j] += vol * vertices_[i][j] / Rational(static_cast<long>(s.size()));
    }
  }
  for (auto& x : c) x /= total;
  return c;
}

DelzantPolytope DelzantPolytope::translated(const RationalPoint& shift) const {
  auto vs = vertices_;
  for (auto& v : vs) {
    for (std::size_t j = 0; j < k_; ++j) v[j] += shift[j];
  }
  return DelzantPolytope(std::move(vs));
}

Normalized normalize(const DelzantPolytope& p) {
  RationalPoint shift = p.centroid();
  for (auto& x : shift) x = -x;
  return {p.translated(shift), shift};
}

std::vector<DelzantFailure> delzant_verify(const DelzantPolytope& p) {
  std::vector<DelzantFailure> out;
  const std::size_t k = p.dimension();
  for (std::size_t v = 0; v < p.vertices().size(); ++v) {
    DelzantFailure f;
    f.vertex = v;
    Points rows;
    for (const auto& e : p.edges_at(v)) {
      f.edge_matrix.push_back(e.direction);
      RationalPoint r;
      for (const auto& x : e.direction) r.emplace_back(x);
      rows.push_back(std::move(r));
    }
    if (rows.size() != k) {
      f.reason = "vertex has " + std::to_string(rows.size()) + " edges, expected " + std::to_string(k);
      out.push_back(std::move(f));
      continue;
    }
    f.determinant = determinant(rows).get_num();
    if (abs(f.determinant) != 1) {
      f.reason = "primitive edge directions have |det| = " + Integer(abs(f.determinant)).get_str();
      out.push_back(std::move(f));
    }
  }
  return out;
}

std::string describe(const DelzantFailure& f) {
  std::ostringstream os;
  os << "vertex " << f.vertex << ": " << f.reason << "; edges";
  for (const auto& e : f.edge_matrix) {
    os << " (";
    for (std::size_t i = 0; i < e.size(); ++i) os << (i ? "," : "") << e[i].get_str();
    os << ")";
  }
  return os.str();
}

SpecialPoint special_point(const MomentData& m) {
  if (!m.kappa) throw std::invalid_argument("special point needs κ");
  const auto& p = m.polytope;
  if (!is_zero(p.centroid())) throw std::invalid_argument("polytope is not normalized");
  auto failures = delzant_verify(p);
  if (!failures.empty()) throw std::invalid_argument("polytope is not Delzant: " + describe(failures.front()));
  const std::size_t k = p.dimension();
  SpecialPoint sp;
  sp.vertex_average.assign(k, Rational(0));
  for (std::size_t v = 0; v < p.vertices().size(); ++v) {
    RationalPoint x = p.vertices()[v];
    for (const auto& e : p.edges_at(v)) {
      for (std::size_t j = 0; j < k; ++j) x[j] += *m.kappa * Rational(e.direction[j]);
    }
    for (std::size_t j = 0; j < k; ++j) sp.vertex_average[j] += p.vertices()[v][j];
    sp.per_vertex.push_back(std::move(x));
  }
  for (auto& x : sp.vertex_average) x /= Rational(static_cast<long>(p.vertices().size()));
  for (const auto& x : sp.per_vertex) {
    if (x != sp.per_vertex.front()) {
      std::ostringstream os;
      os << "κ not monotone for this polytope:";
      for (const auto& y : sp.per_vertex) {
        os << " (";
        for (std::size_t j = 0; j < k; ++j) os << (j ? "," : "") << y[j].get_str();
        os << ")";
      }
      throw std::domain_error(os.str());
    }
  }
  sp.point = sp.per_vertex.front();
  return sp;
}

Separation separate_origin(const std::vector<RationalPoint>& points) {
  if (points.empty()) throw std::invalid_argument("separate_origin: no points");
  const std::size_t k = points.front().size();
  auto combine = [&](const Index& s, const std::vector<Rational>& w) {
    RationalPoint x(k, Rational(0));
    for (std::size_t i = 0; i < s.size(); ++i) {
      for (std::size_t j = 0; j < k; ++j) x[j] += w[i] * points[s[i]][j];
    }
    return x;
  };
  // Affine combination of the points in s closest to 0.
  auto affine_min = [&](const Index& s) {
    const std::size_t n = s.size();
    ExactMatrix<Rational> a(n + 1, n + 1, Rational(0));
    std::vector<Rational> rhs(n + 1, Rational(0));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) a(i, j) = dot(points[s[i]], points[s[j]]);
      a(i, n) = 1;
      a(n, i) = 1;
    }
    rhs[n] = 1;
    auto sol = solve(a, rhs, Rational(0));
    if (!sol) throw std::logic_error("Wolfe: affinely dependent corral");
    sol->pop_back();
    return *sol;
  };

  std::size_t start = 0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (dot(points[i], points[i]) < dot(points[start], points[start])) start = i;
  }
  Index s{start};
  std::vector<Rational> lambda{Rational(1)};
  RationalPoint x = points[start];
  while (true) {
    Rational xx = dot(x, x);
    std::size_t j = 0;
    for (std::size_t i = 1; i < points.size(); ++i) {
      if (dot(x, points[i]) < dot(x, points[j])) j = i;
    }
    if (dot(x, points[j]) >= xx || std::find(s.begin(), s.end(), j) != s.end()) break;
    s.push_back(j);
    lambda.push_back(0);
    while (true) {
      auto mu = affine_min(s);
      if (std::all_of(mu.begin(), mu.end(), [](const Rational& v) { return v > 0; })) {
        lambda = mu;
        x = combine(s, lambda);
        break;
      }
      std::optional<Rational> theta;
      for (std::size_t i = 0; i < s.size(); ++i) {
        if (mu[i] > 0) continue;
        Rational t = lambda[i] / (lambda[i] - mu[i]);
        if (!theta || t < *theta) theta = t;
      }
      for (std::size_t i = 0; i < s.size(); ++i) lambda[i] = (1 - *theta) * lambda[i] + *theta * mu[i];
      Index keep;
      std::vector<Rational> kept;
      for (std::size_t i = 0; i < s.size(); ++i) {
        if (lambda[i] > 0) {
          keep.push_back(s[i]);
          kept.push_back(lambda[i]);
        }
      }
      s = std::move(keep);
      lambda = std::move(kept);
      x = combine(s, lambda);
    }
  }

  Separation out;
  out.nearest = x;
  if (is_zero(x)) {
    out.support = s;
    out.weights = lambda;
  } else {
    out.functional = x;
  }
  return out;
}

std::optional<RationalPoint> stable_displaceability_certificate(const MomentData& m, const ConvexBody& y) {
  if (!m.compressible) throw std::invalid_argument("stable displaceability needs a compressible action");
  if (y.generators.empty()) throw std::invalid_argument("convex body has no generators");
  for (const auto& g : y.generators) {
    if (!m.polytope.contains(g)) throw std::invalid_argument("convex body is not inside the moment polytope");
  }
  auto sep = separate_origin(y.generators);
  if (!sep.functional) return std::nullopt;
  for (const auto& g : y.generators) {
    if (dot(*sep.functional, g) <= 0) throw std::logic_error("separating functional failed its exact check");
  }
  return sep.functional;
}

ConvexBody ball_subpolytope(int n, const Rational& r) {
  if (n < 1) throw std::invalid_argument("ball_subpolytope: n must be positive");
  if (!(r > 0 && r <= 1)) throw std::invalid_argument("ball_subpolytope: need 0 < r <= 1");
  Rational w = Rational(-1, n + 1);
  ConvexBody out;
  out.generators.emplace_back(n, w);
  for (int i = 0; i < n; ++i) {
    RationalPoint v(n, w);
    v[i] += r;
    out.generators.push_back(std::move(v));
  }
  return out;
}

FiberStatus fiber_status(const MomentData& m, const RationalPoint& p) {
  if (!m.polytope.contains(p)) throw std::invalid_argument("point is not in the moment polytope");
  if (m.kappa && special_point(m).point == p) return SuperheavySpecial{};
  if (m.compressible && !is_zero(p)) {
    if (auto f = stable_displaceability_certificate(m, ConvexBody{{p}})) return StablyDisplaceable{*f};
  }
  return Unknown{};
}

std::string to_string(const FiberStatus& s) {
  if (std::holds_alternative<SuperheavySpecial>(s)) return "superheavy-special";
  if (const auto* d = std::get_if<StablyDisplaceable>(&s)) {
    std::string out = "stably-displaceable (";
    for (std::size_t i = 0; i < d->certificate.size(); ++i) out += (i ? "," : "") + d->certificate[i].get_str();
    return out + ")";
  }
  return "unknown";
}

MomentData projective_space(int n) {
  if (n < 1 || n > 4) throw std::invalid_argument("projective_space: 1 <= n <= 4");
  Points vs;
  vs.emplace_back(n, Rational(0));
  for (int i = 0; i < n; ++i) {
    RationalPoint v(n, Rational(0));
    v[i] = 1;
    vs.push_back(std::move(v));
  }
  return {normalize(DelzantPolytope(vs)).polytope, Rational(1, n + 1), true};
}

MomentData quadric_square() {
  Rational h(1, 2);
  Points vs{{-h, -h}, {h, -h}, {h, h}, {-h, h}};
  return {DelzantPolytope(vs), h, true};
}

MomentData blowup_projective_plane(int points) {
  if (points < 1 || points > 3) throw std::invalid_argument("blowup_projective_plane: 1 to 3 points");
  const Rational c(1, 3);
  // Corners of the standard triangle, each replaced by two points at depth 1/3 when cut.
  const Points corners{{0, 0}, {1, 0}, {0, 1}};
  Points vs;
  for (int i = 0; i < 3; ++i) {
    const auto& x = corners[i];
    if (i >= points) {
      vs.push_back(x);
      continue;
    }
    const auto& prev = corners[(i + 2) % 3];
    const auto& next = corners[(i + 1) % 3];
    RationalPoint a(2), b(2);
    for (int j = 0; j < 2; ++j) {
      a[j] = x[j] + c * (prev[j] - x[j]);
      b[j] = x[j] + c * (next[j] - x[j]);
    }
    vs.push_back(a);
    vs.push_back(b);
  }
  return {normalize(DelzantPolytope(vs)).polytope, c, false};
}

}  // namespace rigidkit
