#include <algorithm>
#include <functional>
#include <random>

#include "doctest.h"
#include "rigidkit/exact_matrix.hpp"
#include "rigidkit/toric.hpp"

using namespace rigidkit;

namespace {

using Points = std::vector<RationalPoint>;

Rational q(long n, long d = 1) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}

Points cube(std::size_t k, const Rational& lo, const Rational& hi) {
  Points out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
    RationalPoint p;
    for (std::size_t i = 0; i < k; ++i) p.push_back((mask >> i) & 1 ? hi : lo);
    out.push_back(p);
  }
  return out;
}

Points simplex(std::size_t k) {
  Points out{RationalPoint(k, Rational(0))};
  for (std::size_t i = 0; i < k; ++i) {
    RationalPoint v(k, Rational(0));
    v[i] = 1;
    out.push_back(v);
  }
  return out;
}

Rational cross(const RationalPoint& o, const RationalPoint& a, const RationalPoint& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

/// Extreme points of a planar set: a point is dropped when it lies in a
/// triangle of three others.
Points planar_extreme(const Points& pts) {
  Points out;
  const std::size_t n = pts.size();
  for (std::size_t p = 0; p < n; ++p) {
    bool inside = false;
    for (std::size_t a = 0; a < n && !inside; ++a) {
      for (std::size_t b = a + 1; b < n && !inside; ++b) {
        for (std::size_t c = b + 1; c < n && !inside; ++c) {
          if (p == a || p == b || p == c) continue;
          int s1 = sgn(cross(pts[a], pts[b], pts[p]));
          int s2 = sgn(cross(pts[b], pts[c], pts[p]));
          int s3 = sgn(cross(pts[c], pts[a], pts[p]));
          inside = (s1 >= 0 && s2 >= 0 && s3 >= 0) || (s1 <= 0 && s2 <= 0 && s3 <= 0);
          if (sgn(cross(pts[a], pts[b], pts[c])) == 0) inside = false;
        }
      }
    }
    if (!inside && std::find(out.begin(), out.end(), pts[p]) == out.end()) out.push_back(pts[p]);
  }
  return out;
}

/// Shoelace area and centroid after sorting the hull counter-clockwise.
std::pair<Rational, RationalPoint> shoelace(Points hull) {
  RationalPoint lowest = *std::min_element(hull.begin(), hull.end());
  std::sort(hull.begin(), hull.end(), [&](const RationalPoint& a, const RationalPoint& b) {
    if (a == lowest) return b != lowest;
    if (b == lowest) return false;
    return sgn(cross(lowest, a, b)) > 0;
  });
  Rational area2 = 0, cx = 0, cy = 0;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const auto& a = hull[i];
    const auto& b = hull[(i + 1) % hull.size()];
    Rational c = a[0] * b[1] - b[0] * a[1];
    area2 += c;
    cx += (a[0] + b[0]) * c;
    cy += (a[1] + b[1]) * c;
  }
  return {area2 / 2, {cx / (3 * area2), cy / (3 * area2)}};
}

/// 0 ∈ conv(pts) by Carathéodory: some subset of at most k + 1 points has
/// nonnegative affine weights representing 0.
bool origin_in_hull(const Points& pts) {
  const std::size_t k = pts.front().size();
  const std::size_t n = pts.size();
  std::vector<std::size_t> pick;
  std::function<bool(std::size_t)> rec = [&](std::size_t from) -> bool {
    if (!pick.empty()) {
      ExactMatrix<Rational> a(k + 1, pick.size(), Rational(0));
      std::vector<Rational> rhs(k + 1, Rational(0));
      rhs[k] = 1;
      for (std::size_t c = 0; c < pick.size(); ++c) {
        for (std::size_t r = 0; r < k; ++r) a(r, c) = pts[pick[c]][r];
        a(k, c) = 1;
      }
      // Minimal subsets are affinely independent, so solutions are unique.
      if (rank(a) == pick.size()) {
        if (auto w = solve(a, rhs, Rational(0))) {
          if (std::all_of(w->begin(), w->end(), [](const Rational& x) { return x >= 0; })) return true;
        }
      }
    }
    if (pick.size() == k + 1) return false;
    for (std::size_t i = from; i < n; ++i) {
      pick.push_back(i);
      if (rec(i + 1)) return true;
      pick.pop_back();
    }
    return false;
  };
  return rec(0);
}

Rational random_rational(std::mt19937_64& rng, int range, int den) {
  std::uniform_int_distribution<int> num(-range * den, range * den);
  return q(num(rng), den);
}

RationalPoint vertex_sum(const Points& vs) {
  RationalPoint s(vs.front().size(), Rational(0));
  for (const auto& v : vs) {
    for (std::size_t i = 0; i < s.size(); ++i) s[i] += v[i];
  }
  return s;
}

}  // namespace

TEST_CASE("primitive vectors") {
  CHECK(primitive({q(2, 3), q(4, 3)}) == IntVector{1, 2});
  CHECK(primitive({q(-1, 2), q(0)}) == IntVector{-1, 0});
  CHECK(primitive({q(6), q(-9), q(3)}) == IntVector{2, -3, 1});
  CHECK_THROWS_AS(primitive({q(0), q(0)}), std::invalid_argument);
}

TEST_CASE("construction rejects bad vertex sets") {
  CHECK_THROWS_AS(DelzantPolytope({{q(0), q(0)}, {q(1), q(1)}, {q(2), q(2)}}), std::invalid_argument);
  CHECK_THROWS_AS(DelzantPolytope({{q(0), q(0)}, {q(1), q(0)}, {q(0), q(1)}, {q(1, 4), q(1, 4)}}), std::invalid_argument);
  CHECK_THROWS_AS(DelzantPolytope({{q(0), q(0)}, {q(1), q(0)}, {q(0), q(1)}, {q(1), q(0)}}), std::invalid_argument);
  CHECK_THROWS_AS(DelzantPolytope(cube(5, q(0), q(1))), std::invalid_argument);
  // A point on an edge is not extreme.
  CHECK_THROWS_AS(DelzantPolytope({{q(0), q(0)}, {q(2), q(0)}, {q(1), q(0)}, {q(0), q(1)}}), std::invalid_argument);
}

TEST_CASE("facets and edges of cubes and simplices") {
  for (std::size_t k = 1; k <= 4; ++k) {
    DelzantPolytope c(cube(k, q(0), q(1)));
    CHECK(c.facets().size() == 2 * k);
    CHECK(c.edges().size() == k * (std::size_t{1} << (k - 1)));
    CHECK(c.volume() == 1);
    DelzantPolytope s(simplex(k));
    CHECK(s.facets().size() == k + 1);
    CHECK(s.edges().size() == k * (k + 1) / 2);
    Integer fact = 1;
    for (std::size_t i = 2; i <= k; ++i) fact *= static_cast<unsigned long>(i);
    CHECK(s.volume() == Rational(1) / Rational(fact));
    for (const auto& f : c.facets()) {
      for (auto v : f.vertices) CHECK(c.contains(c.vertices()[v]));
    }
  }
}

TEST_CASE("normalize examples") {
  for (int n = 1; n <= 4; ++n) {
    auto [p, shift] = normalize(DelzantPolytope(simplex(n)));
    CHECK(shift == RationalPoint(n, Rational(-1, n + 1)));
    CHECK(p.centroid() == RationalPoint(n, Rational(0)));
  }
  auto sq = normalize(DelzantPolytope(cube(2, q(-3, 2), q(3, 2))));
  CHECK(sq.shift == RationalPoint{q(0), q(0)});
  auto seg = normalize(DelzantPolytope({{q(0)}, {q(1)}}));
  CHECK(seg.polytope.vertices() == Points{{q(-1, 2)}, {q(1, 2)}});
}

TEST_CASE("centroid matches the shoelace formula on random polygons") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    Points pts;
    for (int i = 0; i < 9; ++i) pts.push_back({random_rational(rng, 3, 4), random_rational(rng, 3, 4)});
    Points hull = planar_extreme(pts);
    if (affine_dimension(hull) < 2) continue;
    DelzantPolytope p(hull);
    auto [area, c] = shoelace(hull);
    CHECK(p.volume() == area);
    CHECK(p.centroid() == c);
    auto n = normalize(p);
    CHECK(n.polytope.centroid() == RationalPoint{q(0), q(0)});
    CHECK(normalize(n.polytope).shift == RationalPoint{q(0), q(0)});
  }
}

TEST_CASE("centroid and volume transform affinely in dimensions 3 and 4") {
  std::mt19937_64 rng(5);
  for (std::size_t k = 3; k <= 4; ++k) {
    for (int trial = 0; trial < 4; ++trial) {
      ExactMatrix<Rational> a(k, k, Rational(0));
      Points rows;
      do {
        rows.clear();
        for (std::size_t i = 0; i < k; ++i) {
          RationalPoint r;
          for (std::size_t j = 0; j < k; ++j) r.push_back(random_rational(rng, 2, 3));
          rows.push_back(r);
        }
        for (std::size_t i = 0; i < k; ++i) {
          for (std::size_t j = 0; j < k; ++j) a(i, j) = rows[i][j];
        }
      } while (rank(a) < k);
      RationalPoint b;
      for (std::size_t j = 0; j < k; ++j) b.push_back(random_rational(rng, 2, 5));
      auto image = [&](const RationalPoint& x) {
        RationalPoint y = mat_vec(a, x);
        for (std::size_t j = 0; j < k; ++j) y[j] += b[j];
        return y;
      };
      for (const Points& base : {cube(k, q(0), q(1)), simplex(k)}) {
        DelzantPolytope p(base);
        Points moved;
        for (const auto& v : base) moved.push_back(image(v));
        DelzantPolytope pm(moved);
        CHECK(pm.centroid() == image(p.centroid()));
        // |det A| from the volume ratio of the image of the unit cube.
        CHECK(pm.volume() / p.volume() == DelzantPolytope([&] {
                Points c;
                for (const auto& v : cube(k, q(0), q(1))) c.push_back(image(v));
                return c;
              }()).volume());
        CHECK(pm.facets().size() == p.facets().size());
        CHECK(pm.edges().size() == p.edges().size());
        CHECK(pm.triangulation().size() >= 1);
      }
    }
  }
  // Vertex average differs from the Lebesgue centroid off symmetric shapes.
  DelzantPolytope trap({{q(0), q(0)}, {q(3), q(0)}, {q(1), q(1)}, {q(0), q(1)}});
  CHECK(trap.centroid() != RationalPoint{q(1), q(1, 2)});
  CHECK(trap.centroid() == shoelace(trap.vertices()).second);
}

TEST_CASE("delzant verification") {
  CHECK(delzant_verify(DelzantPolytope(simplex(3))).empty());
  CHECK(delzant_verify(DelzantPolytope(cube(2, q(-1, 2), q(1, 2)))).empty());
  for (int pts = 1; pts <= 3; ++pts) CHECK(delzant_verify(blowup_projective_plane(pts).polytope).empty());

  DelzantPolytope tri({{q(0), q(0)}, {q(2), q(0)}, {q(0), q(1)}});
  auto fails = delzant_verify(tri);
  REQUIRE(fails.size() == 1);
  CHECK(tri.vertices()[fails[0].vertex] == RationalPoint{q(0), q(1)});
  CHECK(abs(fails[0].determinant) == 2);
  auto dirs = fails[0].edge_matrix;
  std::sort(dirs.begin(), dirs.end());
  CHECK(dirs == std::vector<IntVector>{{0, -1}, {2, -1}});
  CHECK(describe(fails[0]).find("|det| = 2") != std::string::npos);

  // The apex of a square pyramid has four edges.
  DelzantPolytope pyramid({{q(0), q(0), q(0)}, {q(1), q(0), q(0)}, {q(1), q(1), q(0)}, {q(0), q(1), q(0)}, {q(1, 2), q(1, 2), q(1)}});
  auto pf = delzant_verify(pyramid);
  REQUIRE(!pf.empty());
  CHECK(std::any_of(pf.begin(), pf.end(), [](const DelzantFailure& f) { return f.edge_matrix.size() == 4; }));
}

TEST_CASE("special point by both formulas") {
  for (int n = 1; n <= 4; ++n) {
    auto m = projective_space(n);
    auto sp = special_point(m);
    CHECK(sp.point == RationalPoint(n, Rational(0)));
    CHECK(sp.vertex_average == sp.point);
    CHECK(sp.per_vertex.size() == static_cast<std::size_t>(n + 1));
    CHECK(m.polytope.interior(sp.point));
  }
  {
    auto m = quadric_square();
    auto sp = special_point(m);
    CHECK(sp.point == RationalPoint{q(0), q(0)});
    CHECK(sp.vertex_average == sp.point);
  }
  for (int pts = 1; pts <= 3; ++pts) {
    auto m = blowup_projective_plane(pts);
    auto sp = special_point(m);
    CHECK(m.polytope.vertices().size() == static_cast<std::size_t>(3 + pts));
    RationalPoint avg = vertex_sum(m.polytope.vertices());
    for (auto& x : avg) x /= Rational(static_cast<long>(m.polytope.vertices().size()));
    CHECK(sp.point == avg);
    CHECK(m.polytope.interior(sp.point));
    for (const auto& v : sp.per_vertex) CHECK(v == sp.point);
  }
  // The one-point blow-up before normalization, by hand.
  DelzantPolytope raw({{q(0), q(-1, 3)}, {q(2, 3), q(-1, 3)}, {q(-1, 3), q(2, 3)}, {q(-1, 3), q(0)}});
  auto m1 = blowup_projective_plane(1);
  auto shifted = normalize(raw);
  CHECK(shifted.polytope.vertices().size() == 4);
  auto sp_raw = special_point({shifted.polytope, q(1, 3), false});
  RationalPoint avg = vertex_sum(shifted.polytope.vertices());
  for (auto& x : avg) x /= 4;
  CHECK(sp_raw.point == avg);
  CHECK(special_point(m1).point != RationalPoint{q(0), q(0)});
}

TEST_CASE("special point preconditions") {
  auto m = projective_space(2);
  MomentData no_kappa{m.polytope, std::nullopt, true};
  CHECK_THROWS_AS(special_point(no_kappa), std::invalid_argument);
  MomentData off{DelzantPolytope(simplex(2)), q(1, 3), true};
  CHECK_THROWS_AS(special_point(off), std::invalid_argument);
  MomentData bad_tri{normalize(DelzantPolytope({{q(0), q(0)}, {q(2), q(0)}, {q(0), q(1)}})).polytope, q(1), false};
  CHECK_THROWS_AS(special_point(bad_tri), std::invalid_argument);
  // A non-square rectangle is Delzant but no κ makes it monotone.
  MomentData rect{normalize(DelzantPolytope(Points{{q(0), q(0)}, {q(2), q(0)}, {q(2), q(1)}, {q(0), q(1)}})).polytope, q(1, 2), false};
  try {
    special_point(rect);
    FAIL("expected domain_error");
  } catch (const std::domain_error& e) {
    CHECK(std::string(e.what()).find("κ not monotone for this polytope") != std::string::npos);
  }
  MomentData wrong_kappa{m.polytope, q(1, 2), true};
  CHECK_THROWS_AS(special_point(wrong_kappa), std::domain_error);
}

TEST_CASE("separation agrees with a Carathéodory oracle") {
  std::mt19937_64 rng(23);
  int with = 0, without = 0;
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t k = 1 + trial % 4;
    std::size_t n = 1 + static_cast<std::size_t>(rng() % 7);
    Points pts;
    for (std::size_t i = 0; i < n; ++i) {
      RationalPoint p;
      for (std::size_t j = 0; j < k; ++j) p.push_back(random_rational(rng, 2, 2) + (trial % 3 == 0 ? q(1, 2) : q(0)));
      pts.push_back(p);
    }
    auto sep = separate_origin(pts);
    bool inside = origin_in_hull(pts);
    CHECK(inside == !sep.functional.has_value());
    if (sep.functional) {
      ++without;
      for (const auto& p : pts) {
        Rational s = 0;
        for (std::size_t j = 0; j < k; ++j) s += (*sep.functional)[j] * p[j];
        CHECK(s > 0);
      }
    } else {
      ++with;
      Rational total = 0;
      RationalPoint comb(k, Rational(0));
      for (std::size_t i = 0; i < sep.support.size(); ++i) {
        CHECK(sep.weights[i] > 0);
        total += sep.weights[i];
        for (std::size_t j = 0; j < k; ++j) comb[j] += sep.weights[i] * pts[sep.support[i]][j];
      }
      CHECK(total == 1);
      CHECK(comb == RationalPoint(k, Rational(0)));
    }
  }
  CHECK(with > 20);
  CHECK(without > 20);
}

TEST_CASE("ball subpolytopes and the displaceability threshold") {
  for (int n = 1; n <= 4; ++n) {
    auto m = projective_space(n);
    CHECK(DelzantPolytope(ball_subpolytope(n, 1).generators) == m.polytope);
    Rational edge(n, n + 1);
    CHECK(!stable_displaceability_certificate(m, ball_subpolytope(n, edge)));
    CHECK(!stable_displaceability_certificate(m, ball_subpolytope(n, Rational(1))));
    CHECK(origin_in_hull(ball_subpolytope(n, edge).generators));
    for (const Rational& r : std::vector<Rational>{Rational(n, n + 1) - Rational(1, 1000), Rational(1, 7), Rational(n, 2 * n + 1)}) {
      auto body = ball_subpolytope(n, r);
      auto f = stable_displaceability_certificate(m, body);
      REQUIRE(f.has_value());
      for (const auto& g : body.generators) {
        Rational s = 0;
        for (int j = 0; j < n; ++j) s += (*f)[j] * g[j];
        CHECK(s > 0);
      }
    }
  }
  // 0 sits on the boundary at the threshold: the body contains it but no
  // open neighbourhood of it.
  auto b = ball_subpolytope(2, Rational(2, 3));
  RationalPoint slightly_off{Rational(-1, 1000), Rational(-1, 1000)};
  Points moved;
  for (const auto& g : b.generators) moved.push_back({g[0] + slightly_off[0], g[1] + slightly_off[1]});
  CHECK(!origin_in_hull(moved));
  CHECK_THROWS_AS(ball_subpolytope(2, Rational(0)), std::invalid_argument);
  CHECK_THROWS_AS(ball_subpolytope(2, Rational(3, 2)), std::invalid_argument);
}

TEST_CASE("certificate preconditions and trivial cases") {
  auto m = projective_space(2);
  CHECK(!stable_displaceability_certificate(m, ConvexBody{{{q(0), q(0)}}}));
  auto f = stable_displaceability_certificate(m, ConvexBody{{{q(1, 5), q(-1, 7)}}});
  REQUIRE(f);
  CHECK(*f == RationalPoint{q(1, 5), q(-1, 7)});
  CHECK_THROWS_AS(stable_displaceability_certificate(m, ConvexBody{{{q(2), q(2)}}}), std::invalid_argument);
  CHECK_THROWS_AS(stable_displaceability_certificate(blowup_projective_plane(1), ConvexBody{{{q(0), q(0)}}}),
                  std::invalid_argument);
}

TEST_CASE("fiber status") {
  auto cp2 = projective_space(2);
  CHECK(std::holds_alternative<SuperheavySpecial>(fiber_status(cp2, {q(0), q(0)})));
  auto s = fiber_status(cp2, {q(1, 6), q(0)});
  REQUIRE(std::holds_alternative<StablyDisplaceable>(s));
  CHECK(std::get<StablyDisplaceable>(s).certificate == RationalPoint{q(1, 6), q(0)});
  CHECK(to_string(s) == "stably-displaceable (1/6,0)");
  auto blow = blowup_projective_plane(2);
  auto sp = special_point(blow).point;
  CHECK(std::holds_alternative<SuperheavySpecial>(fiber_status(blow, sp)));
  CHECK(std::holds_alternative<Unknown>(fiber_status(blow, {q(0), q(0)})));
  CHECK(to_string(fiber_status(blow, {q(0), q(0)})) == "unknown");
  CHECK_THROWS_AS(fiber_status(cp2, {q(1), q(1)}), std::invalid_argument);
  // Every boundary vertex of the square is displaceable.
  auto sq = quadric_square();
  for (const auto& v : sq.polytope.vertices()) CHECK(std::holds_alternative<StablyDisplaceable>(fiber_status(sq, v)));
}
