#pragma once

// Rational polytopes in dimension k <= 4: exact hulls, Delzant checks, the
// Lebesgue centroid, the special point of monotone toric data and
// separation certificates for 0 against convex bodies.

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rigidkit/rational.hpp"

namespace rigidkit {

using IntVector = std::vector<Integer>;

/// {x : <normal, x> >= offset}, normal primitive in Z^k and pointing inward.
struct Facet {
  IntVector normal;
  Rational offset;
  std::vector<std::size_t> vertices;
};

struct Edge {
  std::size_t from = 0, to = 0;
  IntVector direction;  // primitive, from -> to
};

/// Affine dimension of a point set.
std::size_t affine_dimension(const std::vector<RationalPoint>& points);

/// Smallest positive integer multiple of a nonzero rational vector.
IntVector primitive(const RationalPoint& v);

/// Full-dimensional rational polytope given by its extreme points.
class DelzantPolytope {
 public:
  /// Throws std::invalid_argument when the points are not full-dimensional,
  /// not all extreme, repeated, or k > 4.
  explicit DelzantPolytope(std::vector<RationalPoint> vertices);

  std::size_t dimension() const { return k_; }
  const std::vector<RationalPoint>& vertices() const { return vertices_; }
  const std::vector<Facet>& facets() const { return facets_; }
  const std::vector<Edge>& edges() const { return edges_; }
  /// Edges at a vertex, each directed away from it.
  std::vector<Edge> edges_at(std::size_t vertex) const;

  bool contains(const RationalPoint& p) const;
  /// Strictly inside every facet.
  bool interior(const RationalPoint& p) const;

  /// Exact Lebesgue centroid.
  RationalPoint centroid() const;
  Rational volume() const;
  /// Simplices (k + 1 vertex indices) of a pulling triangulation.
  std::vector<std::vector<std::size_t>> triangulation() const;

  DelzantPolytope translated(const RationalPoint& shift) const;

  friend bool operator==(const DelzantPolytope& a, const DelzantPolytope& b) { return a.vertices_ == b.vertices_; }

 private:
  std::size_t k_;
  std::vector<RationalPoint> vertices_;
  std::vector<Facet> facets_;
  std::vector<Edge> edges_;
};

struct Normalized {
  DelzantPolytope polytope;
  RationalPoint shift;  // added to every vertex
};

/// Translates so that the Lebesgue centroid is the origin.
Normalized normalize(const DelzantPolytope& p);

struct DelzantFailure {
  std::size_t vertex = 0;
  std::vector<IntVector> edge_matrix;  // primitive edge directions at the vertex
  Integer determinant;
  std::string reason;
};

/// Empty when every vertex has k edges whose primitive directions form a Z-basis.
std::vector<DelzantFailure> delzant_verify(const DelzantPolytope& p);
std::string describe(const DelzantFailure& f);

struct MomentData {
  DelzantPolytope polytope;
  std::optional<Rational> kappa;
  bool compressible = false;
};

struct SpecialPoint {
  RationalPoint point;
  std::vector<RationalPoint> per_vertex;  // x + κ Σ v_i at each vertex
  RationalPoint vertex_average;
};

/// Evaluates x + κ Σ v_i at every vertex. Throws std::invalid_argument when κ
/// is missing, the polytope is not normalized or not Delzant, and
/// std::domain_error("κ not monotone for this polytope") when vertices disagree.
SpecialPoint special_point(const MomentData& m);

/// A convex body given by generators (its V-representation).
struct ConvexBody {
  std::vector<RationalPoint> generators;
};

/// Outcome of separating the origin from conv(points): either a functional
/// positive on every point, or convex weights writing 0 as a combination.
struct Separation {
  std::optional<RationalPoint> functional;
  std::vector<std::size_t> support;  // when 0 lies in the hull
  std::vector<Rational> weights;
  RationalPoint nearest;  // the point of the hull closest to 0
};

/// Exact min-norm point of conv(points) by Wolfe's algorithm.
Separation separate_origin(const std::vector<RationalPoint>& points);

/// Rational F with F > 0 on Y, or nullopt when 0 ∈ Y. Requires compressible
/// data and Y ⊆ Δ (std::invalid_argument otherwise). The functional is
/// re-checked on every generator before it is returned.
std::optional<RationalPoint> stable_displaceability_certificate(const MomentData& m, const ConvexBody& y);

/// Δ_r = r Δ_stand + w with w = -(1, …, 1) / (n + 1).
ConvexBody ball_subpolytope(int n, const Rational& r);

struct SuperheavySpecial {};
struct StablyDisplaceable {
  RationalPoint certificate;
};
struct Unknown {};
using FiberStatus = std::variant<SuperheavySpecial, StablyDisplaceable, Unknown>;

/// Throws std::invalid_argument when p ∉ Δ.
FiberStatus fiber_status(const MomentData& m, const RationalPoint& p);
std::string to_string(const FiberStatus& s);

/// Normalized standard simplex (ℂP^n, κ = 1/(n + 1), compressible).
MomentData projective_space(int n);
/// [-1/2, 1/2]^2 (ℂP^1 × ℂP^1, κ = 1/2, compressible).
MomentData quadric_square();
/// ℂP^2 blown up equivariantly at `points` (1..3) torus-fixed points, with the
/// corners of the standard simplex cut at depth 1/3; normalized, κ = 1/3,
/// not compressible.
MomentData blowup_projective_plane(int points);

}  // namespace rigidkit
