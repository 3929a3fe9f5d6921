#pragma once

// The toric model of a partial symplectic quasi-state: on pullbacks of
// functions on the moment polytope it is evaluation at the special point.
// PL inputs are exact; the Fourier reduction demo is floating point.

#include <functional>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "rigidkit/toric.hpp"

namespace rigidkit {

/// Piecewise-linear function on a triangulation with rational vertex values.
struct PLFunction {
  std::vector<RationalPoint> vertices;
  std::vector<std::vector<std::size_t>> simplices;  // k + 1 vertex indices each
  std::vector<Rational> values;                     // one per vertex

  /// Exact value, or nullopt when p lies in no simplex. Throws
  /// std::logic_error if two simplices containing p disagree.
  std::optional<Rational> evaluate(const RationalPoint& p) const;

  bool same_triangulation(const PLFunction& other) const {
    return vertices == other.vertices && simplices == other.simplices;
  }
};

/// Throws std::invalid_argument naming the failed invariant: shapes, simplex
/// nondegeneracy, and (when given) coverage of Δ by simplices inside it.
void validate(const PLFunction& f, const DelzantPolytope* domain = nullptr);

/// Pointwise operations; binary ones need identical triangulations.
PLFunction scaled(const PLFunction& f, const Rational& alpha);
PLFunction shifted(const PLFunction& f, const Rational& c);
PLFunction sum(const PLFunction& f, const PLFunction& g);
/// f ≤ g at every vertex of a shared triangulation, hence everywhere.
bool pointwise_leq(const PLFunction& f, const PLFunction& g);

/// Splits every simplex containing p by coning its faces to p.
PLFunction stellar_refine(const PLFunction& f, const RationalPoint& p);

/// Constant function on the polytope's own triangulation.
PLFunction constant_on(const DelzantPolytope& p, const Rational& c);

/// Random values in [-range, range] with denominator 12 on the polytope's
/// triangulation, stellar-refined at `refinements` random interior points.
PLFunction random_pl_function(const DelzantPolytope& p, std::mt19937_64& rng, int refinements = 2, int range = 5);

class ModelState {
 public:
  /// Caches p_spec; propagates the errors of special_point.
  explicit ModelState(MomentData moment);

  const MomentData& moment() const { return moment_; }
  const RationalPoint& p_spec() const { return p_spec_; }

 private:
  MomentData moment_;
  RationalPoint p_spec_;
};

/// f(p_spec), exactly. Throws std::domain_error when p_spec is outside f's domain.
Rational zeta(const ModelState& s, const PLFunction& f);

struct AxiomCheck {
  std::string name;
  std::size_t instances = 0;
  std::vector<std::string> violations;  // witness descriptions
};

struct AxiomReport {
  std::vector<AxiomCheck> checks;
  bool ok() const;
};

/// Semi-homogeneity, monotonicity, constants, triangle inequality,
/// Lipschitz, normalization, and (for compressible data) vanishing on
/// functions whose support has a displaceability certificate.
AxiomReport axiom_suite(const ModelState& s, const std::vector<PLFunction>& sample);

struct HeavyReport {
  bool heavy = false;
  std::optional<std::size_t> witness;  // body containing p_spec
  std::string test_class;
};

/// Heaviness of a finite union of closed convex bodies, tested against
/// pullbacks of functions on Δ: holds iff p_spec lies in the union.
HeavyReport model_heavy(const ModelState& s, const std::vector<ConvexBody>& union_of);

bool contains(const ConvexBody& body, const RationalPoint& p);
/// Exact: the bodies are disjoint iff 0 ∉ A − B.
bool disjoint(const ConvexBody& a, const ConvexBody& b);

/// Pairwise-disjoint family of small random bodies inside Δ; one of them is
/// forced to contain p_spec when `cover_special` is set.
std::vector<ConvexBody> random_disjoint_family(const ModelState& s, std::mt19937_64& rng, std::size_t count,
                                               bool cover_special);

/// At most one body of a pairwise-disjoint family is model-heavy. Throws
/// std::invalid_argument when the family is not pairwise disjoint.
bool intersection_property(const ModelState& s, const std::vector<ConvexBody>& family);

struct SmoothSampler {
  std::function<double(const std::vector<double>&)> f;
  std::vector<std::pair<double, double>> box;  // support box per coordinate
};

struct FourierOptions {
  int grid = 256;               // quadrature nodes per axis
  double tail_tolerance = 1e-6;  // allowed boundary mass relative to the peak
  int jobs = 1;
};

struct FourierRow {
  double radius = 0, eps = 0;
  std::size_t lattice_points = 0;
  double zeta = 0, error = 0;
};

struct FourierReport {
  double zeta = 0;       // model value of the partial sum at (R, ε)
  double h_at_spec = 0;  // H̄(p_spec)
  double error = 0;
  std::vector<FourierRow> table;  // R ∈ {R/4, R/2, R} × ε ∈ {4ε, 2ε, ε}
};

/// Trapezoidal Fourier coefficients of H̄ on the box, then the lattice sum
/// Σ ε^k K_v(⟨v, p_spec⟩) over v ∈ εℤ^k ∩ B(R). Requires k ≤ 2; throws
/// std::invalid_argument on bad parameters and std::domain_error when H̄ does
/// not decay at the box boundary.
FourierReport fourier_reduction_demo(const ModelState& s, const SmoothSampler& h, double radius, double eps,
                                     const FourierOptions& opt = {});

}  // namespace rigidkit
