#pragma once

// Decorated Z/2-graded complexes over K_Γ: a preferred basis x_1..x_n with
// rational filter values, a parity-flipping differential that strictly lowers
// the filter, normal and spectral bases, and spectral invariants
//
//   c(a) = inf { F(v) : [v] = a } = max_i F(λ_i h_i)   for a = Σ λ_i [h_i].
//
// Chains are dense coefficient vectors in the preferred basis.

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "rigidkit/exact_matrix.hpp"
#include "rigidkit/novikov.hpp"

namespace rigidkit {

using Chain = std::vector<NovikovScalar>;

struct ChainBasisElement {
  std::string label;
  int parity = 0;
  Rational filter;
  friend bool operator==(const ChainBasisElement&, const ChainBasisElement&) = default;
};

class DecoratedComplex {
 public:
  /// differential(i, j) is the coefficient of x_i in d x_j. Only shapes and
  /// base fields are checked here; validate() checks the complex axioms.
  DecoratedComplex(BaseField field, PeriodGroup gamma, std::vector<ChainBasisElement> basis,
                   ExactMatrix<NovikovScalar> differential);
  /// Zero differential.
  DecoratedComplex(BaseField field, PeriodGroup gamma, std::vector<ChainBasisElement> basis);

  BaseField field() const { return field_; }
  const PeriodGroup& gamma() const { return gamma_; }
  const std::vector<ChainBasisElement>& basis() const { return basis_; }
  const ExactMatrix<NovikovScalar>& differential() const { return d_; }
  std::size_t dim() const { return basis_.size(); }
  std::optional<std::size_t> find(std::string_view label) const;

  NovikovScalar zero() const { return NovikovScalar::zero(field_); }
  Chain zero_chain() const { return Chain(dim(), zero()); }
  Chain basis_chain(std::size_t i) const;
  Chain apply(const Chain& v) const { return mat_vec(d_, v); }

  /// Same complex with the filter replaced.
  DecoratedComplex with_filter(const std::vector<Rational>& filter) const;

  friend bool operator==(const DecoratedComplex&, const DecoratedComplex&) = default;

 private:
  BaseField field_;
  PeriodGroup gamma_;
  std::vector<ChainBasisElement> basis_;
  ExactMatrix<NovikovScalar> d_;
};

struct Diagnostic {
  std::string check;  // "d^2", "parity", "filter", "gamma"
  std::string basis_label;
  std::string detail;
};

/// Empty result means the complex is valid.
std::vector<Diagnostic> validate(const DecoratedComplex& v);

/// F(Σ λ_j x_j) = max (ν(λ_j) + F(x_j)); F(0) = -∞.
ExtRational filter_value(const DecoratedComplex& v, const Chain& x);

/// min over nonzero d(i, j) of F(x_j) - ν(d(i, j)) - F(x_i); nullopt for d = 0.
/// Filter perturbations of sup-norm below half of it keep d filter-decreasing.
std::optional<Rational> filter_gap(const DecoratedComplex& v);

/// F(x_i) - F(x_j) ∉ Γ for all i ≠ j.
bool is_generic(const DecoratedComplex& v);

struct Dominant {
  std::size_t index;
  NovikovScalar scale;
};

/// v = λ (x_p + o(x_p)). Throws std::domain_error("complex not generic") on a tie.
Dominant dominant(const DecoratedComplex& v, const Chain& x);

/// Normal system built incrementally as in the inductive proof: a new vector
/// is split as u + w with u in the current span and w in the span of the
/// unused preferred vectors, and w is normalized.
class NormalSystem {
 public:
  explicit NormalSystem(const DecoratedComplex& v);

  /// Adds v to the span; returns false when v already lies in it.
  bool add(const Chain& v);

  const std::vector<Chain>& vectors() const { return vectors_; }
  const std::vector<std::size_t>& dominant_indices() const { return dominant_; }
  std::size_t size() const { return vectors_.size(); }

  /// Coefficients of x in terms of vectors(), or nullopt if x is outside the span.
  std::optional<std::vector<NovikovScalar>> coordinates(const Chain& x) const;

 private:
  std::vector<Rational> filter_;
  NovikovScalar zero_;
  std::vector<Chain> vectors_;
  std::vector<std::size_t> dominant_;
  std::vector<Chain> reduced_;                          // reduced_[a][dominant_[b]] = δ_ab
  std::vector<std::vector<NovikovScalar>> transform_;  // reduced_[a] = Σ_b transform_[a][b] vectors_[b]
};

std::vector<Chain> normal_basis(const DecoratedComplex& v, const std::vector<Chain>& spanning);

/// Normalized form predicate: coefficient 1 at a strictly dominant index.
bool is_normalized(const DecoratedComplex& v, const Chain& x);

struct SpectralBasis {
  std::vector<std::size_t> x_part;
  std::vector<Chain> g_part;
  std::vector<Chain> h_part;
  std::vector<std::size_t> g_dominant;
  std::vector<std::size_t> h_dominant;

  std::size_t p() const { return h_part.size(); }
  std::size_t q() const { return g_part.size(); }
};

/// Coordinates of a class in the basis [h_1], ..., [h_p] of a fixed spectral basis.
struct HomologyClass {
  std::vector<NovikovScalar> coeffs;
  bool is_zero() const;
};

/// Helper bundling a complex with its spectral basis and the normal system
/// used to express cycles.
class SpectralData {
 public:
  explicit SpectralData(const DecoratedComplex& v);

  const DecoratedComplex& complex() const { return complex_; }
  const SpectralBasis& basis() const { return basis_; }

  /// Class of a cycle; throws std::invalid_argument if d(cycle) ≠ 0.
  HomologyClass class_of(const Chain& cycle) const;
  /// Σ λ_i h_i.
  Chain canonical_representative(const HomologyClass& a) const;
  ExtRational spectral_invariant(const HomologyClass& a) const;
  ExtRational spectral_invariant_of_cycle(const Chain& cycle) const { return spectral_invariant(class_of(cycle)); }

 private:
  DecoratedComplex complex_;
  SpectralBasis basis_;
  NormalSystem kernel_;
};

/// Throws std::domain_error for non-generic complexes.
SpectralBasis spectral_basis(const DecoratedComplex& v);

/// c(a) = max_i F(λ_i h_i).
ExtRational spectral_invariant(const DecoratedComplex& v, const SpectralBasis& sb, const HomologyClass& a);

/// Product complex with d(x⊗y) = dx⊗y + (-1)^{|x|} x⊗dy, basis x_p⊗y_q at index p·n₂ + q.
DecoratedComplex tensor(const DecoratedComplex& a, const DecoratedComplex& b);
Chain tensor_chain(const DecoratedComplex& a, const DecoratedComplex& b, const Chain& x, const Chain& y);

struct ProductFormulaReport {
  ExtRational c1, c2;
  ExtRational lhs;  // c(a1 ⊗ a2)
  ExtRational rhs;  // c(a1) + c(a2)
  bool equal = false;
};

/// Requires generic factors in general position (generic tensor product),
/// otherwise throws std::domain_error pointing at make_generic.
ProductFormulaReport verify_product_formula(const DecoratedComplex& a, const DecoratedComplex& b, const Chain& cycle1,
                                            const Chain& cycle2);

/// F + δ; throws std::invalid_argument if the filter stops decreasing under d.
DecoratedComplex perturb_filter(const DecoratedComplex& v, const std::vector<Rational>& delta);
DecoratedComplex perturb_filter(const DecoratedComplex& v, const Rational& theta);

enum class PerturbDirection { Both, Up, Down };

/// Generic filter F' with ‖F - F'‖ ≤ ε; an already generic input is unchanged.
/// Up/Down restrict δ to [0, ε] / [-ε, 0].
DecoratedComplex make_generic(const DecoratedComplex& v, const Rational& eps,
                              PerturbDirection dir = PerturbDirection::Both);
/// Both factors generic and their tensor product generic.
std::pair<DecoratedComplex, DecoratedComplex> make_generic_pair(const DecoratedComplex& a, const DecoratedComplex& b,
                                                                const Rational& eps,
                                                                PerturbDirection dir = PerturbDirection::Both);
bool in_general_position(const DecoratedComplex& a, const DecoratedComplex& b);

struct Interval {
  ExtRational lower;
  ExtRational upper;
};

/// Two-sided enclosure of c([cycle]) for a possibly non-generic complex,
/// from the Down and Up perturbations (width ≤ 2ε).
Interval spectral_interval(const DecoratedComplex& v, const Chain& cycle, const Rational& eps);

struct IntervalProductReport {
  Interval lhs;  // encloses c(a1 ⊗ a2, F1 + F2)
  Interval rhs;  // encloses c(a1, F1) + c(a2, F2)
  Rational bound;  // 4ε
  bool within_bound = false;  // every point of lhs is within 4ε of every point of rhs
};

/// Product formula for arbitrary (non-generic) pairs via one-sided perturbations.
IntervalProductReport verify_product_formula_perturbed(const DecoratedComplex& a, const DecoratedComplex& b,
                                                       const Chain& cycle1, const Chain& cycle2, const Rational& eps);

/// Basis permutation: new basis index k holds old index perm[k].
DecoratedComplex permute_basis(const DecoratedComplex& v, const std::vector<std::size_t>& perm);
Chain permute_chain(const Chain& x, const std::vector<std::size_t>& perm);

struct RandomComplexOptions {
  BaseField field = BaseField::Qmodel;
  std::size_t min_dim = 2;
  std::size_t max_dim = 8;
  int gamma_denominator = 1;  // Γ = (1/denominator)ℤ
  int filter_denominator = 13;  // prime to every Γ denominator ≤ 12
  int filter_range = 4;        // filters in [-range, range]
};

/// d = U d₀ U⁻¹ with d₀ a sum of monomial pairs and U = I + N, N strictly
/// filter-lowering and parity-preserving. Valid by construction.
DecoratedComplex random_complex(std::mt19937_64& rng, const RandomComplexOptions& opts);
/// A random cycle with small monomial coefficients on the kernel.
Chain random_cycle(std::mt19937_64& rng, const DecoratedComplex& v, const SpectralData& data);
/// A random chain with small monomial coefficients.
Chain random_chain(std::mt19937_64& rng, const DecoratedComplex& v, double density = 0.5);

}  // namespace rigidkit
