#include "rigidkit/decorated_complex.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace rigidkit {

DecoratedComplex::DecoratedComplex(BaseField field, PeriodGroup gamma, std::vector<ChainBasisElement> basis,
                                   ExactMatrix<NovikovScalar> differential)
    : field_(field), gamma_(std::move(gamma)), basis_(std::move(basis)), d_(std::move(differential)) {
  if (d_.rows() != basis_.size() || d_.cols() != basis_.size()) {
    throw std::invalid_argument("differential must be a square matrix matching the basis");
  }
  for (const auto& b : basis_) {
    if (b.parity != 0 && b.parity != 1) throw std::invalid_argument("parity of '" + b.label + "' must be 0 or 1");
  }
  for (std::size_t i = 0; i < d_.rows(); ++i) {
    for (std::size_t j = 0; j < d_.cols(); ++j) {
      if (d_(i, j).field() != field_) throw std::invalid_argument("differential entry has the wrong base field");
    }
  }
}

DecoratedComplex::DecoratedComplex(BaseField field, PeriodGroup gamma, std::vector<ChainBasisElement> basis)
    : DecoratedComplex(field, gamma, basis,
                       ExactMatrix<NovikovScalar>(basis.size(), basis.size(), NovikovScalar::zero(field))) {}

std::optional<std::size_t> DecoratedComplex::find(std::string_view label) const {
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    if (basis_[i].label == label) return i;
  }
  return std::nullopt;
}

Chain DecoratedComplex::basis_chain(std::size_t i) const {
  Chain v = zero_chain();
  v.at(i) = NovikovScalar::one(field_);
  return v;
}

DecoratedComplex DecoratedComplex::with_filter(const std::vector<Rational>& filter) const {
  if (filter.size() != dim()) throw std::invalid_argument("filter size mismatch");
  auto basis = basis_;
  for (std::size_t i = 0; i < dim(); ++i) basis[i].filter = filter[i];
  return DecoratedComplex(field_, gamma_, std::move(basis), d_);
}

namespace {

bool is_zero_chain(const Chain& v) {
  return std::all_of(v.begin(), v.end(), [](const auto& c) { return c.is_zero(); });
}

std::vector<Rational> filters(const DecoratedComplex& v) {
  std::vector<Rational> f;
  for (const auto& b : v.basis()) f.push_back(b.filter);
  return f;
}

ExtRational filter_of(const std::vector<Rational>& filter, const Chain& x) {
  ExtRational best;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!x[i].is_zero()) best = max(best, valuation(x[i]) + ExtRational(filter[i]));
  }
  return best;
}

Dominant dominant_of(const std::vector<Rational>& filter, const Chain& x) {
  std::optional<std::size_t> best;
  ExtRational best_value;
  bool tie = false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i].is_zero()) continue;
    ExtRational value = valuation(x[i]) + ExtRational(filter[i]);
    if (!best || value > best_value) {
      best = i;
      best_value = value;
      tie = false;
    } else if (value == best_value) {
      tie = true;
    }
  }
  if (!best) throw std::invalid_argument("dominant term of the zero vector");
  if (tie) throw std::domain_error("complex not generic: two terms share the top filter level");
  return {*best, x[*best]};
}

Chain scaled(const Chain& v, const NovikovScalar& c) {
  Chain out = v;
  for (auto& x : out) {
    if (!x.is_zero()) x *= c;
  }
  return out;
}

void axpy(Chain& y, const NovikovScalar& a, const Chain& x) {
  if (a.is_zero()) return;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!x[i].is_zero()) y[i] += a * x[i];
  }
}

}  // namespace

std::vector<Diagnostic> validate(const DecoratedComplex& v) {
  std::vector<Diagnostic> out;
  const auto& d = v.differential();
  const auto& b = v.basis();
  for (std::size_t j = 0; j < v.dim(); ++j) {
    for (std::size_t i = 0; i < v.dim(); ++i) {
      if (d(i, j).is_zero()) continue;
      if (!d(i, j).exponents_in(v.gamma())) {
        out.push_back({"gamma", b[j].label, "coefficient of " + b[i].label + " in d" + b[j].label + " has exponents outside Γ"});
      }
      if (b[i].parity == b[j].parity) {
        out.push_back({"parity", b[j].label, "d" + b[j].label + " has a component along " + b[i].label + " of the same parity"});
      }
    }
    auto fd = filter_value(v, d.column(j));
    if (fd >= ExtRational(b[j].filter)) {
      out.push_back({"filter", b[j].label, "F(d" + b[j].label + ") = " + fd.str() + " is not below F(" + b[j].label +
                                              ") = " + b[j].filter.get_str()});
    }
  }
  auto dd = mat_mul(d, d, v.zero());
  for (std::size_t j = 0; j < v.dim(); ++j) {
    for (std::size_t i = 0; i < v.dim(); ++i) {
      if (!dd(i, j).is_zero()) {
        out.push_back({"d^2", b[j].label, "d²" + b[j].label + " has a nonzero component along " + b[i].label});
        break;
      }
    }
  }
  return out;
}

ExtRational filter_value(const DecoratedComplex& v, const Chain& x) { return filter_of(filters(v), x); }

std::optional<Rational> filter_gap(const DecoratedComplex& v) {
  std::optional<Rational> gap;
  const auto& d = v.differential();
  for (std::size_t j = 0; j < v.dim(); ++j) {
    for (std::size_t i = 0; i < v.dim(); ++i) {
      if (d(i, j).is_zero()) continue;
      Rational g = v.basis()[j].filter - valuation(d(i, j)).value() - v.basis()[i].filter;
      if (!gap || g < *gap) gap = g;
    }
  }
  return gap;
}

bool is_generic(const DecoratedComplex& v) {
  const auto& b = v.basis();
  for (std::size_t i = 0; i < b.size(); ++i) {
    for (std::size_t j = i + 1; j < b.size(); ++j) {
      if (v.gamma().contains(Rational(b[i].filter - b[j].filter))) return false;
    }
  }
  return true;
}

Dominant dominant(const DecoratedComplex& v, const Chain& x) { return dominant_of(filters(v), x); }

bool is_normalized(const DecoratedComplex& v, const Chain& x) {
  if (is_zero_chain(x)) return false;
  try {
    auto dom = dominant(v, x);
    return dom.scale.is_one();
  } catch (const std::domain_error&) {
    return false;
  }
}

// ---------------------------------------------------------------- normal systems

NormalSystem::NormalSystem(const DecoratedComplex& v) : filter_(filters(v)), zero_(v.zero()) {}

bool NormalSystem::add(const Chain& v) {
  if (v.size() != filter_.size()) throw std::invalid_argument("chain dimension mismatch");
  // w = v - u, u = Σ_a v[j_a] reduced_a ∈ span, w vanishes on every used index.
  Chain w = v;
  for (std::size_t a = 0; a < reduced_.size(); ++a) {
    NovikovScalar c = v[dominant_[a]];
    if (!c.is_zero()) axpy(w, -c, reduced_[a]);
  }
  if (is_zero_chain(w)) return false;
  auto dom = dominant_of(filter_, w);
  Chain e = scaled(w, dom.scale.inverse());
  const std::size_t m = vectors_.size();
  for (auto& row : transform_) row.push_back(zero_);
  for (std::size_t a = 0; a < reduced_.size(); ++a) {
    NovikovScalar c = reduced_[a][dom.index];
    if (c.is_zero()) continue;
    axpy(reduced_[a], -c, e);
    transform_[a][m] -= c;
  }
  std::vector<NovikovScalar> unit(m + 1, zero_);
  unit[m] = NovikovScalar::one(zero_.field());
  transform_.push_back(std::move(unit));
  reduced_.push_back(e);
  vectors_.push_back(std::move(e));
  dominant_.push_back(dom.index);
  return true;
}

std::optional<std::vector<NovikovScalar>> NormalSystem::coordinates(const Chain& x) const {
  Chain rest = x;
  std::vector<NovikovScalar> coeffs(vectors_.size(), zero_);
  for (std::size_t a = 0; a < reduced_.size(); ++a) {
    NovikovScalar c = x[dominant_[a]];
    if (c.is_zero()) continue;
    axpy(rest, -c, reduced_[a]);
    for (std::size_t b = 0; b < vectors_.size(); ++b) {
      if (!transform_[a][b].is_zero()) coeffs[b] += c * transform_[a][b];
    }
  }
  if (!is_zero_chain(rest)) return std::nullopt;
  return coeffs;
}

std::vector<Chain> normal_basis(const DecoratedComplex& v, const std::vector<Chain>& spanning) {
  NormalSystem ns(v);
  for (const auto& x : spanning) ns.add(x);
  return ns.vectors();
}

// ---------------------------------------------------------------- spectral bases

namespace {

/// Kernel of d, split by parity since d swaps the two halves.
std::vector<Chain> kernel_basis(const DecoratedComplex& v) {
  std::vector<Chain> out;
  const auto& d = v.differential();
  for (int parity : {0, 1}) {
    std::vector<std::size_t> src, dst;
    for (std::size_t i = 0; i < v.dim(); ++i) (v.basis()[i].parity == parity ? src : dst).push_back(i);
    if (src.empty()) continue;
    if (dst.empty()) {
      for (auto i : src) out.push_back(v.basis_chain(i));
      continue;
    }
    ExactMatrix<NovikovScalar> block(dst.size(), src.size(), v.zero());
    for (std::size_t r = 0; r < dst.size(); ++r) {
      for (std::size_t c = 0; c < src.size(); ++c) block(r, c) = d(dst[r], src[c]);
    }
    for (const auto& k : nullspace(block, v.zero())) {
      Chain x = v.zero_chain();
      for (std::size_t c = 0; c < src.size(); ++c) x[src[c]] = k[c];
      out.push_back(std::move(x));
    }
  }
  return out;
}

std::pair<SpectralBasis, NormalSystem> build_spectral(const DecoratedComplex& v) {
  if (!is_generic(v)) throw std::domain_error("complex not generic; apply make_generic first");
  NormalSystem ns(v);
  const auto& d = v.differential();
  for (std::size_t j = 0; j < v.dim(); ++j) {
    Chain col = d.column(j);
    if (!is_zero_chain(col)) ns.add(col);
  }
  const std::size_t q = ns.size();
  for (const auto& k : kernel_basis(v)) ns.add(k);
  SpectralBasis sb;
  std::vector<bool> used(v.dim(), false);
  for (std::size_t a = 0; a < ns.size(); ++a) {
    used[ns.dominant_indices()[a]] = true;
    if (a < q) {
      sb.g_part.push_back(ns.vectors()[a]);
      sb.g_dominant.push_back(ns.dominant_indices()[a]);
    } else {
      sb.h_part.push_back(ns.vectors()[a]);
      sb.h_dominant.push_back(ns.dominant_indices()[a]);
    }
  }
  for (std::size_t i = 0; i < v.dim(); ++i) {
    if (!used[i]) sb.x_part.push_back(i);
  }
  if (sb.x_part.size() != q) throw std::logic_error("spectral basis violates n = p + 2q");
  return {std::move(sb), std::move(ns)};
}

}  // namespace

SpectralBasis spectral_basis(const DecoratedComplex& v) { return build_spectral(v).first; }

bool HomologyClass::is_zero() const {
  return std::all_of(coeffs.begin(), coeffs.end(), [](const auto& c) { return c.is_zero(); });
}

ExtRational spectral_invariant(const DecoratedComplex& v, const SpectralBasis& sb, const HomologyClass& a) {
  if (a.coeffs.size() != sb.p()) throw std::invalid_argument("class dimension does not match the spectral basis");
  ExtRational best;
  for (std::size_t i = 0; i < sb.p(); ++i) {
    if (a.coeffs[i].is_zero()) continue;
    best = max(best, valuation(a.coeffs[i]) + ExtRational(v.basis()[sb.h_dominant[i]].filter));
  }
  return best;
}

SpectralData::SpectralData(const DecoratedComplex& v) : complex_(v), kernel_(v) {
  auto [sb, ns] = build_spectral(complex_);
  basis_ = std::move(sb);
  kernel_ = std::move(ns);
}

HomologyClass SpectralData::class_of(const Chain& cycle) const {
  if (!is_zero_chain(complex_.apply(cycle))) throw std::invalid_argument("chain is not a cycle");
  auto coords = kernel_.coordinates(cycle);
  if (!coords) throw std::logic_error("cycle outside the computed kernel");
  HomologyClass a;
  a.coeffs.assign(coords->begin() + static_cast<long>(basis_.q()), coords->end());
  return a;
}

Chain SpectralData::canonical_representative(const HomologyClass& a) const {
  Chain v = complex_.zero_chain();
  for (std::size_t i = 0; i < basis_.p(); ++i) axpy(v, a.coeffs[i], basis_.h_part[i]);
  return v;
}

ExtRational SpectralData::spectral_invariant(const HomologyClass& a) const {
  return rigidkit::spectral_invariant(complex_, basis_, a);
}

// ---------------------------------------------------------------- tensor products

DecoratedComplex tensor(const DecoratedComplex& a, const DecoratedComplex& b) {
  if (a.field() != b.field()) throw std::invalid_argument("tensor: base fields differ");
  const std::size_t na = a.dim(), nb = b.dim();
  std::vector<ChainBasisElement> basis;
  for (const auto& x : a.basis()) {
    for (const auto& y : b.basis()) {
      basis.push_back({x.label + "*" + y.label, (x.parity + y.parity) % 2, x.filter + y.filter});
    }
  }
  ExactMatrix<NovikovScalar> d(na * nb, na * nb, a.zero());
  for (std::size_t p = 0; p < na; ++p) {
    for (std::size_t q = 0; q < nb; ++q) {
      const std::size_t col = p * nb + q;
      for (std::size_t i = 0; i < na; ++i) {
        if (!a.differential()(i, p).is_zero()) d(i * nb + q, col) += a.differential()(i, p);
      }
      for (std::size_t j = 0; j < nb; ++j) {
        const auto& c = b.differential()(j, q);
        if (c.is_zero()) continue;
        d(p * nb + j, col) += a.basis()[p].parity ? -c : c;
      }
    }
  }
  return DecoratedComplex(a.field(), group_sum(a.gamma(), b.gamma()), std::move(basis), std::move(d));
}

Chain tensor_chain(const DecoratedComplex& a, const DecoratedComplex& b, const Chain& x, const Chain& y) {
  Chain out(a.dim() * b.dim(), a.zero());
  for (std::size_t p = 0; p < a.dim(); ++p) {
    if (x[p].is_zero()) continue;
    for (std::size_t q = 0; q < b.dim(); ++q) {
      if (!y[q].is_zero()) out[p * b.dim() + q] = x[p] * y[q];
    }
  }
  return out;
}

bool in_general_position(const DecoratedComplex& a, const DecoratedComplex& b) {
  return is_generic(a) && is_generic(b) && is_generic(tensor(a, b));
}

ProductFormulaReport verify_product_formula(const DecoratedComplex& a, const DecoratedComplex& b, const Chain& cycle1,
                                            const Chain& cycle2) {
  if (!is_generic(a) || !is_generic(b)) throw std::domain_error("factors not generic; apply make_generic_pair");
  auto prod = tensor(a, b);
  if (!is_generic(prod)) throw std::domain_error("complexes not in general position; apply make_generic_pair");
  SpectralData da(a), db(b), dp(prod);
  ProductFormulaReport rep;
  rep.c1 = da.spectral_invariant_of_cycle(cycle1);
  rep.c2 = db.spectral_invariant_of_cycle(cycle2);
  rep.lhs = dp.spectral_invariant_of_cycle(tensor_chain(a, b, cycle1, cycle2));
  rep.rhs = rep.c1 + rep.c2;
  rep.equal = rep.lhs == rep.rhs;
  return rep;
}

// ---------------------------------------------------------------- perturbations

DecoratedComplex perturb_filter(const DecoratedComplex& v, const std::vector<Rational>& delta) {
  if (delta.size() != v.dim()) throw std::invalid_argument("perturbation size mismatch");
  auto f = filters(v);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] += delta[i];
  auto out = v.with_filter(f);
  for (const auto& diag : validate(out)) {
    if (diag.check == "filter") throw std::invalid_argument("perturbed filter not decreasing: " + diag.detail);
  }
  return out;
}

DecoratedComplex perturb_filter(const DecoratedComplex& v, const Rational& theta) {
  return perturb_filter(v, std::vector<Rational>(v.dim(), theta));
}

namespace {

/// 0, then ε/2, ε/3, ... with the signs allowed by dir.
class Candidates {
 public:
  Candidates(Rational eps, PerturbDirection dir) : eps_(std::move(eps)), dir_(dir) {}
  Rational next() {
    if (step_ == 0) {
      ++step_;
      return 0;
    }
    long k = (dir_ == PerturbDirection::Both ? (step_ + 1) / 2 : step_) + 1;
    bool negative = dir_ == PerturbDirection::Down || (dir_ == PerturbDirection::Both && step_ % 2 == 0);
    ++step_;
    if (k > 100000) throw std::runtime_error("make_generic: no admissible perturbation found");
    Rational r = eps_ / k;
    return negative ? Rational(-r) : r;
  }

 private:
  Rational eps_;
  PerturbDirection dir_;
  long step_ = 0;
};

void check_eps(const Rational& eps) {
  if (eps <= 0) throw std::invalid_argument("ε must be positive");
}

/// Greedy δ for one complex; `forbidden` holds differences that F'(x_i) - F'(x_j) must avoid mod Γ.
std::vector<Rational> generic_filter(const std::vector<Rational>& f, const PeriodGroup& gamma, const Rational& eps,
                                     PerturbDirection dir, const std::vector<Rational>& forbidden) {
  std::vector<Rational> out;
  for (std::size_t i = 0; i < f.size(); ++i) {
    Candidates cand(eps, dir);
    while (true) {
      Rational value = f[i] + cand.next();
      bool ok = true;
      for (std::size_t j = 0; j < out.size() && ok; ++j) {
        Rational diff = value - out[j];
        for (const auto& bad : forbidden) {
          if (gamma.contains(Rational(diff - bad))) {
            ok = false;
            break;
          }
        }
      }
      if (ok) {
        out.push_back(value);
        break;
      }
    }
  }
  return out;
}

DecoratedComplex apply_generic(const DecoratedComplex& v, const std::vector<Rational>& f) {
  auto out = v.with_filter(f);
  for (const auto& diag : validate(out)) {
    if (diag.check == "filter") {
      throw std::invalid_argument("ε too large: the perturbed filter no longer decreases under d (" + diag.detail + ")");
    }
  }
  return out;
}

}  // namespace

DecoratedComplex make_generic(const DecoratedComplex& v, const Rational& eps, PerturbDirection dir) {
  check_eps(eps);
  if (is_generic(v)) return v;
  return apply_generic(v, generic_filter(filters(v), v.gamma(), eps, dir, {Rational(0)}));
}

std::pair<DecoratedComplex, DecoratedComplex> make_generic_pair(const DecoratedComplex& a, const DecoratedComplex& b,
                                                                const Rational& eps, PerturbDirection dir) {
  check_eps(eps);
  if (in_general_position(a, b)) return {a, b};
  // Γ₁ + Γ₂ governs genericity of the product, and it contains both factors' groups.
  PeriodGroup gamma = group_sum(a.gamma(), b.gamma());
  auto fa = generic_filter(filters(a), gamma, eps, dir, {Rational(0)});
  std::vector<Rational> diffs;
  for (const auto& x : fa) {
    for (const auto& y : fa) diffs.push_back(x - y);
  }
  std::sort(diffs.begin(), diffs.end());
  diffs.erase(std::unique(diffs.begin(), diffs.end()), diffs.end());
  auto fb = generic_filter(filters(b), gamma, eps, dir, diffs);
  return {apply_generic(a, fa), apply_generic(b, fb)};
}

Interval spectral_interval(const DecoratedComplex& v, const Chain& cycle, const Rational& eps) {
  auto lo = make_generic(v, eps, PerturbDirection::Down);
  auto hi = make_generic(v, eps, PerturbDirection::Up);
  return {SpectralData(lo).spectral_invariant_of_cycle(cycle), SpectralData(hi).spectral_invariant_of_cycle(cycle)};
}

IntervalProductReport verify_product_formula_perturbed(const DecoratedComplex& a, const DecoratedComplex& b,
                                                       const Chain& cycle1, const Chain& cycle2, const Rational& eps) {
  auto [al, bl] = make_generic_pair(a, b, eps, PerturbDirection::Down);
  auto [ah, bh] = make_generic_pair(a, b, eps, PerturbDirection::Up);
  auto low = verify_product_formula(al, bl, cycle1, cycle2);
  auto high = verify_product_formula(ah, bh, cycle1, cycle2);
  IntervalProductReport rep;
  rep.lhs = {low.lhs, high.lhs};
  rep.rhs = {low.rhs, high.rhs};
  rep.bound = 4 * eps;
  if (rep.lhs.upper.is_finite() && rep.lhs.lower.is_finite() && rep.rhs.upper.is_finite() &&
      rep.rhs.lower.is_finite()) {
    Rational spread = std::max(Rational(rep.lhs.upper.value() - rep.rhs.lower.value()),
                               Rational(rep.rhs.upper.value() - rep.lhs.lower.value()));
    rep.within_bound = spread <= rep.bound;
  } else {
    rep.within_bound = !rep.lhs.upper.is_finite() && !rep.rhs.upper.is_finite();
  }
  return rep;
}

// ---------------------------------------------------------------- permutations

DecoratedComplex permute_basis(const DecoratedComplex& v, const std::vector<std::size_t>& perm) {
  if (perm.size() != v.dim()) throw std::invalid_argument("permutation size mismatch");
  std::vector<ChainBasisElement> basis;
  for (auto k : perm) basis.push_back(v.basis().at(k));
  ExactMatrix<NovikovScalar> d(v.dim(), v.dim(), v.zero());
  for (std::size_t r = 0; r < v.dim(); ++r) {
    for (std::size_t c = 0; c < v.dim(); ++c) d(r, c) = v.differential()(perm[r], perm[c]);
  }
  return DecoratedComplex(v.field(), v.gamma(), std::move(basis), std::move(d));
}

Chain permute_chain(const Chain& x, const std::vector<std::size_t>& perm) {
  Chain out;
  out.reserve(x.size());
  for (auto k : perm) out.push_back(x.at(k));
  return out;
}

// ---------------------------------------------------------------- random complexes

namespace {

/// Largest element of Γ that is ≤ bound (Γ nontrivial), optionally lowered by extra steps.
Rational gamma_floor(const PeriodGroup& gamma, const Rational& bound, int extra_steps) {
  const Rational& g = gamma.generator();
  Integer k = floor(Rational(bound / g));
  return Rational(Rational(k - extra_steps) * g);
}

NovikovScalar random_monomial(std::mt19937_64& rng, BaseField field, const Rational& theta) {
  std::uniform_int_distribution<int> coef(1, 3);
  std::bernoulli_distribution neg(0.5);
  Rational c = field == BaseField::F2 ? Rational(1) : Rational(neg(rng) ? -coef(rng) : coef(rng));
  return NovikovScalar::monomial(field, c, theta);
}

}  // namespace

DecoratedComplex random_complex(std::mt19937_64& rng, const RandomComplexOptions& opts) {
  if (opts.gamma_denominator < 1 || opts.filter_denominator < 1) throw std::invalid_argument("bad random options");
  const BaseField f = opts.field;
  const PeriodGroup gamma(Rational(1, opts.gamma_denominator));
  const Rational min_gap(1, opts.gamma_denominator * opts.filter_denominator);
  std::uniform_int_distribution<std::size_t> dim_dist(opts.min_dim, opts.max_dim);
  const std::size_t n = dim_dist(rng);
  std::uniform_int_distribution<int> fdist(-opts.filter_range * opts.filter_denominator,
                                           opts.filter_range * opts.filter_denominator);
  std::bernoulli_distribution coin(0.5);

  std::vector<ChainBasisElement> basis;
  for (std::size_t i = 0; i < n; ++i) {
    basis.push_back({"x" + std::to_string(i + 1), coin(rng) ? 1 : 0, Rational(fdist(rng), opts.filter_denominator)});
    basis.back().filter.canonicalize();
  }
  // Make sure both parities occur so the differential can be nonzero.
  if (n >= 2 && std::all_of(basis.begin(), basis.end(), [&](const auto& b) { return b.parity == basis[0].parity; })) {
    basis[n - 1].parity = 1 - basis[0].parity;
  }

  const NovikovScalar zero = NovikovScalar::zero(f);
  // d₀: disjoint pairs a → b of opposite parity, each lowering F by at least min_gap.
  ExactMatrix<NovikovScalar> d0(n, n, zero);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<bool> taken(n, false);
  for (std::size_t a : order) {
    if (taken[a] || coin(rng)) continue;
    for (std::size_t b : order) {
      if (taken[b] || b == a || basis[b].parity == basis[a].parity) continue;
      Rational theta = gamma_floor(gamma, Rational(basis[a].filter - basis[b].filter - min_gap), coin(rng) ? 1 : 0);
      d0(b, a) = random_monomial(rng, f, theta);
      taken[a] = taken[b] = true;
      break;
    }
  }
  // U = I + N, N strictly lowering: N(i, j) ≠ 0 only for F(x_i) < F(x_j), same parity.
  ExactMatrix<NovikovScalar> nmat(n, n, zero);
  std::bernoulli_distribution sparse(0.3);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (basis[i].parity != basis[j].parity || !(basis[i].filter < basis[j].filter) || !sparse(rng)) continue;
      Rational theta = gamma_floor(gamma, Rational(basis[j].filter - basis[i].filter - min_gap), coin(rng) ? 1 : 0);
      nmat(i, j) = random_monomial(rng, f, theta);
    }
  }
  ExactMatrix<NovikovScalar> u(n, n, zero), uinv(n, n, zero), power(n, n, zero);
  for (std::size_t i = 0; i < n; ++i) {
    u(i, i) = NovikovScalar::one(f);
    power(i, i) = NovikovScalar::one(f);
  }
  ExactMatrix<NovikovScalar> neg_n(n, n, zero);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      u(i, j) += nmat(i, j);
      neg_n(i, j) = -nmat(i, j);
    }
  }
  // U⁻¹ = Σ (−N)^k, a finite sum since N is nilpotent.
  for (std::size_t k = 0; k <= n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) uinv(i, j) += power(i, j);
    }
    power = mat_mul(power, neg_n, zero);
  }
  auto d = mat_mul(mat_mul(u, d0, zero), uinv, zero);
  return DecoratedComplex(f, gamma, std::move(basis), std::move(d));
}

Chain random_chain(std::mt19937_64& rng, const DecoratedComplex& v, double density) {
  std::bernoulli_distribution keep(density);
  std::uniform_int_distribution<int> expo(-3, 3);
  Chain x = v.zero_chain();
  const Rational g = v.gamma().is_trivial() ? Rational(0) : v.gamma().generator();
  for (std::size_t i = 0; i < v.dim(); ++i) {
    if (keep(rng)) x[i] = random_monomial(rng, v.field(), Rational(g * expo(rng)));
  }
  return x;
}

Chain random_cycle(std::mt19937_64& rng, const DecoratedComplex& v, const SpectralData& data) {
  std::bernoulli_distribution keep(0.6);
  std::uniform_int_distribution<int> expo(-3, 3);
  const Rational g = v.gamma().is_trivial() ? Rational(0) : v.gamma().generator();
  Chain x = v.zero_chain();
  for (const auto* part : {&data.basis().h_part, &data.basis().g_part}) {
    for (const auto& h : *part) {
      if (keep(rng)) axpy(x, random_monomial(rng, v.field(), Rational(g * expo(rng))), h);
    }
  }
  return x;
}

}  // namespace rigidkit
