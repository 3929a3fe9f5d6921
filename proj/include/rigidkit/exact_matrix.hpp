#pragma once

// Dense matrices over exact scalars (Rational, NovikovScalar) with Gaussian
// elimination. Row pivots are chosen by ExactTraits<Scalar>::better_pivot.

#include <optional>
#include <stdexcept>
#include <vector>

#include "rigidkit/novikov.hpp"
#include "rigidkit/rational.hpp"

namespace rigidkit {

template <typename Scalar>
struct ExactTraits;

template <>
struct ExactTraits<Rational> {
  static Rational zero_like(const Rational&) { return 0; }
  static Rational one_like(const Rational&) { return 1; }
  static bool is_zero(const Rational& x) { return x == 0; }
  static bool better_pivot(const Rational& candidate, const Rational& current) {
    return abs(candidate) > abs(current);
  }
};

template <>
struct ExactTraits<NovikovScalar> {
  static NovikovScalar zero_like(const NovikovScalar& x) { return NovikovScalar::zero(x.field()); }
  static NovikovScalar one_like(const NovikovScalar& x) { return NovikovScalar::one(x.field()); }
  static bool is_zero(const NovikovScalar& x) { return x.is_zero(); }
  /// Maximal valuation first; ties keep the earlier row (deterministic).
  static bool better_pivot(const NovikovScalar& candidate, const NovikovScalar& current) {
    return valuation(candidate) > valuation(current);
  }
};

template <typename Scalar>
class ExactMatrix {
 public:
  ExactMatrix() = default;
  ExactMatrix(std::size_t rows, std::size_t cols, const Scalar& fill)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Scalar& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Scalar& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::vector<Scalar> column(std::size_t c) const {
    std::vector<Scalar> out;
    out.reserve(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out.push_back((*this)(r, c));
    return out;
  }

  static ExactMatrix from_columns(const std::vector<std::vector<Scalar>>& columns, const Scalar& zero) {
    if (columns.empty()) return {};
    ExactMatrix m(columns.front().size(), columns.size(), zero);
    for (std::size_t c = 0; c < columns.size(); ++c) {
      for (std::size_t r = 0; r < m.rows(); ++r) m(r, c) = columns[c][r];
    }
    return m;
  }

  friend bool operator==(const ExactMatrix&, const ExactMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Scalar> data_;
};

template <typename Scalar>
std::vector<Scalar> mat_vec(const ExactMatrix<Scalar>& m, const std::vector<Scalar>& v) {
  if (v.size() != m.cols()) throw std::invalid_argument("mat_vec: dimension mismatch");
  std::vector<Scalar> out;
  out.reserve(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Scalar acc = ExactTraits<Scalar>::zero_like(v.empty() ? m(r, 0) : v.front());
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (ExactTraits<Scalar>::is_zero(m(r, c)) || ExactTraits<Scalar>::is_zero(v[c])) continue;
      acc += m(r, c) * v[c];
    }
    out.push_back(std::move(acc));
  }
  return out;
}

template <typename Scalar>
ExactMatrix<Scalar> mat_mul(const ExactMatrix<Scalar>& a, const ExactMatrix<Scalar>& b, const Scalar& zero) {
  if (a.cols() != b.rows()) throw std::invalid_argument("mat_mul: dimension mismatch");
  ExactMatrix<Scalar> out(a.rows(), b.cols(), zero);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (ExactTraits<Scalar>::is_zero(a(i, k))) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) {
        if (ExactTraits<Scalar>::is_zero(b(k, j))) continue;
        out(i, j) += a(i, k) * b(k, j);
      }
    }
  }
  return out;
}

/// Reduced row echelon form, in place. Returns pivot columns.
template <typename Scalar>
std::vector<std::size_t> row_reduce(ExactMatrix<Scalar>& m) {
  using T = ExactTraits<Scalar>;
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::optional<std::size_t> best;
    for (std::size_t r = row; r < m.rows(); ++r) {
      if (T::is_zero(m(r, col))) continue;
      if (!best || T::better_pivot(m(r, col), m(*best, col))) best = r;
    }
    if (!best) continue;
    if (*best != row) {
      for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m(row, c), m(*best, c));
    }
    Scalar inv = T::one_like(m(row, col)) / m(row, col);
    for (std::size_t c = col; c < m.cols(); ++c) {
      if (!T::is_zero(m(row, c))) m(row, c) *= inv;
    }
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r == row || T::is_zero(m(r, col))) continue;
      Scalar f = m(r, col);
      for (std::size_t c = col; c < m.cols(); ++c) {
        if (!T::is_zero(m(row, c))) m(r, c) -= f * m(row, c);
      }
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

template <typename Scalar>
std::size_t rank(ExactMatrix<Scalar> m) {
  return row_reduce(m).size();
}

/// Basis of {x : m x = 0}.
template <typename Scalar>
std::vector<std::vector<Scalar>> nullspace(ExactMatrix<Scalar> m, const Scalar& zero) {
  auto pivots = row_reduce(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<std::vector<Scalar>> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    std::vector<Scalar> v(m.cols(), zero);
    v[free] = ExactTraits<Scalar>::one_like(zero);
    for (std::size_t i = 0; i < pivots.size(); ++i) {
      if (!ExactTraits<Scalar>::is_zero(m(i, free))) v[pivots[i]] = -m(i, free);
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Some x with m x = b, or nullopt when inconsistent.
template <typename Scalar>
std::optional<std::vector<Scalar>> solve(const ExactMatrix<Scalar>& m, const std::vector<Scalar>& b,
                                         const Scalar& zero) {
  if (b.size() != m.rows()) throw std::invalid_argument("solve: dimension mismatch");
  ExactMatrix<Scalar> aug(m.rows(), m.cols() + 1, zero);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) aug(r, c) = m(r, c);
    aug(r, m.cols()) = b[r];
  }
  auto pivots = row_reduce(aug);
  if (!pivots.empty() && pivots.back() == m.cols()) return std::nullopt;
  std::vector<Scalar> x(m.cols(), zero);
  for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = aug(i, m.cols());
  return x;
}

}  // namespace rigidkit
