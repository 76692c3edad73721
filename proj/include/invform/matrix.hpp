#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "invform/poly.hpp"
#include "invform/rational.hpp"
#include "invform/scalar.hpp"

namespace invform {

/// Raised for shape errors: mismatched dimensions, degree mismatches and the like.
struct StructuralError : std::logic_error {
  using std::logic_error::logic_error;
};

inline bool is_zero(const Rational& x) { return x.is_zero(); }
inline bool is_zero(const Poly& x) { return x.is_zero(); }
inline bool is_zero(const RatFunc& x) { return x.is_zero(); }
inline bool is_zero(const Scalar& x) { return x.is_zero(); }

/// Dense row-major matrix of exact scalars.
template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, T(0)) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<T> data)
      : rows_(rows), cols_(cols), a_(std::move(data)) {
    if (a_.size() != rows * cols) throw StructuralError("Matrix: data size mismatch");
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  static Matrix from_rows(const std::vector<std::vector<T>>& rows) {
    if (rows.empty()) return {};
    Matrix m(rows.size(), rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != m.cols_) throw StructuralError("Matrix: ragged rows");
      for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  [[nodiscard]] std::size_t rows() const { return rows_; }
  [[nodiscard]] std::size_t cols() const { return cols_; }
  T& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  [[nodiscard]] std::vector<T> row(std::size_t i) const {
    return std::vector<T>(a_.begin() + static_cast<long>(i * cols_),
                          a_.begin() + static_cast<long>((i + 1) * cols_));
  }

  [[nodiscard]] Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  [[nodiscard]] bool is_zero() const {
    for (const auto& x : a_)
      if (!invform::is_zero(x)) return false;
    return true;
  }

  [[nodiscard]] bool is_symmetric() const {
    if (rows_ != cols_) return false;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = i + 1; j < cols_; ++j)
        if (!((*this)(i, j) == (*this)(j, i))) return false;
    return true;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw StructuralError("Matrix: product dimension mismatch");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        if (invform::is_zero(a(i, k))) continue;
        for (std::size_t j = 0; j < b.cols_; ++j)
          if (!invform::is_zero(b(k, j))) c(i, j) += a(i, k) * b(k, j);
      }
    return c;
  }
  friend Matrix operator+(Matrix a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw StructuralError("Matrix: sum dimension mismatch");
    for (std::size_t i = 0; i < a.a_.size(); ++i) a.a_[i] += b.a_[i];
    return a;
  }
  friend bool operator==(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
    for (std::size_t i = 0; i < a.a_.size(); ++i)
      if (!(a.a_[i] == b.a_[i])) return false;
    return true;
  }

  [[nodiscard]] std::vector<T> apply(const std::vector<T>& v) const {
    if (v.size() != cols_) throw StructuralError("Matrix: vector dimension mismatch");
    std::vector<T> out(rows_, T(0));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        if (!invform::is_zero((*this)(i, j)) && !invform::is_zero(v[j])) out[i] += (*this)(i, j) * v[j];
    return out;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<T> a_;
};

using ScalarMatrix = Matrix<Scalar>;

/// Kernel basis plus the polynomial pivots whose simultaneous nonvanishing
/// guarantees the basis specializes correctly (always empty over Q).
template <typename T>
struct Nullspace {
  std::vector<std::vector<T>> basis;
  std::vector<Poly> pivots;
  std::vector<std::size_t> pivot_columns;
  std::size_t rank = 0;
};

/// Reduced row echelon form over Q, in place. Returns the pivot columns.
inline std::vector<std::size_t> rref(Matrix<Rational>& m) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && m(p, c).is_zero()) ++p;
    if (p == m.rows()) continue;
    if (p != r)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
    Rational inv = m(r, c).inverse();
    for (std::size_t j = c; j < m.cols(); ++j) m(r, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, c).is_zero()) continue;
      Rational f = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j)
        if (!m(r, j).is_zero()) m(i, j) -= f * m(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

/// Kernel of a rational matrix. Each basis vector has a 1 in one free column
/// and zeros in the other free columns.
inline Nullspace<Rational> nullspace(Matrix<Rational> m) {
  Nullspace<Rational> out;
  out.pivot_columns = rref(m);
  out.rank = out.pivot_columns.size();
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : out.pivot_columns) is_pivot[c] = true;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    std::vector<Rational> v(m.cols(), Rational(0));
    v[f] = Rational(1);
    for (std::size_t r = 0; r < out.pivot_columns.size(); ++r) v[out.pivot_columns[r]] = -m(r, f);
    out.basis.push_back(std::move(v));
  }
  return out;
}

inline std::size_t rank(Matrix<Rational> m) { return rref(m).size(); }

/// Fraction-free Gauss-Jordan elimination over Q[params] (Bareiss update with
/// exact polynomial division). After elimination every pivot row carries the
/// final pivot `d` on its pivot column, and a kernel vector for free column f
/// is v_f = d, v_{pivot(r)} = -a(r, f).
inline Nullspace<Poly> nullspace(Matrix<Poly> m) {
  Nullspace<Poly> out;
  Poly prev(1);
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = m.rows();
    // Prefer the sparsest nonzero pivot candidate for smaller growth; ties by row.
    for (std::size_t i = r; i < m.rows(); ++i) {
      if (m(i, c).is_zero()) continue;
      if (p == m.rows() || m(i, c).terms().size() < m(p, c).terms().size()) p = i;
    }
    if (p == m.rows()) continue;
    if (p != r)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
    const Poly piv = m(r, c);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r) continue;
      const Poly f = m(i, c);
      for (std::size_t j = 0; j < m.cols(); ++j) {
        if (j == c) continue;
        Poly num = piv * m(i, j) - f * m(r, j);
        auto q = num.divide_exact(prev);
        if (!q) throw std::logic_error("Bareiss: inexact division");
        m(i, j) = std::move(*q);
      }
      m(i, c) = Poly(0);
    }
    if (!piv.is_constant()) out.pivots.push_back(piv.primitive_part().second);
    out.pivot_columns.push_back(c);
    prev = piv;
    ++r;
  }
  out.rank = r;
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : out.pivot_columns) is_pivot[c] = true;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    std::vector<Poly> v(m.cols(), Poly(0));
    v[f] = prev;
    for (std::size_t k = 0; k < out.pivot_columns.size(); ++k) v[out.pivot_columns[k]] = -m(k, f);
    out.basis.push_back(std::move(v));
  }
  // Dedupe pivots (same primitive polynomial up to sign).
  std::vector<Poly> uniq;
  for (auto& p : out.pivots) {
    bool seen = false;
    for (const auto& u : uniq)
      if (u == p) seen = true;
    if (!seen) uniq.push_back(p);
  }
  out.pivots = std::move(uniq);
  return out;
}

/// Kernel over the fraction field. Purely rational input takes the field
/// path (no pivots); otherwise each row is cleared of denominators and the
/// fraction-free path runs over the polynomial ring.
inline Nullspace<Scalar> nullspace(const ScalarMatrix& m) {
  bool all_rational = true;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (!m(i, j).is_rational()) all_rational = false;
  Nullspace<Scalar> out;
  if (all_rational) {
    Matrix<Rational> q(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) q(i, j) = m(i, j).rational();
    auto ns = nullspace(std::move(q));
    out.rank = ns.rank;
    out.pivot_columns = ns.pivot_columns;
    for (auto& v : ns.basis) {
      std::vector<Scalar> s;
      for (auto& x : v) s.emplace_back(x);
      out.basis.push_back(std::move(s));
    }
    return out;
  }
  Matrix<Poly> p(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    // Multiply the row by the product of its distinct denominators.
    std::vector<Poly> dens;
    for (std::size_t j = 0; j < m.cols(); ++j) {
      RatFunc f = m(i, j).ratfunc();
      if (f.den().is_constant()) continue;
      bool seen = false;
      for (const auto& d : dens)
        if (d == f.den()) seen = true;
      if (!seen) dens.push_back(f.den());
    }
    Poly common(1);
    for (const auto& d : dens) common *= d;
    for (std::size_t j = 0; j < m.cols(); ++j) {
      RatFunc f = m(i, j).ratfunc();
      auto q = (f.num() * common).divide_exact(f.den());
      if (!q) throw std::logic_error("nullspace: denominator clearing failed");
      p(i, j) = *q;
    }
  }
  auto ns = nullspace(std::move(p));
  out.rank = ns.rank;
  out.pivot_columns = ns.pivot_columns;
  out.pivots = ns.pivots;
  for (auto& v : ns.basis) {
    std::vector<Scalar> s;
    for (auto& x : v) s.emplace_back(x);
    out.basis.push_back(std::move(s));
  }
  return out;
}

/// Positive definiteness of a symmetric rational matrix via exact LDL^T with
/// symmetric pivoting on the diagonal. Returns the index of the first
/// nonpositive pivot, or nullopt when positive definite.
inline std::optional<std::size_t> first_nonpositive_pivot(Matrix<Rational> m) {
  const std::size_t n = m.rows();
  for (std::size_t k = 0; k < n; ++k) {
    if (m(k, k).sign() <= 0) return k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (m(i, k).is_zero()) continue;
      Rational f = m(i, k) / m(k, k);
      for (std::size_t j = k; j < n; ++j) m(i, j) -= f * m(k, j);
    }
  }
  return std::nullopt;
}

/// Exact inverse over a field-like scalar type (Rational or Scalar).
template <typename T>
Matrix<T> inverse(const Matrix<T>& a) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw StructuralError("inverse: matrix not square");
  Matrix<T> m = a;
  Matrix<T> inv = Matrix<T>::identity(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && is_zero(m(p, c))) ++p;
    if (p == n) throw std::domain_error("inverse: singular matrix");
    if (p != c)
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(m(p, j), m(c, j));
        std::swap(inv(p, j), inv(c, j));
      }
    T pinv = T(1) / m(c, c);
    for (std::size_t j = 0; j < n; ++j) {
      if (!is_zero(m(c, j))) m(c, j) = m(c, j) * pinv;
      if (!is_zero(inv(c, j))) inv(c, j) = inv(c, j) * pinv;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || is_zero(m(i, c))) continue;
      T f = m(i, c);
      for (std::size_t j = 0; j < n; ++j) {
        if (!is_zero(m(c, j))) m(i, j) -= f * m(c, j);
        if (!is_zero(inv(c, j))) inv(i, j) -= f * inv(c, j);
      }
    }
  }
  return inv;
}

/// Determinant by fraction-free elimination; works for any exact ring type
/// where exact division of minors is available through `T / T`.
template <typename T>
T determinant(Matrix<T> m) {
  const std::size_t n = m.rows();
  if (m.cols() != n) throw StructuralError("determinant: matrix not square");
  if (n == 0) return T(1);
  T sign(1);
  T prev(1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    std::size_t p = k;
    while (p < n && is_zero(m(p, k))) ++p;
    if (p == n) return T(0);
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(p, j), m(k, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) m(i, j) = (m(k, k) * m(i, j) - m(i, k) * m(k, j)) / prev;
      m(i, k) = T(0);
    }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

}  // namespace invform
