#pragma once

#include <array>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "invform/matrix.hpp"
#include "invform/rational.hpp"

namespace invform {

using RVec = std::vector<Rational>;

inline RVec zero_vec(std::size_t n) { return RVec(n, Rational(0)); }

inline bool is_zero_vec(const RVec& v) {
  for (const auto& x : v)
    if (!x.is_zero()) return false;
  return true;
}

inline std::string vec_str(const RVec& v) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  os << ")";
  return os.str();
}

/// Outcome of a validation pass. Failures carry a human-readable witness.
struct ValidationReport {
  std::vector<std::string> failures;
  /// First offending basis triple, when the check is triple-based.
  std::optional<std::array<std::size_t, 3>> witness_triple;
  RVec witness_value;

  [[nodiscard]] bool ok() const { return failures.empty(); }
};

/// One raw bracket entry as supplied: [e_i, e_j] = sum_k c_k e_k.
struct BracketEntry {
  std::size_t i = 0, j = 0;
  std::vector<std::pair<std::size_t, Rational>> value;
};

/// Real Lie algebra given by structure constants in a fixed basis.
///
/// Only pairs i < j are stored; the bracket of (j, i) is read off by
/// antisymmetry. Raw entries are kept so validation can report inconsistent
/// or self-bracket input.
class LieAlgebra {
 public:
  LieAlgebra() = default;

  LieAlgebra(std::size_t dim, std::vector<std::string> labels, std::vector<BracketEntry> entries)
      : dim_(dim), labels_(std::move(labels)), raw_(std::move(entries)) {
    if (labels_.empty())
      for (std::size_t i = 0; i < dim_; ++i) labels_.push_back("x" + std::to_string(i));
    if (labels_.size() != dim_) throw StructuralError("LieAlgebra: label count differs from dim");
    table_.assign(dim_ * dim_, zero_vec(dim_));
    for (const auto& e : raw_) {
      if (e.i >= dim_ || e.j >= dim_) throw std::out_of_range("LieAlgebra: bracket index out of range");
      if (e.i == e.j) continue;
      RVec v = zero_vec(dim_);
      for (const auto& [k, c] : e.value) {
        if (k >= dim_) throw std::out_of_range("LieAlgebra: bracket index out of range");
        v[k] += c;
      }
      std::size_t a = std::min(e.i, e.j), b = std::max(e.i, e.j);
      if (e.i > e.j)
        for (auto& x : v) x = -x;
      auto& slot = table_[a * dim_ + b];
      if (is_zero_vec(slot)) slot = v;
      // Conflicting duplicates are kept as first seen and flagged by validate_algebra.
    }
    for (std::size_t a = 0; a < dim_; ++a)
      for (std::size_t b = a + 1; b < dim_; ++b) {
        RVec neg = table_[a * dim_ + b];
        for (auto& x : neg) x = -x;
        table_[b * dim_ + a] = std::move(neg);
      }
  }

  [[nodiscard]] std::size_t dim() const { return dim_; }
  [[nodiscard]] const std::vector<std::string>& labels() const { return labels_; }
  [[nodiscard]] const std::vector<BracketEntry>& raw_entries() const { return raw_; }

  /// [e_i, e_j] in basis coordinates.
  [[nodiscard]] const RVec& bracket(std::size_t i, std::size_t j) const { return table_[i * dim_ + j]; }

  [[nodiscard]] RVec bracket(const RVec& x, const RVec& y) const {
    RVec out = zero_vec(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
      if (x[i].is_zero()) continue;
      for (std::size_t j = 0; j < dim_; ++j) {
        if (y[j].is_zero() || i == j) continue;
        Rational c = x[i] * y[j];
        const RVec& b = bracket(i, j);
        for (std::size_t k = 0; k < dim_; ++k)
          if (!b[k].is_zero()) out[k] += c * b[k];
      }
    }
    return out;
  }

  /// Matrix of ad_x in basis coordinates: column j is [x, e_j].
  [[nodiscard]] Matrix<Rational> ad(const RVec& x) const {
    Matrix<Rational> m(dim_, dim_);
    for (std::size_t j = 0; j < dim_; ++j) {
      RVec e = zero_vec(dim_);
      e[j] = Rational(1);
      RVec b = bracket(x, e);
      for (std::size_t i = 0; i < dim_; ++i) m(i, j) = b[i];
    }
    return m;
  }

 private:
  std::size_t dim_ = 0;
  std::vector<std::string> labels_;
  std::vector<BracketEntry> raw_;
  std::vector<RVec> table_;
};

/// Symmetric bilinear form on g given by its Gram matrix in the algebra basis.
struct BiInvariantForm {
  Matrix<Rational> gram;

  [[nodiscard]] Rational operator()(const RVec& x, const RVec& y) const {
    Rational acc(0);
    for (std::size_t i = 0; i < gram.rows(); ++i) {
      if (x[i].is_zero()) continue;
      for (std::size_t j = 0; j < gram.cols(); ++j)
        if (!y[j].is_zero() && !gram(i, j).is_zero()) acc += x[i] * gram(i, j) * y[j];
    }
    return acc;
  }
};

inline RVec unit_vec(std::size_t n, std::size_t i) {
  RVec v = zero_vec(n);
  v[i] = Rational(1);
  return v;
}

/// Antisymmetry consistency of the raw table, then Jacobi over all basis triples.
inline ValidationReport validate_algebra(const LieAlgebra& a) {
  ValidationReport rep;
  const std::size_t n = a.dim();
  // Raw entries must agree with the stored antisymmetric table.
  for (const auto& e : a.raw_entries()) {
    RVec v = zero_vec(n);
    for (const auto& [k, c] : e.value) v[k] += c;
    if (e.i == e.j) {
      if (!is_zero_vec(v)) {
        rep.failures.push_back("antisymmetry: [" + a.labels()[e.i] + ", " + a.labels()[e.i] +
                               "] given nonzero value " + vec_str(v));
      }
      continue;
    }
    if (!(v == a.bracket(e.i, e.j))) {
      rep.failures.push_back("antisymmetry: conflicting entries for [" + a.labels()[e.i] + ", " +
                             a.labels()[e.j] + "]");
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) {
        RVec ei = unit_vec(n, i), ej = unit_vec(n, j), ek = unit_vec(n, k);
        RVec s = a.bracket(a.bracket(ei, ej), ek);
        RVec t = a.bracket(a.bracket(ej, ek), ei);
        RVec u = a.bracket(a.bracket(ek, ei), ej);
        for (std::size_t c = 0; c < n; ++c) s[c] += t[c] + u[c];
        if (!is_zero_vec(s)) {
          if (!rep.witness_triple) {
            rep.witness_triple = std::array<std::size_t, 3>{i, j, k};
            rep.witness_value = s;
          }
          rep.failures.push_back("jacobi: (" + a.labels()[i] + ", " + a.labels()[j] + ", " +
                                 a.labels()[k] + ") cyclic sum " + vec_str(s));
          return rep;
        }
      }
  return rep;
}

/// Symmetry, exact positive definiteness, and ad-invariance
/// Q([x,y],z) + Q(y,[x,z]) = 0 over basis triples.
inline ValidationReport validate_q(const LieAlgebra& a, const BiInvariantForm& q) {
  ValidationReport rep;
  const std::size_t n = a.dim();
  if (q.gram.rows() != n || q.gram.cols() != n) {
    rep.failures.push_back("q: Gram dimension differs from algebra dimension");
    return rep;
  }
  if (!q.gram.is_symmetric()) rep.failures.push_back("q: Gram matrix not symmetric");
  if (auto k = first_nonpositive_pivot(q.gram))
    rep.failures.push_back("q: not positive definite (pivot " + std::to_string(*k) + ")");
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t z = 0; z < n; ++z) {
        Rational v = q(a.bracket(x, y), unit_vec(n, z)) + q(unit_vec(n, y), a.bracket(x, z));
        if (!v.is_zero()) {
          rep.witness_triple = std::array<std::size_t, 3>{x, y, z};
          rep.witness_value = {v};
          rep.failures.push_back("q: ad-invariance fails at (" + a.labels()[x] + ", " + a.labels()[y] +
                                 ", " + a.labels()[z] + "), value " + v.str());
          return rep;
        }
      }
  return rep;
}

}  // namespace invform
