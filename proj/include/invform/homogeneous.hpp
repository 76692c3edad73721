#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "invform/lie.hpp"
#include "invform/matrix.hpp"
#include "invform/scalar.hpp"

namespace invform {

/// Input or validation error with a stable machine-readable code.
class SpecError : public std::runtime_error {
 public:
  SpecError(std::string code, const std::string& what) : std::runtime_error(what), code_(std::move(code)) {}
  [[nodiscard]] const std::string& code() const { return code_; }

 private:
  std::string code_;
};

/// How metric weights are read. `Gram`: weight w on a block means g = w * Q
/// there. `Coform`: the induced inner product on 1-forms is w * Q^{-1} there.
enum class MetricKind { Gram, Coform };

inline const char* metric_kind_name(MetricKind k) { return k == MetricKind::Gram ? "gram" : "coform"; }

struct MetricAssignment {
  MetricKind kind = MetricKind::Gram;
  /// One weight per block; unused when `full` is set.
  std::vector<Scalar> block_weights;
  /// Full symmetric matrix on m in m_basis coordinates.
  std::optional<Matrix<Scalar>> full;
};

/// Lie-algebraic description of G/H together with an invariant metric.
struct HomogeneousSpaceSpec {
  std::string name;
  LieAlgebra algebra;
  BiInvariantForm q;
  std::vector<RVec> h_basis;
  /// Supplied complement basis; computed as the Q-orthocomplement when empty.
  std::vector<RVec> m_basis;
  std::vector<std::string> m_labels;
  std::vector<std::vector<std::size_t>> blocks;
  std::vector<std::string> block_names;
  MetricAssignment metric;
  std::vector<std::string> parameters;
  /// Rational parameter points at which the metric is checked positive definite.
  std::vector<std::vector<Rational>> samples;
};

/// The splitting g = h + m with coordinate maps and the m-projected brackets.
class ReductiveSplit {
 public:
  struct Parts {
    RVec h;  // coordinates in h_basis
    RVec m;  // coordinates in m_basis
  };

  ReductiveSplit() = default;
  ReductiveSplit(const LieAlgebra& g, const BiInvariantForm& q, std::vector<RVec> h, std::vector<RVec> m)
      : h_(std::move(h)), m_(std::move(m)), dim_g_(g.dim()) {
    if (h_.size() + m_.size() != dim_g_)
      throw SpecError("E_SPLIT", "split: dim h + dim m = " + std::to_string(h_.size() + m_.size()) +
                                     " differs from dim g = " + std::to_string(dim_g_));
    Matrix<Rational> b(dim_g_, dim_g_);
    for (std::size_t j = 0; j < h_.size(); ++j)
      for (std::size_t i = 0; i < dim_g_; ++i) b(i, j) = h_[j][i];
    for (std::size_t j = 0; j < m_.size(); ++j)
      for (std::size_t i = 0; i < dim_g_; ++i) b(i, h_.size() + j) = m_[j][i];
    if (rank(b) != dim_g_) throw SpecError("E_SPLIT", "split: h_basis and m_basis do not span g");
    binv_ = inverse(b);
    const std::size_t n = m_.size();
    q_m_ = Matrix<Rational>(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) q_m_(i, j) = q(m_[i], m_[j]);
    brackets_.assign(n * n, zero_vec(n));
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b2 = a + 1; b2 < n; ++b2) {
        RVec c = decompose(g.bracket(m_[a], m_[b2])).m;
        RVec neg = c;
        for (auto& x : neg) x = -x;
        brackets_[a * n + b2] = std::move(c);
        brackets_[b2 * n + a] = std::move(neg);
      }
  }

  [[nodiscard]] std::size_t dim_g() const { return dim_g_; }
  [[nodiscard]] std::size_t dim_h() const { return h_.size(); }
  [[nodiscard]] std::size_t dim_m() const { return m_.size(); }
  [[nodiscard]] const std::vector<RVec>& h_basis() const { return h_; }
  [[nodiscard]] const std::vector<RVec>& m_basis() const { return m_; }
  /// Q restricted to m in m_basis coordinates.
  [[nodiscard]] const Matrix<Rational>& q_m() const { return q_m_; }

  [[nodiscard]] Parts decompose(const RVec& x) const {
    RVec c = binv_.apply(x);
    Parts p;
    p.h.assign(c.begin(), c.begin() + static_cast<long>(h_.size()));
    p.m.assign(c.begin() + static_cast<long>(h_.size()), c.end());
    return p;
  }

  /// m-component of x, in g coordinates.
  [[nodiscard]] RVec project_m(const RVec& x) const { return combine(m_, decompose(x).m); }
  /// h-component of x, in g coordinates.
  [[nodiscard]] RVec project_h(const RVec& x) const { return combine(h_, decompose(x).h); }

  /// m_basis coordinates of [u_a, u_b]_m.
  [[nodiscard]] const RVec& bracket_m(std::size_t a, std::size_t b) const { return brackets_[a * m_.size() + b]; }

 private:
  RVec combine(const std::vector<RVec>& basis, const RVec& c) const {
    RVec out = zero_vec(dim_g_);
    for (std::size_t j = 0; j < basis.size(); ++j)
      if (!c[j].is_zero())
        for (std::size_t i = 0; i < dim_g_; ++i) out[i] += c[j] * basis[j][i];
    return out;
  }

  std::vector<RVec> h_, m_;
  std::size_t dim_g_ = 0;
  Matrix<Rational> binv_;
  Matrix<Rational> q_m_;
  std::vector<RVec> brackets_;
};

/// Q-orthogonal complement of span(h) in g.
inline std::vector<RVec> q_complement(const BiInvariantForm& q, const std::vector<RVec>& h, std::size_t dim) {
  if (h.empty()) {
    std::vector<RVec> out;
    for (std::size_t i = 0; i < dim; ++i) out.push_back(unit_vec(dim, i));
    return out;
  }
  Matrix<Rational> rows(h.size(), dim);
  for (std::size_t r = 0; r < h.size(); ++r)
    for (std::size_t j = 0; j < dim; ++j) rows(r, j) = q(h[r], unit_vec(dim, j));
  return nullspace(rows).basis;
}

/// Splits g and verifies: h is a subalgebra, m is Q-orthogonal to h,
/// [h, m] lies in m, and every declared block is invariant under h.
inline ReductiveSplit reductive_split(const HomogeneousSpaceSpec& spec) {
  const LieAlgebra& g = spec.algebra;
  const std::size_t n = g.dim();
  for (const auto& v : spec.h_basis)
    if (v.size() != n) throw SpecError("E_INDEX", "split: h vector length differs from dim g");
  for (const auto& v : spec.m_basis)
    if (v.size() != n) throw SpecError("E_INDEX", "split: m vector length differs from dim g");
  std::vector<RVec> m = spec.m_basis.empty() ? q_complement(spec.q, spec.h_basis, n) : spec.m_basis;
  for (std::size_t i = 0; i < spec.h_basis.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j)
      if (!spec.q(spec.h_basis[i], m[j]).is_zero())
        throw SpecError("E_SPLIT", "split: m vector " + std::to_string(j) + " not Q-orthogonal to h vector " +
                                       std::to_string(i));
  ReductiveSplit s(g, spec.q, spec.h_basis, m);
  for (std::size_t i = 0; i < s.dim_h(); ++i)
    for (std::size_t j = i + 1; j < s.dim_h(); ++j) {
      RVec b = g.bracket(spec.h_basis[i], spec.h_basis[j]);
      RVec esc = s.decompose(b).m;
      if (!is_zero_vec(esc))
        throw SpecError("E_NOT_SUBALGEBRA", "split: [h" + std::to_string(i) + ", h" + std::to_string(j) +
                                                "] = " + vec_str(b) + " escapes h");
    }
  for (std::size_t i = 0; i < s.dim_h(); ++i)
    for (std::size_t j = 0; j < s.dim_m(); ++j) {
      auto p = s.decompose(g.bracket(spec.h_basis[i], m[j]));
      if (!is_zero_vec(p.h))
        throw SpecError("E_NOT_REDUCTIVE", "split: [h" + std::to_string(i) + ", m" + std::to_string(j) +
                                               "] has nonzero h-component");
    }
  // Blocks: a partition of the m indices, each invariant under ad(h).
  if (!spec.blocks.empty()) {
    std::vector<int> owner(s.dim_m(), -1);
    for (std::size_t b = 0; b < spec.blocks.size(); ++b)
      for (std::size_t idx : spec.blocks[b]) {
        if (idx >= s.dim_m()) throw SpecError("E_INDEX", "blocks: index " + std::to_string(idx) + " out of range");
        if (owner[idx] != -1)
          throw SpecError("E_BLOCKS", "blocks: index " + std::to_string(idx) + " in more than one block");
        owner[idx] = static_cast<int>(b);
      }
    for (std::size_t i = 0; i < owner.size(); ++i)
      if (owner[i] == -1) throw SpecError("E_BLOCKS", "blocks: index " + std::to_string(i) + " in no block");
    for (std::size_t b = 0; b < spec.blocks.size(); ++b) {
      std::string bname = b < spec.block_names.size() ? spec.block_names[b] : "block" + std::to_string(b);
      for (std::size_t x = 0; x < s.dim_h(); ++x)
        for (std::size_t idx : spec.blocks[b]) {
          RVec c = s.decompose(g.bracket(spec.h_basis[x], m[idx])).m;
          for (std::size_t k = 0; k < c.size(); ++k)
            if (!c[k].is_zero() && owner[k] != static_cast<int>(b))
              throw SpecError("E_BLOCK_NOT_INVARIANT",
                              "blocks: " + bname + " not invariant under h" + std::to_string(x));
        }
      for (std::size_t idx : spec.blocks[b])
        for (std::size_t k = 0; k < s.dim_m(); ++k)
          if (owner[k] != static_cast<int>(b) && !s.q_m()(idx, k).is_zero())
            throw SpecError("E_BLOCKS", "blocks: " + bname + " not Q-orthogonal to the other blocks");
    }
  }
  return s;
}

/// Matrix of ad_X restricted to m, in m_basis coordinates. X is given in g
/// coordinates and must lie in span(h).
inline Matrix<Rational> isotropy_operator(const LieAlgebra& g, const ReductiveSplit& s, const RVec& x) {
  if (!is_zero_vec(s.decompose(x).m)) throw SpecError("E_NOT_IN_H", "isotropy: X is not in h");
  const std::size_t n = s.dim_m();
  Matrix<Rational> a(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    RVec c = s.decompose(g.bracket(x, s.m_basis()[j])).m;
    for (std::size_t i = 0; i < n; ++i) a(i, j) = c[i];
  }
  return a;
}

/// All isotropy operators of the h basis.
inline std::vector<Matrix<Rational>> isotropy_operators(const LieAlgebra& g, const ReductiveSplit& s) {
  std::vector<Matrix<Rational>> out;
  for (const auto& x : s.h_basis()) out.push_back(isotropy_operator(g, s, x));
  return out;
}

/// Metric on m: Gram matrix and its inverse (the pairing on 1-forms).
struct MetricOnM {
  Matrix<Scalar> gram;
  Matrix<Scalar> cogram;

  [[nodiscard]] bool is_rational() const {
    for (std::size_t i = 0; i < gram.rows(); ++i)
      for (std::size_t j = 0; j < gram.cols(); ++j)
        if (!gram(i, j).is_rational() || !cogram(i, j).is_rational()) return false;
    return true;
  }

  [[nodiscard]] MetricOnM specialize(std::span<const Rational> point) const {
    MetricOnM out{Matrix<Scalar>(gram.rows(), gram.cols()), Matrix<Scalar>(gram.rows(), gram.cols())};
    for (std::size_t i = 0; i < gram.rows(); ++i)
      for (std::size_t j = 0; j < gram.cols(); ++j) {
        out.gram(i, j) = Scalar(gram(i, j).evaluate(point));
        out.cogram(i, j) = Scalar(cogram(i, j).evaluate(point));
      }
    return out;
  }

  /// The metric c * g.
  [[nodiscard]] MetricOnM scaled(const Rational& c) const {
    MetricOnM out = *this;
    for (std::size_t i = 0; i < gram.rows(); ++i)
      for (std::size_t j = 0; j < gram.cols(); ++j) {
        out.gram(i, j) = gram(i, j) * Scalar(c);
        out.cogram(i, j) = cogram(i, j) * Scalar(c.inverse());
      }
    return out;
  }

  static MetricOnM from_gram(const Matrix<Rational>& g) {
    MetricOnM out{Matrix<Scalar>(g.rows(), g.cols()), Matrix<Scalar>(g.rows(), g.cols())};
    Matrix<Rational> inv = inverse(g);
    for (std::size_t i = 0; i < g.rows(); ++i)
      for (std::size_t j = 0; j < g.cols(); ++j) {
        out.gram(i, j) = Scalar(g(i, j));
        out.cogram(i, j) = Scalar(inv(i, j));
      }
    return out;
  }
};

inline Matrix<Rational> to_rational(const Matrix<Scalar>& m) {
  Matrix<Rational> r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = m(i, j).rational();
  return r;
}

inline Matrix<Rational> evaluate(const Matrix<Scalar>& m, std::span<const Rational> point) {
  Matrix<Rational> r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = m(i, j).evaluate(point);
  return r;
}

/// Builds the metric from a block-weight assignment on the given blocks.
inline MetricOnM block_metric(const Matrix<Rational>& q_m, const std::vector<std::vector<std::size_t>>& blocks,
                              const std::vector<Scalar>& weights, MetricKind kind) {
  const std::size_t n = q_m.rows();
  MetricOnM out{Matrix<Scalar>(n, n), Matrix<Scalar>(n, n)};
  if (weights.size() != blocks.size()) throw SpecError("E_METRIC", "metric: one weight per block required");
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const auto& idx = blocks[b];
    Matrix<Rational> qb(idx.size(), idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t j = 0; j < idx.size(); ++j) qb(i, j) = q_m(idx[i], idx[j]);
    Matrix<Rational> qinv = inverse(qb);
    const Scalar& w = weights[b];
    if (w.is_zero()) throw SpecError("E_METRIC", "metric: zero weight on block " + std::to_string(b));
    Scalar winv = Scalar(1) / w;
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t j = 0; j < idx.size(); ++j) {
        if (kind == MetricKind::Gram) {
          out.gram(idx[i], idx[j]) = w * Scalar(qb(i, j));
          out.cogram(idx[i], idx[j]) = winv * Scalar(qinv(i, j));
        } else {
          out.cogram(idx[i], idx[j]) = w * Scalar(qinv(i, j));
          out.gram(idx[i], idx[j]) = winv * Scalar(qb(i, j));
        }
      }
  }
  return out;
}

/// Resolves the spec's metric assignment into Gram and cogram matrices.
inline MetricOnM build_metric(const HomogeneousSpaceSpec& spec, const ReductiveSplit& s) {
  const auto& ma = spec.metric;
  if (ma.full) {
    const auto& f = *ma.full;
    if (f.rows() != s.dim_m() || f.cols() != s.dim_m())
      throw SpecError("E_METRIC", "metric: full matrix dimension differs from dim m");
    Matrix<Scalar> inv = inverse(f);
    return ma.kind == MetricKind::Gram ? MetricOnM{f, inv} : MetricOnM{inv, f};
  }
  std::vector<std::vector<std::size_t>> blocks = spec.blocks;
  if (blocks.empty()) {
    blocks.emplace_back();
    for (std::size_t i = 0; i < s.dim_m(); ++i) blocks.back().push_back(i);
  }
  std::vector<Scalar> w = ma.block_weights;
  if (w.empty()) w.assign(blocks.size(), Scalar(1));
  return block_metric(s.q_m(), blocks, w, ma.kind);
}

/// Sample points used for positivity checks; all-ones when none are declared.
inline std::vector<std::vector<Rational>> metric_samples(const HomogeneousSpaceSpec& spec) {
  if (!spec.samples.empty()) return spec.samples;
  return {std::vector<Rational>(spec.parameters.size(), Rational(1))};
}

/// Symmetry, positivity at the sample points, and g-skewness of every
/// isotropy operator (checked symbolically, hence for all parameter values).
inline ValidationReport validate_metric(const HomogeneousSpaceSpec& spec, const ReductiveSplit& s,
                                        const MetricOnM& g) {
  ValidationReport rep;
  if (!g.gram.is_symmetric()) rep.failures.push_back("metric: Gram not symmetric");
  for (const auto& pt : metric_samples(spec)) {
    if (pt.size() != spec.parameters.size()) {
      rep.failures.push_back("metric: sample arity differs from parameter count");
      continue;
    }
    try {
      if (auto k = first_nonpositive_pivot(evaluate(g.gram, pt)))
        rep.failures.push_back("metric: not positive definite at sample " + vec_str(pt));
    } catch (const std::domain_error&) {
      rep.failures.push_back("metric: pole at sample " + vec_str(pt));
    }
  }
  const std::size_t n = s.dim_m();
  for (std::size_t x = 0; x < s.dim_h(); ++x) {
    Matrix<Rational> a = isotropy_operator(spec.algebra, s, s.h_basis()[x]);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        Scalar acc(0);
        for (std::size_t k = 0; k < n; ++k) {
          if (!a(k, i).is_zero()) acc += Scalar(a(k, i)) * g.gram(k, j);
          if (!a(k, j).is_zero()) acc += g.gram(i, k) * Scalar(a(k, j));
        }
        if (!acc.is_zero()) {
          rep.failures.push_back("metric: not invariant under h" + std::to_string(x));
          return rep;
        }
      }
  }
  return rep;
}

}  // namespace invform
