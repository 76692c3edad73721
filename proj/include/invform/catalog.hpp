#pragma once

#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "invform/homogeneous.hpp"
#include "invform/matrix.hpp"
#include "invform/rational.hpp"

namespace invform {

/// Quaternion with rational components a + b i + c j + d k. Complex numbers
/// are the quaternions with c = d = 0.
struct Quat {
  Rational a, b, c, d;

  friend Quat operator+(const Quat& x, const Quat& y) { return {x.a + y.a, x.b + y.b, x.c + y.c, x.d + y.d}; }
  friend Quat operator-(const Quat& x, const Quat& y) { return {x.a - y.a, x.b - y.b, x.c - y.c, x.d - y.d}; }
  friend Quat operator*(const Quat& x, const Quat& y) {
    return {x.a * y.a - x.b * y.b - x.c * y.c - x.d * y.d, x.a * y.b + x.b * y.a + x.c * y.d - x.d * y.c,
            x.a * y.c - x.b * y.d + x.c * y.a + x.d * y.b, x.a * y.d + x.b * y.c - x.c * y.b + x.d * y.a};
  }
  friend Quat operator*(const Rational& s, const Quat& x) { return {s * x.a, s * x.b, s * x.c, s * x.d}; }
  friend bool operator==(const Quat&, const Quat&) = default;
  [[nodiscard]] bool is_zero() const { return a.is_zero() && b.is_zero() && c.is_zero() && d.is_zero(); }
};

inline const Quat kOne{1, 0, 0, 0}, kI{0, 1, 0, 0}, kJ{0, 0, 1, 0}, kK{0, 0, 0, 1};

/// Square matrix over the quaternions.
struct QMatrix {
  std::size_t n = 0;
  std::vector<Quat> e;

  explicit QMatrix(std::size_t size = 0) : n(size), e(size * size, Quat{}) {}
  Quat& operator()(std::size_t i, std::size_t j) { return e[i * n + j]; }
  const Quat& operator()(std::size_t i, std::size_t j) const { return e[i * n + j]; }

  friend QMatrix operator*(const QMatrix& x, const QMatrix& y) {
    QMatrix r(x.n);
    for (std::size_t i = 0; i < x.n; ++i)
      for (std::size_t k = 0; k < x.n; ++k) {
        if (x(i, k).is_zero()) continue;
        for (std::size_t j = 0; j < x.n; ++j) r(i, j) = r(i, j) + x(i, k) * y(k, j);
      }
    return r;
  }
  friend QMatrix operator+(QMatrix x, const QMatrix& y) {
    for (std::size_t i = 0; i < x.e.size(); ++i) x.e[i] = x.e[i] + y.e[i];
    return x;
  }
  friend QMatrix operator-(QMatrix x, const QMatrix& y) {
    for (std::size_t i = 0; i < x.e.size(); ++i) x.e[i] = x.e[i] - y.e[i];
    return x;
  }
  friend QMatrix operator*(const Rational& s, QMatrix x) {
    for (auto& q : x.e) q = s * q;
    return x;
  }
  [[nodiscard]] Rational re_trace() const {
    Rational t(0);
    for (std::size_t i = 0; i < n; ++i) t += (*this)(i, i).a;
    return t;
  }
  [[nodiscard]] RVec flatten() const {
    RVec v;
    v.reserve(4 * e.size());
    for (const auto& q : e) {
      v.push_back(q.a);
      v.push_back(q.b);
      v.push_back(q.c);
      v.push_back(q.d);
    }
    return v;
  }

  /// q * E_ij.
  static QMatrix unit(std::size_t size, std::size_t i, std::size_t j, const Quat& q) {
    QMatrix m(size);
    m(i, j) = q;
    return m;
  }
};

/// Structure constants from an explicit basis of traceless matrices, with
/// Q(A, B) = -scale * Re tr(AB).
class MatrixAlgebra {
 public:
  MatrixAlgebra(std::vector<QMatrix> basis, std::vector<std::string> labels, Rational scale)
      : basis_(std::move(basis)), labels_(std::move(labels)), scale_(std::move(scale)) {
    const std::size_t d = basis_.size();
    std::vector<RVec> cols;
    for (const auto& b : basis_) cols.push_back(b.flatten());
    flat_ = Matrix<Rational>(cols.empty() ? 0 : cols[0].size(), d);
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t i = 0; i < flat_.rows(); ++i) flat_(i, j) = cols[j][i];
    Matrix<Rational> mtm = flat_.transpose() * flat_;
    normal_inv_ = inverse(mtm);
  }

  [[nodiscard]] std::size_t dim() const { return basis_.size(); }
  [[nodiscard]] const std::vector<QMatrix>& basis() const { return basis_; }

  /// Basis coordinates of a matrix in the span; throws otherwise.
  [[nodiscard]] RVec coords(const QMatrix& x) const {
    RVec f = x.flatten();
    RVec rhs = flat_.transpose().apply(f);
    RVec c = normal_inv_.apply(rhs);
    if (!(flat_.apply(c) == f)) throw std::logic_error("MatrixAlgebra: matrix outside the span of the basis");
    return c;
  }

  [[nodiscard]] QMatrix matrix(const RVec& c) const {
    QMatrix r(basis_.empty() ? 0 : basis_[0].n);
    for (std::size_t i = 0; i < c.size(); ++i)
      if (!c[i].is_zero()) r = r + c[i] * basis_[i];
    return r;
  }

  [[nodiscard]] LieAlgebra lie_algebra() const {
    std::vector<BracketEntry> entries;
    for (std::size_t i = 0; i < dim(); ++i)
      for (std::size_t j = i + 1; j < dim(); ++j) {
        RVec c = coords(basis_[i] * basis_[j] - basis_[j] * basis_[i]);
        BracketEntry e{i, j, {}};
        for (std::size_t k = 0; k < c.size(); ++k)
          if (!c[k].is_zero()) e.value.emplace_back(k, c[k]);
        if (!e.value.empty()) entries.push_back(std::move(e));
      }
    return LieAlgebra(dim(), labels_, std::move(entries));
  }

  [[nodiscard]] BiInvariantForm q_form() const {
    Matrix<Rational> g(dim(), dim());
    for (std::size_t i = 0; i < dim(); ++i)
      for (std::size_t j = 0; j < dim(); ++j) g(i, j) = -scale_ * (basis_[i] * basis_[j]).re_trace();
    return {g};
  }

 private:
  std::vector<QMatrix> basis_;
  std::vector<std::string> labels_;
  Rational scale_;
  Matrix<Rational> flat_;
  Matrix<Rational> normal_inv_;
};

namespace catalog {

/// Scales a rational vector to a primitive integer vector whose first nonzero entry is positive.
inline RVec primitive(RVec v) {
  mpz_class l = 1, g = 0;
  for (const auto& x : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.den().get_mpz_t());
  for (auto& x : v) {
    x = x * Rational(l);
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.num().get_mpz_t());
  }
  if (g == 0) return v;
  int s = 0;
  for (const auto& x : v)
    if (!x.is_zero()) {
      s = x.sign();
      break;
    }
  for (auto& x : v) x = x * Rational(mpz_class(s < 0 ? -1 : 1), g);
  return v;
}

/// su(3) in the basis E1, E2, E3, F1, F2, F3, H1, H2 with Q = -1/2 tr(AB).
inline MatrixAlgebra su3() {
  auto u = [](std::size_t i, std::size_t j, const Quat& q) { return QMatrix::unit(3, i, j, q); };
  Quat m1{-1, 0, 0, 0}, mi{0, -1, 0, 0};
  std::vector<QMatrix> b{
      u(0, 1, kOne) + u(1, 0, m1),  // E1
      u(0, 2, m1) + u(2, 0, kOne),  // E2
      u(1, 2, kOne) + u(2, 1, m1),  // E3
      u(0, 1, kI) + u(1, 0, kI),    // F1
      u(0, 2, kI) + u(2, 0, kI),    // F2
      u(1, 2, kI) + u(2, 1, kI),    // F3
      u(0, 0, kI) + u(1, 1, mi),    // H1
      u(0, 0, mi) + u(2, 2, kI),    // H2
  };
  return MatrixAlgebra(std::move(b), {"E1", "E2", "E3", "F1", "F2", "F3", "H1", "H2"}, Rational(1, 2));
}

/// Coordinates of r1 H1 + r2 H2 + r3 H3 in the su3() basis (H3 = -H1 - H2).
inline RVec su3_h(const Rational& r1, const Rational& r2, const Rational& r3) {
  RVec v = zero_vec(8);
  v[6] = r1 - r3;
  v[7] = r2 - r3;
  return v;
}

inline HomogeneousSpaceSpec su3_base(const std::string& name) {
  MatrixAlgebra a = su3();
  HomogeneousSpaceSpec s;
  s.name = name;
  s.algebra = a.lie_algebra();
  s.q = a.q_form();
  return s;
}

/// The default rational epsilon direction r = (r1, r2, r3) for a weight triple.
inline std::vector<Rational> aloff_wallach_default_r(long k1, long k2, long k3) {
  if (k1 == -2 && k2 == 1 && k3 == 1) return {0, 0, 1};  // H3
  // Q-orthogonal to -k2 H1 + k3 H2 inside span(H1, H2).
  RVec v = primitive({Rational(k2 + 2 * k3), Rational(2 * k2 + k3)});
  return {v[0], v[1], Rational(0)};
}

/// SU(3)/S^1_k with m = E1, E2, E3, F1, F2, F3, eps and blocks V0, V1, V2, V3.
inline HomogeneousSpaceSpec aloff_wallach(long k1, long k2, long k3, std::vector<Rational> r = {}) {
  if (k1 + k2 + k3 != 0) throw std::invalid_argument("aloff_wallach: weights must sum to zero");
  if (r.empty()) r = aloff_wallach_default_r(k1, k2, k3);
  auto s = su3_base("aloff_wallach_" + std::to_string(k1) + "_" + std::to_string(k2) + "_" + std::to_string(k3));
  RVec h = su3_h(Rational(-k2), Rational(k3), Rational(0));
  RVec eps = su3_h(r[0], r[1], r[2]);
  if (!s.q(h, eps).is_zero()) throw std::invalid_argument("aloff_wallach: eps not Q-orthogonal to h");
  s.h_basis = {h};
  for (std::size_t i = 0; i < 6; ++i) s.m_basis.push_back(unit_vec(8, i));
  s.m_basis.push_back(eps);
  s.m_labels = {"E1", "E2", "E3", "F1", "F2", "F3", "eps"};
  s.blocks = {{6}, {0, 3}, {1, 4}, {2, 5}};
  s.block_names = {"V0", "V1", "V2", "V3"};
  s.metric.block_weights.assign(4, Scalar(1));
  return s;
}

/// SU(3)/T^2 with blocks V1, V2, V3.
inline HomogeneousSpaceSpec w6() {
  auto s = su3_base("w6");
  s.h_basis = {unit_vec(8, 6), unit_vec(8, 7)};
  for (std::size_t i = 0; i < 6; ++i) s.m_basis.push_back(unit_vec(8, i));
  s.m_labels = {"E1", "E2", "E3", "F1", "F2", "F3"};
  s.blocks = {{0, 3}, {1, 4}, {2, 5}};
  s.block_names = {"V1", "V2", "V3"};
  s.metric.block_weights.assign(3, Scalar(1));
  return s;
}

/// SU(3)/SU(2) = S^5, SU(2) in the upper-left corner.
inline HomogeneousSpaceSpec s5() {
  auto s = su3_base("s5");
  s.h_basis = {unit_vec(8, 0), unit_vec(8, 3), unit_vec(8, 6)};
  s.m_basis = {unit_vec(8, 1), unit_vec(8, 2), unit_vec(8, 4), unit_vec(8, 5), su3_h(1, 2, 0)};
  s.m_labels = {"E2", "E3", "F2", "F3", "eps"};
  s.blocks = {{0, 1, 2, 3}, {4}};
  s.block_names = {"C2", "V0"};
  s.metric.block_weights.assign(2, Scalar(1));
  return s;
}

/// sp(n+1) as quaternionic skew-Hermitian matrices. Basis order: imaginary
/// diagonal entries (i, j, k per diagonal slot), then for each a < b the
/// off-diagonal quadruple E_ab - E_ba, q(E_ab + E_ba) for q = i, j, k.
inline MatrixAlgebra sp(std::size_t n1) {
  std::vector<QMatrix> b;
  std::vector<std::string> labels;
  const char* qn[] = {"i", "j", "k"};
  const Quat qs[] = {kI, kJ, kK};
  for (std::size_t a = 0; a < n1; ++a)
    for (int q = 0; q < 3; ++q) {
      b.push_back(QMatrix::unit(n1, a, a, qs[q]));
      labels.push_back(std::string("D") + std::to_string(a + 1) + qn[q]);
    }
  for (std::size_t a = 0; a < n1; ++a)
    for (std::size_t c = a + 1; c < n1; ++c) {
      std::string tag = std::to_string(a + 1) + std::to_string(c + 1);
      b.push_back(QMatrix::unit(n1, a, c, kOne) - QMatrix::unit(n1, c, a, kOne));
      labels.push_back("X" + tag);
      for (int q = 0; q < 3; ++q) {
        b.push_back(QMatrix::unit(n1, a, c, qs[q]) + QMatrix::unit(n1, c, a, qs[q]));
        labels.push_back("X" + tag + qn[q]);
      }
    }
  return MatrixAlgebra(std::move(b), std::move(labels), Rational(1, 2));
}

/// CP^{2n+1} = Sp(n+1)/Sp(n).U(1), Sp(n) in the upper block, U(1) = e^{it} in
/// the last slot. m = e2, e3, then Y_a, Y_a_1, Y_a_2, Y_a_3 for a = 1..n;
/// blocks V = span(e2, e3) and W. The fiber V carries the parameter t as a
/// coform weight t/2, so the dual 1-forms of e2, e3 pair to t; W has weight 1.
inline HomogeneousSpaceSpec cp(std::size_t n) {
  const std::size_t n1 = n + 1;
  MatrixAlgebra a = sp(n1);
  HomogeneousSpaceSpec s;
  s.name = "cp" + std::to_string(2 * n + 1);
  s.algebra = a.lie_algebra();
  s.q = a.q_form();
  const std::size_t last = n;
  // sp(n) in the upper block.
  for (std::size_t x = 0; x < n; ++x)
    for (const Quat& q : {kI, kJ, kK}) s.h_basis.push_back(a.coords(QMatrix::unit(n1, x, x, q)));
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = x + 1; y < n; ++y) {
      s.h_basis.push_back(a.coords(QMatrix::unit(n1, x, y, kOne) - QMatrix::unit(n1, y, x, kOne)));
      for (const Quat& q : {kI, kJ, kK})
        s.h_basis.push_back(a.coords(QMatrix::unit(n1, x, y, q) + QMatrix::unit(n1, y, x, q)));
    }
  s.h_basis.push_back(a.coords(QMatrix::unit(n1, last, last, kI)));  // e1
  s.m_basis.push_back(a.coords(QMatrix::unit(n1, last, last, kJ)));  // e2
  s.m_basis.push_back(a.coords(QMatrix::unit(n1, last, last, kK)));  // e3
  s.m_labels = {"e2", "e3"};
  std::vector<std::size_t> w;
  for (std::size_t al = 0; al < n; ++al) {
    std::string y = "Y" + std::to_string(al + 1);
    s.m_basis.push_back(a.coords(QMatrix::unit(n1, al, last, kOne) - QMatrix::unit(n1, last, al, kOne)));
    s.m_labels.push_back(y);
    const char* suffix[] = {"_1", "_2", "_3"};
    int qi = 0;
    for (const Quat& q : {kI, kJ, kK}) {
      s.m_basis.push_back(a.coords(QMatrix::unit(n1, al, last, q) + QMatrix::unit(n1, last, al, q)));
      s.m_labels.push_back(y + suffix[qi++]);
    }
  }
  for (std::size_t i = 2; i < s.m_basis.size(); ++i) w.push_back(i);
  s.blocks = {{0, 1}, w};
  s.block_names = {"V", "W"};
  s.parameters = {"t"};
  s.metric.kind = MetricKind::Coform;
  s.metric.block_weights = {Scalar(Poly::var(0, 1) * Rational(1, 2)), Scalar(1)};
  s.samples = {{Rational(1)}, {Rational(1, 2)}, {Rational(2)}};
  return s;
}

/// su(n) with basis E_ab - E_ba, i(E_ab + E_ba) for a < b, then i(E_aa - E_a+1,a+1).
inline MatrixAlgebra su(std::size_t n) {
  std::vector<QMatrix> b;
  std::vector<std::string> labels;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t c = a + 1; c < n; ++c) {
      std::string tag = std::to_string(a + 1) + std::to_string(c + 1);
      b.push_back(QMatrix::unit(n, a, c, kOne) - QMatrix::unit(n, c, a, kOne));
      labels.push_back("A" + tag);
      b.push_back(QMatrix::unit(n, a, c, kI) + QMatrix::unit(n, c, a, kI));
      labels.push_back("S" + tag);
    }
  for (std::size_t a = 0; a + 1 < n; ++a) {
    b.push_back(QMatrix::unit(n, a, a, kI) - QMatrix::unit(n, a + 1, a + 1, kI));
    labels.push_back("T" + std::to_string(a + 1));
  }
  return MatrixAlgebra(std::move(b), std::move(labels), Rational(1, 2));
}

/// B^13 = SU(5)/Sp(2).S^1 with Sp(2).S^1 embedded as diag(zA, z^-4) and
/// Sp(2) the subgroup of SU(4) preserving J = [[0, I], [-I, 0]].
/// m = V (dim 5) + W (dim 8).
inline HomogeneousSpaceSpec berger13() {
  MatrixAlgebra a = su(5);
  HomogeneousSpaceSpec s;
  s.name = "berger13";
  s.algebra = a.lie_algebra();
  s.q = a.q_form();
  const std::size_t dim = a.dim();
  // su(4) block: basis elements supported on indices < 4.
  std::vector<std::size_t> su4;
  for (std::size_t i = 0; i < dim; ++i) {
    const QMatrix& m = a.basis()[i];
    bool inside = true;
    for (std::size_t r = 0; r < 5; ++r)
      if (!m(r, 4).is_zero() || !m(4, r).is_zero()) inside = false;
    if (inside) su4.push_back(i);
  }
  // The diagonal generator T4 = i(E44 - E55) also lies outside su(4); the
  // su(4) block tracelessness is automatic for the remaining T1..T3.
  // sp(2) inside su(4): X^T J + J X = 0 (plain transpose).
  QMatrix jmat(5);
  jmat(0, 2) = kOne;
  jmat(1, 3) = kOne;
  jmat(2, 0) = Quat{-1, 0, 0, 0};
  jmat(3, 1) = Quat{-1, 0, 0, 0};
  auto transpose = [](const QMatrix& x) {
    QMatrix r(x.n);
    for (std::size_t i = 0; i < x.n; ++i)
      for (std::size_t j = 0; j < x.n; ++j) r(i, j) = x(j, i);
    return r;
  };
  std::vector<RVec> cond_cols;
  for (std::size_t idx : su4) {
    const QMatrix& x = a.basis()[idx];
    cond_cols.push_back((transpose(x) * jmat + jmat * x).flatten());
  }
  Matrix<Rational> cond(cond_cols[0].size(), su4.size());
  for (std::size_t j = 0; j < su4.size(); ++j)
    for (std::size_t i = 0; i < cond.rows(); ++i) cond(i, j) = cond_cols[j][i];
  auto sp2 = nullspace(cond).basis;
  if (sp2.size() != 10) throw std::logic_error("berger13: sp(2) dimension check failed");
  auto lift = [&](const RVec& c) {
    RVec v = zero_vec(dim);
    for (std::size_t j = 0; j < su4.size(); ++j) v[su4[j]] = c[j];
    return primitive(v);
  };
  for (const auto& c : sp2) s.h_basis.push_back(lift(c));
  QMatrix u1(5);
  for (std::size_t r = 0; r < 4; ++r) u1(r, r) = kI;
  u1(4, 4) = Quat{0, -4, 0, 0};
  s.h_basis.push_back(a.coords(u1));
  // V: Q-complement of sp(2) inside su(4).
  Matrix<Rational> rows(sp2.size(), su4.size());
  for (std::size_t r = 0; r < sp2.size(); ++r) {
    RVec hv = lift(sp2[r]);
    for (std::size_t j = 0; j < su4.size(); ++j) rows(r, j) = s.q(hv, unit_vec(dim, su4[j]));
  }
  auto vbasis = nullspace(rows).basis;
  if (vbasis.size() != 5) throw std::logic_error("berger13: V dimension check failed");
  for (std::size_t i = 0; i < vbasis.size(); ++i) {
    s.m_basis.push_back(lift(vbasis[i]));
    s.m_labels.push_back("v" + std::to_string(i + 1));
  }
  int wi = 0;
  for (std::size_t r = 0; r < 4; ++r) {
    s.m_basis.push_back(a.coords(QMatrix::unit(5, r, 4, kOne) - QMatrix::unit(5, 4, r, kOne)));
    s.m_labels.push_back("w" + std::to_string(++wi));
    s.m_basis.push_back(a.coords(QMatrix::unit(5, r, 4, kI) + QMatrix::unit(5, 4, r, kI)));
    s.m_labels.push_back("w" + std::to_string(++wi));
  }
  s.blocks = {{0, 1, 2, 3, 4}, {5, 6, 7, 8, 9, 10, 11, 12}};
  s.block_names = {"V", "W"};
  s.metric.block_weights = {Scalar(1), Scalar(1)};
  return s;
}

}  // namespace catalog
}  // namespace invform
