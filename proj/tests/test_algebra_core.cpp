#include <gtest/gtest.h>

#include <random>

#include "invform/matrix.hpp"
#include "invform/poly.hpp"
#include "invform/roots.hpp"
#include "invform/scalar.hpp"

using namespace invform;

namespace {

Matrix<Rational> random_rational_matrix(std::mt19937& rng, std::size_t r, std::size_t c, int rank_cap) {
  std::uniform_int_distribution<int> d(-3, 3);
  // Product of r x k and k x c factors so that rank deficiency is common.
  std::size_t k = static_cast<std::size_t>(rank_cap);
  Matrix<Rational> a(r, k), b(k, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < k; ++j) a(i, j) = Rational(d(rng), 1 + (d(rng) + 3) % 3);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < c; ++j) b(i, j) = Rational(d(rng));
  return a * b;
}

std::vector<std::vector<Rational>> row_space(const std::vector<std::vector<Rational>>& vs, std::size_t n) {
  if (vs.empty()) return {};
  Matrix<Rational> m = Matrix<Rational>::from_rows(vs);
  auto piv = rref(m);
  std::vector<std::vector<Rational>> out;
  for (std::size_t i = 0; i < piv.size(); ++i) out.push_back(m.row(i));
  (void)n;
  return out;
}

}  // namespace

TEST(Rational, ParsesExactStringsAndRejectsFloats) {
  EXPECT_EQ(Rational::parse("-6/4"), Rational(-3, 2));
  EXPECT_EQ(Rational::parse("7"), Rational(7));
  EXPECT_EQ(Rational::parse("0/5").str(), "0");
  EXPECT_THROW(Rational::parse("1.5"), std::invalid_argument);
  EXPECT_THROW(Rational::parse("1/0"), std::invalid_argument);
  EXPECT_THROW(Rational::parse("1/-2"), std::invalid_argument);
  EXPECT_THROW(Rational::parse(""), std::invalid_argument);
}

TEST(Poly, ArithmeticAndGrlexOrder) {
  std::vector<std::string> names{"t", "u"};
  Poly p = Poly::parse("t^2 - 2*t*u + u", names);
  Poly q = Poly::parse("t - u", names);
  EXPECT_EQ((q * q).str(names), "t^2 - 2*t*u + u^2");
  EXPECT_EQ(p.str(names), "t^2 - 2*t*u + u");
  EXPECT_EQ(p.leading_coefficient(), Rational(1));
  EXPECT_TRUE((p - p).is_zero());
  EXPECT_EQ(Poly::parse("$t*3/2", names).str(names), "3/2*t");
  EXPECT_THROW(Poly::parse("t*v", names), std::invalid_argument);
  EXPECT_THROW(Poly::parse("0.5*t", names), std::invalid_argument);
}

TEST(Poly, ExactDivision) {
  std::vector<std::string> names{"t", "u"};
  Poly a = Poly::parse("t - u", names);
  Poly b = Poly::parse("t^2 + u + 1", names);
  auto q = (a * b).divide_exact(b);
  ASSERT_TRUE(q.has_value());
  EXPECT_EQ(*q, a);
  EXPECT_FALSE((a * b + Poly(1)).divide_exact(b).has_value());
}

TEST(RatFunc, CrossMultiplicationEquality) {
  std::vector<std::string> names{"t"};
  Poly t = Poly::parse("t", names);
  RatFunc a(t * t - Poly(1), t - Poly(1));
  RatFunc b(t + Poly(1));
  EXPECT_TRUE(a == b);
  RatFunc c(Poly(2), t * Poly(2));
  EXPECT_TRUE(c * RatFunc(t) == RatFunc(Rational(1)));
  Scalar s = Scalar(c) * Scalar(RatFunc(t));
  EXPECT_TRUE(s.is_rational());
  EXPECT_EQ(s.rational(), Rational(1));
}

TEST(Nullspace, IdentityHasTrivialKernel) {
  auto ns = nullspace(Matrix<Rational>::identity(3));
  EXPECT_TRUE(ns.basis.empty());
  EXPECT_TRUE(ns.pivots.empty());
}

TEST(Nullspace, ZeroMatrixGivesUnitVectors) {
  auto ns = nullspace(Matrix<Rational>(2, 2));
  ASSERT_EQ(ns.basis.size(), 2u);
  EXPECT_EQ(ns.basis[0], (std::vector<Rational>{1, 0}));
  EXPECT_EQ(ns.basis[1], (std::vector<Rational>{0, 1}));
  EXPECT_TRUE(ns.pivots.empty());
}

TEST(Nullspace, SumConstraintRow) {
  auto m = Matrix<Rational>::from_rows({{1, 1, 1}});
  auto ns = nullspace(m);
  ASSERT_EQ(ns.basis.size(), 2u);
  EXPECT_EQ(ns.basis[0], (std::vector<Rational>{-1, 1, 0}));
  EXPECT_EQ(ns.basis[1], (std::vector<Rational>{-1, 0, 1}));
  for (const auto& v : ns.basis) EXPECT_TRUE(m.apply(v)[0].is_zero());
}

TEST(Nullspace, ScalarMatrixOverRationalsHasNoPivots) {
  ScalarMatrix m(1, 3);
  m(0, 0) = Scalar(1);
  m(0, 1) = Scalar(1);
  m(0, 2) = Scalar(1);
  auto ns = nullspace(m);
  EXPECT_EQ(ns.basis.size(), 2u);
  EXPECT_TRUE(ns.pivots.empty());
}

TEST(NullspaceProperty, RandomRationalKernelIsExact) {
  std::mt19937 rng(1234);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t r = 1 + rng() % 5, c = 1 + rng() % 6;
    auto m = random_rational_matrix(rng, r, c, 1 + static_cast<int>(rng() % 4));
    auto ns = nullspace(m);
    EXPECT_EQ(ns.rank + ns.basis.size(), c);
    for (const auto& v : ns.basis)
      for (const auto& x : m.apply(v)) EXPECT_TRUE(x.is_zero());
  }
}

TEST(NullspaceProperty, FractionFreeSpecializesLikeDirectElimination) {
  std::mt19937 rng(99);
  std::uniform_int_distribution<int> d(-2, 2);
  std::vector<std::string> names{"t"};
  Poly t = Poly::var(0, 1);
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    // 4x4 with entries of degree <= 2 in t; a fraction of trials forced singular.
    Matrix<Poly> a(4, 4);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j)
        a(i, j) = Poly(d(rng)) + Poly(d(rng)) * t + (trial % 3 == 0 ? Poly(0) : Poly(d(rng)) * t * t);
    if (trial % 2 == 0)
      for (std::size_t j = 0; j < 4; ++j) a(3, j) = a(0, j) * (t + Poly(1)) - a(1, j);
    auto ns = nullspace(a);
    for (int value = -3; value <= 3; ++value) {
      Rational x(value, 2);
      std::vector<Rational> pt{x};
      bool degenerate = false;
      for (const auto& p : ns.pivots)
        if (p.evaluate(pt).is_zero()) degenerate = true;
      if (degenerate) continue;
      Matrix<Rational> s(4, 4);
      for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) s(i, j) = a(i, j).evaluate(pt);
      auto direct = nullspace(s);
      std::vector<std::vector<Rational>> spec;
      for (const auto& v : ns.basis) {
        std::vector<Rational> w;
        for (const auto& e : v) w.push_back(e.evaluate(pt));
        spec.push_back(w);
      }
      EXPECT_EQ(row_space(spec, 4), row_space(direct.basis, 4));
      ++checked;
    }
  }
  EXPECT_GT(checked, 100);
}

TEST(Determinant, MatchesCofactorExpansion) {
  auto m = Matrix<Rational>::from_rows({{2, -1, 0}, {1, 3, 4}, {0, 5, -2}});
  // 2*(3*-2 - 4*5) - (-1)*(1*-2 - 0) = -52 - 2
  EXPECT_EQ(determinant(m), Rational(-54));
  auto inv = inverse(m);
  EXPECT_EQ(inv * m, Matrix<Rational>::identity(3));
}

TEST(RealRoots, ExactRationalRoots) {
  std::vector<std::string> names{"t"};
  auto r = real_roots(Poly::parse("t^2 - 1", names));
  ASSERT_EQ(r.size(), 2u);
  EXPECT_TRUE(r[0].exact && r[1].exact);
  EXPECT_EQ(r[0].lo, Rational(-1));
  EXPECT_EQ(r[1].lo, Rational(1));

  auto z = real_roots(Poly::parse("t", names));
  ASSERT_EQ(z.size(), 1u);
  EXPECT_TRUE(z[0].exact);
  EXPECT_EQ(z[0].lo, Rational(0));

  EXPECT_TRUE(real_roots(Poly::parse("t^2 + 1", names)).empty());
}

TEST(RealRoots, RejectsMultivariate) {
  std::vector<std::string> names{"t", "u"};
  EXPECT_THROW(real_roots(Poly::parse("t*u - 1", names)), std::invalid_argument);
}

TEST(RealRoots, SturmCountsAndIsolation) {
  std::vector<std::string> names{"t"};
  // (t^2 - 2)(t - 1/3)^2 (t + 5): roots -5, -sqrt2, 1/3, sqrt2.
  Poly p = Poly::parse("(t^2 - 2)*(3*t - 1)^2*(t + 5)", names);
  auto roots = real_roots(p);
  ASSERT_EQ(roots.size(), 4u);
  UPoly u(p.univariate_coefficients(0));
  UPoly sq = divmod(u, gcd(u, u.derivative())).first;
  auto seq = sturm_sequence(sq);
  UPoly irr({Rational(-2), Rational(0), Rational(1)});
  for (std::size_t i = 0; i < roots.size(); ++i) {
    const auto& r = roots[i];
    if (r.exact) {
      EXPECT_TRUE(u(r.lo).is_zero());
    } else {
      EXPECT_EQ(UPoly::sign_changes(seq, r.lo) - UPoly::sign_changes(seq, r.hi), 1);
      EXPECT_NE(u(r.lo).sign(), u(r.hi).sign());
    }
    if (i > 0) {
      EXPECT_LE(roots[i - 1].hi, r.lo);
    }
  }
  EXPECT_EQ(roots[0].lo, Rational(-5));
  EXPECT_EQ(roots[2].lo, Rational(1, 3));
  auto fine = refine(irr, roots[3], Rational(1, 1000));
  EXPECT_LT(fine.lo * fine.lo, Rational(2));
  EXPECT_GT(fine.hi * fine.hi, Rational(2));
}
