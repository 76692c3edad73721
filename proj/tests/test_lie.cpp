#include <gtest/gtest.h>

#include "invform/catalog.hpp"
#include "invform/homogeneous.hpp"

using namespace invform;

namespace {

// su(3) basis order: E1 E2 E3 F1 F2 F3 H1 H2.
constexpr std::size_t E1 = 0, E2 = 1, E3 = 2, F1 = 3, H1 = 6, H2 = 7;

std::vector<HomogeneousSpaceSpec> all_specs() {
  return {catalog::aloff_wallach(-2, 1, 1), catalog::aloff_wallach(1, -1, 0), catalog::aloff_wallach(1, 2, -3),
          catalog::w6(),  catalog::s5(), catalog::cp(1), catalog::berger13()};
}

}  // namespace

TEST(ValidateAlgebra, Su3TablePasses) {
  auto a = catalog::su3().lie_algebra();
  EXPECT_EQ(a.dim(), 8u);
  EXPECT_TRUE(validate_algebra(a).ok());
  // [H1, E1] = 2 F1 and [H1, F1] = -2 E1.
  RVec he = zero_vec(8), hf = zero_vec(8);
  he[F1] = Rational(2);
  hf[E1] = Rational(-2);
  EXPECT_EQ(a.bracket(H1, E1), he);
  EXPECT_EQ(a.bracket(H1, F1), hf);
}

TEST(ValidateAlgebra, AbelianPasses) {
  LieAlgebra a(4, {}, {});
  EXPECT_TRUE(validate_algebra(a).ok());
}

TEST(ValidateAlgebra, PerturbedBracketFailsJacobiWithTriple) {
  auto a = catalog::su3().lie_algebra();
  std::vector<BracketEntry> entries;
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = i + 1; j < 8; ++j) {
      RVec v = a.bracket(i, j);
      if (i == E1 && j == E2)
        for (auto& x : v) x = x * Rational(2);
      BracketEntry e{i, j, {}};
      for (std::size_t k = 0; k < 8; ++k)
        if (!v[k].is_zero()) e.value.emplace_back(k, v[k]);
      if (!e.value.empty()) entries.push_back(e);
    }
  LieAlgebra bad(8, a.labels(), entries);
  auto rep = validate_algebra(bad);
  ASSERT_FALSE(rep.ok());
  ASSERT_TRUE(rep.witness_triple.has_value());
  EXPECT_FALSE(is_zero_vec(rep.witness_value));
  // The witness re-verifies.
  auto [i, j, k] = *rep.witness_triple;
  RVec s = bad.bracket(bad.bracket(unit_vec(8, i), unit_vec(8, j)), unit_vec(8, k));
  RVec t = bad.bracket(bad.bracket(unit_vec(8, j), unit_vec(8, k)), unit_vec(8, i));
  RVec u = bad.bracket(bad.bracket(unit_vec(8, k), unit_vec(8, i)), unit_vec(8, j));
  for (std::size_t c = 0; c < 8; ++c) s[c] += t[c] + u[c];
  EXPECT_EQ(s, rep.witness_value);
}

TEST(ValidateAlgebra, SelfBracketAndConflictsReported) {
  LieAlgebra self(2, {}, {BracketEntry{0, 0, {{1, Rational(1)}}}});
  EXPECT_FALSE(validate_algebra(self).ok());
  LieAlgebra conflict(2, {}, {BracketEntry{0, 1, {{1, Rational(1)}}}, BracketEntry{1, 0, {{1, Rational(1)}}}});
  EXPECT_FALSE(validate_algebra(conflict).ok());
  LieAlgebra consistent(2, {}, {BracketEntry{0, 1, {{1, Rational(1)}}}, BracketEntry{1, 0, {{1, Rational(-1)}}}});
  EXPECT_TRUE(validate_algebra(consistent).ok());
}

TEST(ValidateQ, NegativeHalfTraceOnSu3) {
  auto m = catalog::su3();
  auto a = m.lie_algebra();
  auto q = m.q_form();
  EXPECT_TRUE(validate_q(a, q).ok());
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) EXPECT_EQ(q.gram(i, j), Rational(i == j ? 1 : 0));
  EXPECT_EQ(q.gram(H1, H1), Rational(1));
  EXPECT_EQ(q.gram(H1, H2), Rational(-1, 2));
}

TEST(ValidateQ, IdentityOnAbelianPassesAndOnSu3Fails) {
  LieAlgebra ab(3, {}, {});
  EXPECT_TRUE(validate_q(ab, BiInvariantForm{Matrix<Rational>::identity(3)}).ok());
  auto su3 = catalog::su3().lie_algebra();
  auto rep = validate_q(su3, BiInvariantForm{Matrix<Rational>::identity(8)});
  ASSERT_FALSE(rep.ok());
  ASSERT_TRUE(rep.witness_triple.has_value());
  auto [x, y, z] = *rep.witness_triple;
  BiInvariantForm id{Matrix<Rational>::identity(8)};
  EXPECT_FALSE((id(su3.bracket(x, y), unit_vec(8, z)) + id(unit_vec(8, y), su3.bracket(x, z))).is_zero());
}

TEST(ValidateQ, RejectsIndefinite) {
  LieAlgebra ab(2, {}, {});
  Matrix<Rational> g(2, 2);
  g(0, 0) = Rational(1);
  g(1, 1) = Rational(-1);
  EXPECT_FALSE(validate_q(ab, BiInvariantForm{g}).ok());
}

TEST(ReductiveSplit, AloffWallachMinusTwoOneOne) {
  auto s = catalog::aloff_wallach(-2, 1, 1);
  auto sp = reductive_split(s);
  EXPECT_EQ(sp.dim_m(), 7u);
  // eps = H3 = -H1 - H2 spans V0.
  RVec eps = zero_vec(8);
  eps[H1] = Rational(-1);
  eps[H2] = Rational(-1);
  EXPECT_EQ(s.m_basis[6], eps);
  EXPECT_EQ(s.blocks[0], std::vector<std::size_t>{6});
}

TEST(ReductiveSplit, TrivialSubalgebraGivesWholeAlgebra) {
  auto m = catalog::su3();
  HomogeneousSpaceSpec s;
  s.algebra = m.lie_algebra();
  s.q = m.q_form();
  auto sp = reductive_split(s);
  EXPECT_EQ(sp.dim_m(), 8u);
  for (std::size_t i = 0; i < 8; ++i) {
    auto parts = sp.decompose(unit_vec(8, i));
    EXPECT_TRUE(parts.h.empty());
    EXPECT_EQ(sp.project_m(unit_vec(8, i)), unit_vec(8, i));
  }
}

TEST(ReductiveSplit, Berger13Dimensions) {
  auto s = catalog::berger13();
  auto sp = reductive_split(s);
  EXPECT_EQ(s.algebra.dim(), 24u);
  EXPECT_EQ(sp.dim_m(), 13u);
  EXPECT_EQ(s.blocks[0].size(), 5u);
  EXPECT_EQ(s.blocks[1].size(), 8u);
}

TEST(ReductiveSplit, NonSubalgebraRejectedWithCode) {
  auto s = catalog::su3_base("bad");
  s.h_basis = {unit_vec(8, E1), unit_vec(8, E2)};
  try {
    reductive_split(s);
    FAIL() << "expected an error";
  } catch (const SpecError& e) {
    EXPECT_EQ(e.code(), "E_NOT_SUBALGEBRA");
  }
}

TEST(ReductiveSplit, NonInvariantBlockRejected) {
  auto s = catalog::aloff_wallach(1, 2, -3);
  s.blocks = {{6}, {0, 1}, {3, 4}, {2, 5}};
  s.block_names.clear();
  try {
    reductive_split(s);
    FAIL() << "expected an error";
  } catch (const SpecError& e) {
    EXPECT_EQ(e.code(), "E_BLOCK_NOT_INVARIANT");
  }
}

TEST(Isotropy, AloffWallachRotatesV1WithSpeedK1MinusK2) {
  for (auto k : std::vector<std::array<long, 3>>{{-2, 1, 1}, {1, -1, 0}, {1, 2, -3}}) {
    auto s = catalog::aloff_wallach(k[0], k[1], k[2]);
    auto sp = reductive_split(s);
    // The generator is i diag(k1, k2, k3).
    QMatrix d(3);
    for (std::size_t i = 0; i < 3; ++i) d(i, i) = Quat{0, Rational(k[i]), 0, 0};
    EXPECT_EQ(catalog::su3().coords(d), s.h_basis[0]);
    auto a = isotropy_operator(s.algebra, sp, s.h_basis[0]);
    // ad_X E1 = (k1 - k2) F1 and ad_X F1 = -(k1 - k2) E1.
    EXPECT_EQ(a(3, 0), Rational(k[0] - k[1]));
    EXPECT_EQ(a(0, 3), Rational(k[1] - k[0]));
    for (std::size_t r = 0; r < 7; ++r)
      if (r != 3) {
        EXPECT_TRUE(a(r, 0).is_zero());
      }
    for (std::size_t r = 0; r < 7; ++r) EXPECT_TRUE(a(r, 6).is_zero());
  }
}

TEST(Isotropy, ZeroGivesZeroOperator) {
  auto s = catalog::w6();
  auto sp = reductive_split(s);
  EXPECT_TRUE(isotropy_operator(s.algebra, sp, zero_vec(8)).is_zero());
}

TEST(Isotropy, OutsideHRejected) {
  auto s = catalog::w6();
  auto sp = reductive_split(s);
  EXPECT_THROW(isotropy_operator(s.algebra, sp, unit_vec(8, E3)), SpecError);
}

TEST(Isotropy, Berger13CircleTrivialOnVNontrivialOnW) {
  auto s = catalog::berger13();
  auto sp = reductive_split(s);
  auto a = isotropy_operator(s.algebra, sp, s.h_basis.back());
  bool w_nonzero = false;
  for (std::size_t r = 0; r < 13; ++r)
    for (std::size_t c = 0; c < 13; ++c) {
      if (c < 5 || r < 5) EXPECT_TRUE(a(r, c).is_zero()) << r << "," << c;
      else w_nonzero |= !a(r, c).is_zero();
    }
  EXPECT_TRUE(w_nonzero);
}

TEST(CatalogProperties, JacobiQAndSplitInvariants) {
  for (const auto& s : all_specs()) {
    SCOPED_TRACE(s.name);
    EXPECT_TRUE(validate_algebra(s.algebra).ok());
    EXPECT_TRUE(validate_q(s.algebra, s.q).ok());
    auto sp = reductive_split(s);
    EXPECT_EQ(s.h_basis.size() + sp.dim_m(), s.algebra.dim());
    // [h, m] in m, and the isotropy operators are skew for Q|m.
    Matrix<Rational> qm = sp.q_m();
    for (const auto& a : isotropy_operators(s.algebra, sp)) {
      Matrix<Rational> lhs = a.transpose() * qm + qm * a;
      EXPECT_TRUE(lhs.is_zero());
    }
    // Projecting m again changes nothing.
    for (const auto& v : sp.m_basis()) EXPECT_EQ(sp.project_m(v), v);
  }
}

TEST(CatalogProperties, IsotropyIsSkewForSampledMetrics) {
  for (auto s : all_specs()) {
    SCOPED_TRACE(s.name);
    auto sp = reductive_split(s);
    auto g = build_metric(s, sp);
    std::vector<std::vector<Rational>> pts = metric_samples(s);
    if (s.parameters.empty()) {
      // Vary the block weights directly.
      for (long w : {2, 3}) {
        HomogeneousSpaceSpec t = s;
        for (std::size_t b = 0; b < t.metric.block_weights.size(); ++b)
          t.metric.block_weights[b] = Scalar(Rational(w + static_cast<long>(b), 1 + static_cast<long>(b)));
        auto gt = build_metric(t, sp);
        EXPECT_TRUE(validate_metric(t, sp, gt).ok());
      }
    }
    for (const auto& p : pts) {
      Matrix<Rational> gm = evaluate(g.gram, p);
      for (const auto& a : isotropy_operators(s.algebra, sp)) EXPECT_TRUE((a.transpose() * gm + gm * a).is_zero());
    }
  }
}

TEST(Metric, FullGramMustRespectIsotropy) {
  auto s = catalog::aloff_wallach(1, 2, -3);
  auto sp = reductive_split(s);
  Matrix<Scalar> g(7, 7);
  for (std::size_t i = 0; i < 7; ++i) g(i, i) = Scalar(1);
  g(0, 1) = g(1, 0) = Scalar(Rational(1, 3));  // couples V1 and V2
  s.metric.full = g;
  EXPECT_FALSE(validate_metric(s, sp, build_metric(s, sp)).ok());
}
