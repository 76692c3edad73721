#include <gtest/gtest.h>

#include <random>

#include "invform/catalog.hpp"
#include "invform/catalog_files.hpp"
#include "invform/invariants.hpp"

using namespace invform;

namespace {

using Betti = std::vector<std::size_t>;

struct Space {
  HomogeneousSpaceSpec spec;
  ReductiveSplit split;
  InvariantComplex cx;
  explicit Space(HomogeneousSpaceSpec s) : spec(std::move(s)), split(reductive_split(spec)), cx(spec, split) {}
  Space(const Space&) = delete;
  [[nodiscard]] std::size_t n() const { return split.dim_m(); }
  [[nodiscard]] Form f(std::string_view text) const {
    return parse_form(text, n(), spec.m_labels, spec.parameters);
  }
};

std::vector<HomogeneousSpaceSpec> catalog_specs() {
  return {catalog::aloff_wallach(-2, 1, 1), catalog::aloff_wallach(1, -1, 0), catalog::aloff_wallach(1, 2, -3),
          catalog::w6(),  catalog::s5(), catalog::cp(1), catalog::berger13()};
}

/// Block-diagonal Gram metric with random positive rational weights.
MetricOnM random_metric(const Space& s, std::mt19937& rng) {
  std::uniform_int_distribution<long> num(1, 9), den(1, 4);
  HomogeneousSpaceSpec t = s.spec;
  t.parameters.clear();
  t.samples.clear();
  t.metric.kind = MetricKind::Gram;
  t.metric.block_weights.clear();
  for (std::size_t b = 0; b < t.blocks.size(); ++b) t.metric.block_weights.push_back(Scalar(Rational(num(rng), den(rng))));
  return build_metric(t, s.split);
}

Betti expected_betti(const std::string& name) {
  if (name.rfind("aloff_wallach", 0) == 0) return {1, 0, 1, 0, 0, 1, 0, 1};
  if (name == "w6") return {1, 0, 2, 0, 2, 0, 1};
  if (name == "s5") return {1, 0, 0, 0, 0, 1};
  if (name == "cp3") return {1, 0, 1, 0, 1, 0, 1};
  if (name == "berger13") return {1, 0, 1, 0, 1, 0, 0, 0, 0, 1, 0, 1, 0, 1};
  return {};
}

}  // namespace

TEST(InvariantForms, AloffWallachDistinctWeights) {
  {
    Space s(catalog::aloff_wallach(1, 2, -3));
    EXPECT_EQ(s.cx.invariant(0).dim(), 1u);
    const auto& inv = s.cx.invariant(2);
    ASSERT_EQ(inv.dim(), 3u);
    for (const char* w : {"E1^F1", "E2^F2", "E3^F3"}) EXPECT_TRUE(inv.contains(s.f(w)));
    // Closed iff a1 + a2 + a3 = 0.
    const auto& cl = s.cx.closed(2);
    EXPECT_EQ(cl.dim(), 2u);
    EXPECT_TRUE(cl.contains(s.f("E1^F1 - E2^F2")));
    EXPECT_TRUE(cl.contains(s.f("E2^F2 - E3^F3")));
    EXPECT_FALSE(cl.contains(s.f("E1^F1")));
  }
}

TEST(InvariantForms, AloffWallachOneWeightVanishes) {
  // k = (1, -1, 0): V2 and V3 rotate with equal speed, giving two extra invariant 2-forms.
  Space s(catalog::aloff_wallach(1, -1, 0));
  EXPECT_EQ(s.cx.invariant(1).dim(), 1u);
  const auto& inv = s.cx.invariant(2);
  ASSERT_EQ(inv.dim(), 5u);
  Form w4 = s.f("E2^E3 + F2^F3"), w5 = s.f("E2^F3 + E3^F2"), eps = s.f("eps");
  EXPECT_TRUE(inv.contains(w4));
  EXPECT_TRUE(inv.contains(w5));
  Form d1 = s.cx.d(s.f("E1^F1"));
  EXPECT_FALSE(d1.is_zero());
  EXPECT_EQ(s.cx.d(s.f("E2^F2")), d1);
  EXPECT_EQ(s.cx.d(s.f("E3^F3")), d1);
  // With the unnormalised eps = H1 + 2 H2 the coefficient is 2 s_2 = 6.
  EXPECT_EQ(s.cx.d(w4), Scalar(6) * wedge(w5, eps));
  EXPECT_EQ(s.cx.d(w5), Scalar(-6) * wedge(w4, eps));
  EXPECT_EQ(s.cx.closed(2).dim(), 2u);
}

TEST(InvariantForms, AloffWallachMinusTwoOneOne) {
  Space s(catalog::aloff_wallach(-2, 1, 1));
  std::vector<Form> w = {s.f("E1^F1"),         s.f("E2^F2"),         s.f("E3^F3"), s.f("E1^E2 - F1^F2"),
                         s.f("F1^E2 + E1^F2"), s.f("E3^eps"),        s.f("F3^eps")};
  const auto& inv = s.cx.invariant(2);
  EXPECT_EQ(inv.dim(), 7u);
  for (const auto& f : w) EXPECT_TRUE(inv.contains(f));
  // Closed: a1 + a2 + a3 = 0, a7 = 2 a4, a6 = 2 a5.
  const auto& cl = s.cx.closed(2);
  EXPECT_EQ(cl.dim(), 4u);
  EXPECT_TRUE(cl.contains(w[0] - w[1]));
  EXPECT_TRUE(cl.contains(w[1] - w[2]));
  EXPECT_TRUE(cl.contains(w[3] + Scalar(2) * w[6]));
  EXPECT_TRUE(cl.contains(w[4] + Scalar(2) * w[5]));
  EXPECT_FALSE(cl.contains(w[3]));
}

TEST(InvariantForms, Berger13) {
  Space s(catalog::berger13());
  Betti dims;
  for (std::size_t k = 0; k <= 13; ++k) dims.push_back(s.cx.invariant(k).dim());
  EXPECT_EQ(dims, (Betti{1, 0, 1, 1, 3, 4, 3, 3, 4, 3, 1, 1, 0, 1}));
  EXPECT_EQ(s.cx.invariant(1).dim(), 0u);
  // The invariant 2-form is closed and its cube does not vanish.
  ASSERT_EQ(s.cx.closed(2).dim(), 1u);
  EXPECT_FALSE(wedge_power(s.cx.closed(2).basis[0], 3).is_zero());
  // omega_I^3 is exact, so the cohomology ring truncates as for CP^2.
  Form cube = wedge_power(s.cx.invariant(2).basis[0], 3);
  EXPECT_TRUE(s.cx.exact(6).contains(cube));
  EXPECT_FALSE(s.cx.exact(4).contains(wedge_power(s.cx.invariant(2).basis[0], 2)));
}

TEST(InvariantForms, CP3ClosedTwoForm) {
  Space s(catalog::cp(1));
  EXPECT_EQ(s.cx.invariant(2).dim(), 2u);
  const auto& cl = s.cx.closed(2);
  ASSERT_EQ(cl.dim(), 1u);
  EXPECT_TRUE(cl.contains(s.f("e2^e3 - (Y1^Y1_1 - Y1_2^Y1_3)")));
}

TEST(Complex, ExactInClosedInInvariant) {
  for (auto spec : catalog_specs()) {
    Space s(spec);
    SCOPED_TRACE(s.spec.name);
    for (std::size_t k = 0; k <= s.n(); ++k) {
      for (const auto& f : s.cx.exact(k).basis) EXPECT_TRUE(s.cx.closed(k).contains(f));
      for (const auto& f : s.cx.closed(k).basis) {
        EXPECT_TRUE(s.cx.invariant(k).contains(f));
        EXPECT_TRUE(s.cx.d(f).is_zero());
      }
      for (const auto& f : s.cx.invariant(k).basis)
        for (const auto& op : s.cx.isotropy()) EXPECT_TRUE(act(op, f).is_zero());
    }
  }
}

TEST(Betti, CatalogValuesDualityAndEuler) {
  for (auto spec : catalog_specs()) {
    Space s(spec);
    SCOPED_TRACE(s.spec.name);
    Betti b = s.cx.betti_vector();
    EXPECT_EQ(b, expected_betti(s.spec.name));
    ASSERT_EQ(b.size(), s.n() + 1);
    EXPECT_EQ(b[0], 1u);
    for (std::size_t k = 0; k <= s.n(); ++k) EXPECT_EQ(b[k], b[s.n() - k]);
    long chi_b = 0, chi_inv = 0;
    for (std::size_t k = 0; k <= s.n(); ++k) {
      long sg = (k % 2) ? -1 : 1;
      chi_b += sg * static_cast<long>(b[k]);
      chi_inv += sg * static_cast<long>(s.cx.invariant(k).dim());
    }
    EXPECT_EQ(chi_b, chi_inv);
  }
}

TEST(Betti, AbelianTorus) {
  HomogeneousSpaceSpec t;
  t.algebra = LieAlgebra(3, {}, {});
  t.q = BiInvariantForm{Matrix<Rational>::identity(3)};
  Space s(t);
  EXPECT_EQ(s.cx.betti_vector(), (Betti{1, 3, 3, 1}));
}

TEST(Harmonic, DimensionEqualsBettiAtRandomMetrics) {
  std::mt19937 rng(2024);
  for (auto spec : catalog_specs()) {
    Space s(spec);
    SCOPED_TRACE(s.spec.name);
    Betti b = s.cx.betti_vector();
    for (int it = 0; it < 10; ++it) {
      MetricOnM g = random_metric(s, rng);
      for (std::size_t k = 0; k <= s.n(); ++k) {
        auto h = harmonic_space(s.cx, k, g);
        EXPECT_EQ(h.space.dim(), b[k]) << "k=" << k;
        FormPairing pair(g);
        for (const auto& f : h.space.basis) {
          EXPECT_TRUE(s.cx.closed(k).contains(f));
          for (const auto& e : s.cx.exact(k).basis) EXPECT_TRUE(pair(f, e).is_zero());
        }
      }
    }
  }
}

TEST(Harmonic, UnchangedByGlobalScaling) {
  std::mt19937 rng(77);
  for (auto spec : catalog_specs()) {
    Space s(spec);
    SCOPED_TRACE(s.spec.name);
    MetricOnM g = random_metric(s, rng);
    for (const Rational& c : {Rational(3), Rational(2, 7)}) {
      MetricOnM gc = g.scaled(c);
      for (std::size_t k = 0; k <= s.n(); ++k) {
        auto h1 = harmonic_space(s.cx, k, g), h2 = harmonic_space(s.cx, k, gc);
        EXPECT_EQ(h1.space.basis, h2.space.basis) << "k=" << k;
      }
    }
  }
}

TEST(Harmonic, AloffWallachParametricDiagonal) {
  // Gram weights t_i^2: |E_i^F_i|^2 = t_i^-4, so harmonic iff sum a_i = 0 and sum a_i s_i t_i^-4 = 0.
  Space s(catalog::aloff_wallach_parametric(1, 2, -3));
  MetricOnM g = build_metric(s.spec, s.split);
  auto h = harmonic_space(s.cx, 2, g);
  ASSERT_EQ(h.space.dim(), 1u);
  auto r = catalog::aloff_wallach_default_r(1, 2, -3);
  std::array<Rational, 3> si;
  for (int i = 0; i < 3; ++i) si[i] = Rational(2) * r[i] - r[(i + 1) % 3] - r[(i + 2) % 3];
  std::array<Mask, 3> vol{bit(0) | bit(3), bit(1) | bit(4), bit(2) | bit(5)};
  for (const auto& pt : s.spec.samples) {
    Form hp = h.space.basis[0].evaluate(pt);
    Rational sum(0), weighted(0);
    for (int i = 0; i < 3; ++i) {
      Rational a = hp.coeff(vol[i]).rational();
      Rational t2 = pt[i + 1] * pt[i + 1];
      sum += a;
      weighted += a * si[i] / (t2 * t2);
    }
    EXPECT_TRUE(sum.is_zero());
    EXPECT_TRUE(weighted.is_zero());
    // Specialising first gives the same line.
    auto hn = harmonic_space(s.cx, 2, g.specialize(pt));
    ASSERT_EQ(hn.space.dim(), 1u);
    EXPECT_EQ(hn.space.basis[0], hp);
  }
}

TEST(Harmonic, AloffWallachCoformWeights) {
  // Coform weights t_i on V_i give |E_i^F_i|^2 proportional to t_i^2: sum a_i s_i t_i^2 = 0.
  auto spec = catalog::aloff_wallach_parametric(1, 2, -3);
  spec.metric.kind = MetricKind::Coform;
  for (std::size_t i = 0; i < 4; ++i) spec.metric.block_weights[i] = Scalar(Poly::var(i, 4));
  Space s(spec);
  MetricOnM g = build_metric(s.spec, s.split);
  auto h = harmonic_space(s.cx, 2, g);
  ASSERT_EQ(h.space.dim(), 1u);
  auto r = catalog::aloff_wallach_default_r(1, 2, -3);
  std::array<Mask, 3> vol{bit(0) | bit(3), bit(1) | bit(4), bit(2) | bit(5)};
  for (const auto& pt : s.spec.samples) {
    Form hp = h.space.basis[0].evaluate(pt);
    Rational weighted(0);
    for (int i = 0; i < 3; ++i) {
      Rational si = Rational(2) * r[i] - r[(i + 1) % 3] - r[(i + 2) % 3];
      weighted += hp.coeff(vol[i]).rational() * si * pt[i + 1] * pt[i + 1];
    }
    EXPECT_TRUE(weighted.is_zero());
  }
}

TEST(Harmonic, CP3TwoFormForEveryT) {
  Space s(catalog::cp(1));
  MetricOnM g = build_metric(s.spec, s.split);
  auto h = harmonic_space(s.cx, 2, g);
  ASSERT_EQ(h.space.dim(), 1u);
  EXPECT_EQ(h.space.basis[0], s.f("e2^e3 - Y1^Y1_1 + Y1_2^Y1_3"));
}

TEST(Harmonic, CP3FourFormCondition) {
  // On P1 = wI^2 - 2 v^wI, P2 = wJ^2 + wK^2 + 2 v^wI the condition reads a (t^2 - 1) = b (t^2 + 2).
  Space s(catalog::cp(1));
  Form wi = s.f("Y1^Y1_1 - Y1_2^Y1_3"), wj = s.f("Y1^Y1_2 - Y1_3^Y1_1"), wk = s.f("Y1^Y1_3 - Y1_1^Y1_2");
  Form v = s.f("e2^e3");
  Form p1 = wedge(wi, wi) - Scalar(2) * wedge(v, wi), p2 = wedge(wj, wj) + wedge(wk, wk) + Scalar(2) * wedge(v, wi);
  EXPECT_TRUE(s.cx.closed(4).contains(p1));
  EXPECT_TRUE(s.cx.closed(4).contains(p2));
  MetricOnM g = build_metric(s.spec, s.split);
  auto h = harmonic_space(s.cx, 4, g);
  ASSERT_EQ(h.space.dim(), 1u);
  Scalar t(Poly::var(0, 1));
  Scalar a = t * t + Scalar(2), b = t * t - Scalar(1);
  Form expect = a * p1 + b * p2;
  // Compare as lines: h is a multiple of expect.
  Mask m0 = expect.terms().begin()->first;
  Scalar ratio = h.space.basis[0].coeff(m0) / expect.coeff(m0);
  EXPECT_EQ(h.space.basis[0], ratio * expect);
  for (const Rational& tv : {Rational(1), Rational(1, 2), Rational(3)}) {
    std::vector<Rational> pt{tv};
    auto hn = harmonic_space(s.cx, 4, g.specialize(pt));
    ASSERT_EQ(hn.space.dim(), 1u);
    EXPECT_EQ(hn.space.basis[0], h.space.basis[0].evaluate(pt));
  }
}

TEST(Harmonic, PivotsReportedForParametricSystems) {
  Space s(catalog::aloff_wallach_parametric(1, 2, -3));
  auto h = harmonic_space(s.cx, 2, build_metric(s.spec, s.split));
  for (const auto& p : h.pivots) EXPECT_FALSE(p.is_zero());
  Space c(catalog::cp(1));
  auto h0 = harmonic_space(c.cx, 2, build_metric(c.spec, c.split));
  EXPECT_TRUE(h0.pivots.empty());
}
