#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "invform/forms.hpp"
#include "invform/invariants.hpp"
#include "invform/roots.hpp"

namespace invform {

enum class Verdict { Formal, NotFormal, Undecided };

inline std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Formal: return "formal";
    case Verdict::NotFormal: return "not_formal";
    case Verdict::Undecided: return "undecided";
  }
  return "undecided";
}

/// A product of harmonic forms that fails to be harmonic. `exact_index` names
/// the exact basis form it pairs nontrivially with. Abstract checks leave the
/// forms empty and describe the contradiction in `note`.
struct FormalityWitness {
  std::vector<std::size_t> degrees;
  std::vector<std::size_t> factors;
  Form product;
  std::size_t exact_index = 0;
  Form exact_form;
  Scalar pairing;
  std::string note;
};

struct FormalityReport {
  Verdict verdict = Verdict::Undecided;
  std::vector<std::pair<std::size_t, std::size_t>> harmonic_dims;
  std::vector<std::size_t> betti;
  std::vector<std::vector<std::size_t>> checked_degrees;
  std::size_t products_checked = 0;
  std::vector<FormalityWitness> witnesses;
  std::vector<Poly> obstructions;
  std::vector<std::string> assumptions;
  std::string reason;
};

namespace detail {

/// First exact basis form pairing nontrivially with p, if any.
inline std::optional<std::pair<std::size_t, Scalar>> exact_pairing(const FormSpace& ex, const Form& p,
                                                                   FormPairing& pair) {
  for (std::size_t l = 0; l < ex.dim(); ++l) {
    Scalar v = pair(p, ex.basis[l]);
    if (!v.is_zero()) return std::make_pair(l, v);
  }
  return std::nullopt;
}

inline std::vector<std::string> standard_assumptions() {
  return {"isotropy group connected, so invariant forms are the isotropy-annihilated forms",
          "harmonic forms of an invariant metric are invariant"};
}

}  // namespace detail

/// Geometric formality test for a rational metric: every product of two
/// harmonic basis forms and every power of a harmonic basis form must be
/// harmonic. Harmonic forms are then closed under the wedge product. With
/// `max_factor_degree` only factors of degree at most that bound are used.
inline FormalityReport formality_check(InvariantComplex& cx, const MetricOnM& g,
                                       std::optional<std::size_t> max_factor_degree = std::nullopt) {
  if (!g.is_rational()) throw std::invalid_argument("formality_check: metric has free parameters");
  FormalityReport rep;
  rep.assumptions = detail::standard_assumptions();
  const std::size_t n = cx.dim_m();
  rep.betti = cx.betti_vector();
  std::size_t top = max_factor_degree ? std::min(*max_factor_degree, n) : n;
  std::vector<HarmonicSpace> h(n + 1);
  for (std::size_t k = 1; k < n; ++k) {
    h[k] = harmonic_space(cx, k, g);
    rep.harmonic_dims.emplace_back(k, h[k].space.dim());
    if (h[k].space.dim() != rep.betti[k]) {
      rep.verdict = Verdict::Undecided;
      rep.reason = "harmonic dimension differs from Betti number in degree " + std::to_string(k);
      return rep;
    }
  }
  FormPairing pair(g);
  auto test = [&](const Form& p, std::vector<std::size_t> degs, std::vector<std::size_t> idx) {
    ++rep.products_checked;
    if (rep.checked_degrees.empty() || rep.checked_degrees.back() != degs) rep.checked_degrees.push_back(degs);
    if (p.is_zero()) return false;
    const auto& ex = cx.exact(p.degree());
    if (auto hit = detail::exact_pairing(ex, p, pair)) {
      rep.witnesses.push_back(FormalityWitness{std::move(degs), std::move(idx), p, hit->first,
                                               ex.basis[hit->first], hit->second, {}});
      return true;
    }
    return false;
  };
  for (std::size_t k1 = 1; k1 < n && k1 <= top; ++k1)
    for (std::size_t k2 = k1; k1 + k2 <= n && k2 <= top; ++k2)
      for (std::size_t i = 0; i < h[k1].space.dim(); ++i)
        for (std::size_t j = (k1 == k2 ? i : 0); j < h[k2].space.dim(); ++j)
          if (test(wedge(h[k1].space.basis[i], h[k2].space.basis[j]), {k1, k2}, {i, j})) {
            rep.verdict = Verdict::NotFormal;
            rep.reason = "product of harmonic forms is not harmonic";
            return rep;
          }
  for (std::size_t k = 1; k < n && k <= top; ++k)
    for (std::size_t i = 0; i < h[k].space.dim(); ++i) {
      Form pw = h[k].space.basis[i];
      for (unsigned p = 2; p * k <= n; ++p) {
        pw = wedge(pw, h[k].space.basis[i]);
        if (pw.is_zero()) break;
        if (p > 2 && test(pw, std::vector<std::size_t>(p, k), std::vector<std::size_t>(p, i))) {
          rep.verdict = Verdict::NotFormal;
          rep.reason = "power of a harmonic form is not harmonic";
          return rep;
        }
      }
    }
  rep.verdict = Verdict::Formal;
  rep.reason = max_factor_degree ? "all tested products of harmonic forms are harmonic"
                                 : "harmonic forms are closed under the wedge product";
  return rep;
}

/// Polynomial conditions on the metric parameters for products of harmonic
/// forms of degrees (k1, k2) to be harmonic. `pivots` must not vanish for the
/// generic harmonic basis to be valid.
struct ObstructionReport {
  std::size_t k1 = 0, k2 = 0;
  std::vector<Poly> obstructions;
  std::vector<Poly> pivots;
  std::vector<std::string> parameters;
  /// Set when every obstruction involves only `variable`.
  std::optional<std::size_t> variable;
  std::optional<Poly> common;
  std::vector<RootInterval> common_roots;
  std::vector<RootInterval> positive_roots;
  std::string mode;
};

namespace detail {

inline void push_unique(std::vector<Poly>& out, const Poly& p) {
  if (p.is_zero()) return;
  Poly q = p.primitive_part().second;
  if (q.is_constant()) {
    out.push_back(q);
    return;
  }
  for (const auto& o : out)
    if (o == q) return;
  out.push_back(q);
}

inline Poly numerator_of(const Scalar& s) {
  if (s.is_rational()) return Poly(s.rational());
  return s.ratfunc().num();
}

}  // namespace detail

inline ObstructionReport parametric_obstruction(InvariantComplex& cx, const MetricOnM& g, std::size_t k1,
                                                std::size_t k2) {
  ObstructionReport rep;
  if (k1 > k2) std::swap(k1, k2);
  rep.k1 = k1;
  rep.k2 = k2;
  rep.parameters = cx.spec().parameters;
  const std::size_t k = k1 + k2;
  if (k > cx.dim_m()) return rep;
  auto h1 = harmonic_space(cx, k1, g);
  auto h2 = k1 == k2 ? h1 : harmonic_space(cx, k2, g);
  for (const auto* hs : {&h1, &h2})
    for (const auto& p : hs->pivots) detail::push_unique(rep.pivots, p);
  const auto& cl = cx.closed(k);
  const auto& ex = cx.exact(k);
  FormPairing pair(g);
  rep.mode = ex.dim() == 0 ? "no_exact_forms" : (cl.dim() == ex.dim() ? "coefficients" : "pairings");
  for (std::size_t i = 0; i < h1.space.dim(); ++i)
    for (std::size_t j = (k1 == k2 ? i : 0); j < h2.space.dim(); ++j) {
      Form p = wedge(h1.space.basis[i], h2.space.basis[j]);
      if (ex.dim() == 0 || p.is_zero()) continue;
      if (cl.dim() == ex.dim()) {
        // Every closed form is exact: harmonic here means zero.
        for (const auto& c : cl.coordinates(p)) detail::push_unique(rep.obstructions, detail::numerator_of(c));
      } else {
        for (const auto& e : ex.basis) detail::push_unique(rep.obstructions, detail::numerator_of(pair(p, e)));
      }
    }
  std::optional<std::size_t> var;
  bool univariate = !rep.obstructions.empty();
  for (const auto& p : rep.obstructions) {
    auto used = p.variables_used();
    if (used.size() > 1 || (used.size() == 1 && var && *var != used[0])) {
      univariate = false;
      break;
    }
    if (used.size() == 1) var = used[0];
  }
  if (univariate && var) {
    rep.variable = var;
    UPoly gg;
    for (const auto& p : rep.obstructions) gg = gcd(gg, UPoly(p.univariate_coefficients(*var)));
    std::vector<Rational> c = gg.coeffs();
    if (!gg.is_zero()) {
      Rational lead = gg.lead();
      for (auto& x : c) x /= lead;
    }
    Poly common;
    const std::size_t nv = rep.parameters.size();
    for (std::size_t e = 0; e < c.size(); ++e) {
      Monomial m(nv, 0);
      m[*var] = static_cast<std::uint32_t>(e);
      common += Poly::monomial(m, c[e]);
    }
    rep.common = common;
    if (gg.degree() > 0) rep.common_roots = real_roots(gg);
    for (auto r : rep.common_roots) {
      if (!r.exact && r.lo.sign() < 0 && r.hi.sign() > 0) {
        // Split at 0, which is not a root here.
        if ((gg(r.lo).sign() < 0) != (gg(Rational(0)).sign() < 0)) continue;
        r.lo = Rational(0);
      }
      if (r.lo.sign() > 0 || (!r.exact && r.lo.sign() == 0)) rep.positive_roots.push_back(r);
    }
  }
  return rep;
}

/// Homogeneous polynomial system in coordinates on a space of k-forms: the
/// coefficients of (sum a_i b_i)^p in the invariant basis of degree pk.
struct PolySystem {
  std::vector<std::string> variables;
  std::vector<Poly> generators;
  unsigned degree = 0;
  std::size_t form_degree = 0;
  std::string basis_kind;
  std::vector<Form> basis;
};

inline PolySystem nilpotency_analysis(InvariantComplex& cx, std::size_t k, unsigned p,
                                      const std::string& basis_kind = "closed") {
  if (p == 0) throw std::invalid_argument("nilpotency_analysis: power must be positive");
  PolySystem sys;
  sys.degree = p;
  sys.form_degree = k;
  sys.basis_kind = basis_kind;
  const FormSpace* space = nullptr;
  if (basis_kind == "closed") space = &cx.closed(k);
  else if (basis_kind == "invariant") space = &cx.invariant(k);
  else throw std::invalid_argument("nilpotency_analysis: basis must be 'closed' or 'invariant'");
  sys.basis = space->basis;
  const std::size_t m = space->dim();
  for (std::size_t i = 0; i < m; ++i) sys.variables.push_back("a" + std::to_string(i + 1));
  if (m == 0 || p * k > cx.dim_m()) return sys;
  Form w(cx.dim_m(), k);
  for (std::size_t i = 0; i < m; ++i) w += Scalar(Poly::var(i, m)) * space->basis[i];
  Form wp = wedge_power(w, p);
  const auto& target = cx.invariant(p * k);
  Form rest = wp;
  for (std::size_t r = 0; r < target.dim(); ++r) {
    Scalar c = wp.coeff(target.pivots[r]);
    rest -= c * target.basis[r];
    Poly g = detail::numerator_of(c);
    if (!g.is_zero()) sys.generators.push_back(g);
  }
  if (!rest.is_zero()) throw StructuralError("nilpotency_analysis: power left the invariant span");
  return sys;
}

/// Result of the triviality decision for a PolySystem.
struct TrivialityReport {
  enum class Kind { Trivial, Nontrivial, Undecided } kind = Kind::Undecided;
  /// Trivial: for each variable a_i, coefficients c with sum_j c_j g_j = a_i^p.
  std::vector<std::vector<Rational>> certificates;
  /// Nontrivial: a nonzero rational common zero.
  std::vector<Rational> witness;
  std::string method;
  std::string bound;
};

inline std::string triviality_name(TrivialityReport::Kind k) {
  switch (k) {
    case TrivialityReport::Kind::Trivial: return "trivial";
    case TrivialityReport::Kind::Nontrivial: return "nontrivial";
    case TrivialityReport::Kind::Undecided: return "undecided";
  }
  return "undecided";
}

namespace detail {

/// Solution of A x = b over Q, if one exists.
inline std::optional<std::vector<Rational>> solve_linear(const Matrix<Rational>& a, const std::vector<Rational>& b) {
  Matrix<Rational> aug(a.rows(), a.cols() + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
    aug(i, a.cols()) = b[i];
  }
  auto piv = rref(aug);
  std::vector<Rational> x(a.cols(), Rational(0));
  for (std::size_t r = 0; r < piv.size(); ++r) {
    if (piv[r] == a.cols()) return std::nullopt;
    x[piv[r]] = aug(r, a.cols());
  }
  return x;
}

inline bool common_zero(const std::vector<Poly>& gens, const std::vector<Rational>& pt) {
  for (const auto& g : gens)
    if (!g.evaluate(pt).is_zero()) return false;
  return true;
}

/// Rationals of height at most h, positive and negative, without duplicates.
inline std::vector<Rational> small_rationals(long h) {
  std::vector<Rational> out{Rational(0)};
  for (long q = 1; q <= h; ++q)
    for (long p = 1; p <= h; ++p) {
      if (std::gcd(p, q) != 1) continue;
      out.emplace_back(p, q);
      out.emplace_back(-p, q);
    }
  return out;
}

}  // namespace detail

/// Decides whether a homogeneous system has only the trivial real zero.
/// Tier one writes every a_i^p as a rational combination of the generators.
/// Tier two searches rational points of bounded height on coordinate
/// subspaces. Otherwise the answer is Undecided.
inline TrivialityReport triviality(const PolySystem& sys) {
  TrivialityReport rep;
  const std::size_t m = sys.variables.size();
  if (m == 0) {
    rep.kind = TrivialityReport::Kind::Trivial;
    rep.method = "no variables";
    return rep;
  }
  if (sys.generators.empty()) {
    rep.kind = TrivialityReport::Kind::Nontrivial;
    rep.witness.assign(m, Rational(0));
    rep.witness[0] = Rational(1);
    rep.method = "empty system";
    return rep;
  }
  // Tier one: pure powers in the span of the generators.
  std::vector<Monomial> cols;
  auto col_of = [&](const Monomial& mono) {
    auto it = std::find(cols.begin(), cols.end(), mono);
    if (it != cols.end()) return static_cast<std::size_t>(it - cols.begin());
    cols.push_back(mono);
    return cols.size() - 1;
  };
  for (std::size_t i = 0; i < m; ++i) {
    Monomial mono(m, 0);
    mono[i] = sys.degree;
    col_of(mono);
  }
  for (const auto& g : sys.generators)
    for (const auto& [mono, c] : g.terms()) {
      Monomial full = mono;
      full.resize(m, 0);
      col_of(full);
    }
  Matrix<Rational> a(cols.size(), sys.generators.size());
  for (std::size_t j = 0; j < sys.generators.size(); ++j)
    for (const auto& [mono, c] : sys.generators[j].terms()) {
      Monomial full = mono;
      full.resize(m, 0);
      a(col_of(full), j) = c;
    }
  std::vector<std::vector<Rational>> certs;
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<Rational> b(cols.size(), Rational(0));
    b[i] = Rational(1);
    auto x = detail::solve_linear(a, b);
    if (!x) break;
    certs.push_back(*x);
  }
  if (certs.size() == m) {
    rep.kind = TrivialityReport::Kind::Trivial;
    rep.certificates = std::move(certs);
    rep.method = "pure powers in the span of the generators";
    return rep;
  }
  // Tier two: bounded rational search, using homogeneity to fix one coordinate to 1.
  const long h2 = 100, h3 = 6, hall = 3;
  rep.bound = "unit vectors; pairs (1, r) with height(r) <= " + std::to_string(h2) +
              "; triples (1, r, s) with height <= " + std::to_string(h3) + "; integer points in [-" +
              std::to_string(hall) + ", " + std::to_string(hall) + "]^m for m <= 5";
  auto found = [&](std::vector<Rational> pt) {
    rep.kind = TrivialityReport::Kind::Nontrivial;
    rep.witness = std::move(pt);
    rep.method = "bounded rational search";
    return rep;
  };
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<Rational> pt(m, Rational(0));
    pt[i] = Rational(1);
    if (detail::common_zero(sys.generators, pt)) return found(pt);
  }
  auto r2 = detail::small_rationals(h2);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      for (const auto& r : r2) {
        if (r.is_zero()) continue;
        std::vector<Rational> pt(m, Rational(0));
        pt[i] = Rational(1);
        pt[j] = r;
        if (detail::common_zero(sys.generators, pt)) return found(pt);
      }
    }
  auto r3 = detail::small_rationals(h3);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t l = j + 1; l < m; ++l) {
        if (i == j || i == l) continue;
        for (const auto& r : r3)
          for (const auto& s : r3) {
            if (r.is_zero() || s.is_zero()) continue;
            std::vector<Rational> pt(m, Rational(0));
            pt[i] = Rational(1);
            pt[j] = r;
            pt[l] = s;
            if (detail::common_zero(sys.generators, pt)) return found(pt);
          }
      }
  if (m <= 5) {
    std::vector<long> v(m, -hall);
    while (true) {
      bool nonzero = std::any_of(v.begin(), v.end(), [](long x) { return x != 0; });
      if (nonzero) {
        std::vector<Rational> pt;
        for (long x : v) pt.emplace_back(x);
        if (detail::common_zero(sys.generators, pt)) return found(pt);
      }
      std::size_t i = 0;
      while (i < m && v[i] == hall) v[i++] = -hall;
      if (i == m) break;
      ++v[i];
    }
  }
  rep.kind = TrivialityReport::Kind::Undecided;
  rep.method = "no certificate and no witness within the search bound";
  return rep;
}

}  // namespace invform
