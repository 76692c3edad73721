#pragma once

#include <algorithm>
#include <bit>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "invform/formality.hpp"
#include "invform/lie.hpp"
#include "invform/roots.hpp"

namespace invform {

/// Load-time violation of a DGA axiom. `axiom` names the violated law.
struct DGAError : std::runtime_error {
  DGAError(std::string ax, const std::string& what) : std::runtime_error(what), axiom(std::move(ax)) {}
  std::string axiom;
};

/// A relation among cohomology classes of one degree, imposed on the harmonic
/// representatives: `lhs`^power = factor * `rhs`^power, or `lhs`^power = 0
/// when `rhs` is empty.
struct DGARelation {
  std::string lhs;
  std::string rhs;
  unsigned power = 1;
  Rational factor{0};
};

/// Finite-dimensional graded commutative DGA given on an explicit basis.
/// Products not listed are zero.
struct AbstractDGA {
  std::string name;
  std::vector<std::string> names;
  std::vector<int> degrees;
  std::vector<std::size_t> generators;
  std::map<std::pair<std::size_t, std::size_t>, RVec> product;
  std::vector<RVec> differential;
  int class_degree = 0;
  std::vector<std::string> classes;
  std::vector<DGARelation> relations;

  [[nodiscard]] std::size_t size() const { return names.size(); }

  [[nodiscard]] RVec mul(std::size_t i, std::size_t j) const {
    auto it = product.find({i, j});
    return it == product.end() ? zero_vec(size()) : it->second;
  }

  /// Bilinear product of coordinate vectors over any coefficient ring.
  template <typename T>
  [[nodiscard]] std::vector<T> mul(const std::vector<T>& a, const std::vector<T>& b) const {
    std::vector<T> out(size(), T(0));
    for (const auto& [ij, v] : product) {
      if (is_zero(a[ij.first]) || is_zero(b[ij.second])) continue;
      T c = a[ij.first] * b[ij.second];
      for (std::size_t k = 0; k < size(); ++k)
        if (!v[k].is_zero()) out[k] += c * T(v[k]);
    }
    return out;
  }

  [[nodiscard]] RVec d(const RVec& a) const {
    RVec out = zero_vec(size());
    for (std::size_t i = 0; i < size(); ++i) {
      if (a[i].is_zero()) continue;
      for (std::size_t k = 0; k < size(); ++k) out[k] += a[i] * differential[i][k];
    }
    return out;
  }
};

namespace detail {

inline int homogeneous_degree(const AbstractDGA& a, const RVec& v, int expect, const std::string& what) {
  for (std::size_t k = 0; k < v.size(); ++k)
    if (!v[k].is_zero() && a.degrees[k] != expect)
      throw DGAError("grading", what + ": term " + a.names[k] + " has degree " + std::to_string(a.degrees[k]) +
                                    ", expected " + std::to_string(expect));
  return expect;
}

inline RVec scaled(RVec v, const Rational& c) {
  for (auto& x : v) x *= c;
  return v;
}

inline RVec plus(RVec a, const RVec& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

}  // namespace detail

/// Verifies grading, graded commutativity, associativity, the signed product
/// rule, and d^2 = 0 exactly. Throws DGAError naming the first violation.
inline void validate_dga(const AbstractDGA& a) {
  const std::size_t n = a.size();
  if (a.degrees.size() != n || a.differential.size() != n)
    throw DGAError("shape", "basis, degree and differential tables differ in length");
  for (const auto& [ij, v] : a.product) {
    if (ij.first >= n || ij.second >= n || v.size() != n) throw DGAError("shape", "product entry out of range");
    detail::homogeneous_degree(a, v, a.degrees[ij.first] + a.degrees[ij.second],
                               "product " + a.names[ij.first] + "*" + a.names[ij.second]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (a.differential[i].size() != n) throw DGAError("shape", "differential entry out of range");
    detail::homogeneous_degree(a, a.differential[i], a.degrees[i] + 1, "d(" + a.names[i] + ")");
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      int s = (a.degrees[i] * a.degrees[j]) % 2 ? -1 : 1;
      if (!(a.mul(i, j) == detail::scaled(a.mul(j, i), Rational(s))))
        throw DGAError("graded_commutativity", a.names[i] + "*" + a.names[j] + " fails graded commutativity");
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        RVec left = a.mul(a.mul(unit_vec(n, i), unit_vec(n, j)), unit_vec(n, k));
        RVec right = a.mul(unit_vec(n, i), a.mul(unit_vec(n, j), unit_vec(n, k)));
        if (!(left == right))
          throw DGAError("associativity",
                         "(" + a.names[i] + "*" + a.names[j] + ")*" + a.names[k] + " differs from the other nesting");
      }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      RVec lhs = a.d(a.mul(i, j));
      RVec rhs = detail::plus(a.mul(a.differential[i], unit_vec(n, j)),
                              detail::scaled(a.mul(unit_vec(n, i), a.differential[j]),
                                             Rational(a.degrees[i] % 2 ? -1 : 1)));
      if (!(lhs == rhs))
        throw DGAError("product_rule", "d(" + a.names[i] + "*" + a.names[j] + ") violates the product rule");
    }
  for (std::size_t i = 0; i < n; ++i)
    if (!is_zero_vec(a.d(a.differential[i]))) throw DGAError("d_squared", "d(d(" + a.names[i] + ")) is nonzero");
}

namespace detail {

/// Basis indices of one degree.
inline std::vector<std::size_t> degree_slice(const AbstractDGA& a, int deg) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a.degrees[i] == deg) out.push_back(i);
  return out;
}

/// Closed elements of degree `deg` as full coordinate vectors.
inline std::vector<RVec> dga_closed(const AbstractDGA& a, int deg) {
  auto idx = degree_slice(a, deg);
  auto tgt = degree_slice(a, deg + 1);
  Matrix<Rational> m(tgt.size(), idx.size());
  for (std::size_t j = 0; j < idx.size(); ++j)
    for (std::size_t r = 0; r < tgt.size(); ++r) m(r, j) = a.differential[idx[j]][tgt[r]];
  std::vector<RVec> out;
  for (const auto& v : nullspace(m).basis) {
    RVec full = zero_vec(a.size());
    for (std::size_t j = 0; j < idx.size(); ++j) full[idx[j]] = v[j];
    out.push_back(full);
  }
  return out;
}

inline std::size_t dga_exact_dim(const AbstractDGA& a, int deg) {
  auto idx = degree_slice(a, deg - 1);
  auto tgt = degree_slice(a, deg);
  Matrix<Rational> m(tgt.size(), idx.size());
  for (std::size_t j = 0; j < idx.size(); ++j)
    for (std::size_t r = 0; r < tgt.size(); ++r) m(r, j) = a.differential[idx[j]][tgt[r]];
  return rank(m);
}

template <typename T>
std::vector<T> dga_power(const AbstractDGA& a, const std::vector<T>& x, unsigned p) {
  std::vector<T> r = x;
  for (unsigned i = 1; i < p; ++i) r = a.mul(r, x);
  return r;
}

/// Rational points strictly between and beyond the isolated real roots.
inline std::vector<Rational> gap_points(const std::vector<RootInterval>& roots) {
  if (roots.empty()) return {Rational(0)};
  std::vector<Rational> out{roots.front().lo - Rational(1)};
  for (std::size_t i = 0; i + 1 < roots.size(); ++i) out.push_back((roots[i].hi + roots[i + 1].lo) / Rational(2));
  out.push_back(roots.back().hi + Rational(1));
  return out;
}

inline UPoly to_upoly(const Poly& p, std::size_t var) {
  if (p.is_zero()) return UPoly();
  return UPoly(p.univariate_coefficients(var));
}

inline std::string rvec_in(const std::vector<RVec>& z, const RVec& coords, const AbstractDGA& a) {
  RVec full = zero_vec(a.size());
  for (std::size_t i = 0; i < z.size(); ++i) full = plus(full, scaled(z[i], coords[i]));
  std::string s;
  for (std::size_t k = 0; k < full.size(); ++k) {
    if (full[k].is_zero()) continue;
    if (!s.empty()) s += full[k].sign() < 0 ? " - " : " + ";
    else if (full[k].sign() < 0) s += "-";
    Rational c = full[k].abs();
    s += (c.is_one() ? "" : c.str() + "*") + a.names[k];
  }
  return s.empty() ? "0" : s;
}

}  // namespace detail

/// Representative-level relation argument. Classes x, y must span the
/// closed space of their degree with no exact forms there. The supported
/// relations are x^p = 0 and y^q = f x^q; a contradiction means every choice
/// of representatives satisfying them makes y a multiple of x.
inline FormalityReport abstract_check(const AbstractDGA& a) {
  validate_dga(a);
  FormalityReport rep;
  rep.assumptions = {"harmonic representatives satisfy the cohomology relations on the form level",
                     "relation targets and invariant-form vanishing are inputs of the table"};
  int top = 0;
  for (int d : a.degrees) top = std::max(top, d);
  for (int k = 0; k <= top; ++k) {
    std::size_t z = detail::dga_closed(a, k).size();
    std::size_t b = z - detail::dga_exact_dim(a, k);
    rep.betti.push_back(b);
    rep.harmonic_dims.emplace_back(static_cast<std::size_t>(k), b);
  }
  if (a.relations.empty()) {
    rep.verdict = Verdict::Formal;
    rep.reason = "no declared relations; nothing to violate";
    return rep;
  }
  const int deg = a.class_degree;
  auto z = detail::dga_closed(a, deg);
  if (detail::dga_exact_dim(a, deg) != 0 || z.size() != a.classes.size() || a.classes.size() > 2) {
    rep.verdict = Verdict::Undecided;
    rep.reason = "unsupported: the classes must span the closed forms of their degree, with no exact forms";
    return rep;
  }
  auto cls = [&](const std::string& nm) -> int {
    for (std::size_t i = 0; i < a.classes.size(); ++i)
      if (a.classes[i] == nm) return static_cast<int>(i);
    throw DGAError("relations", "relation names undeclared class " + nm);
  };
  std::optional<DGARelation> nil, prop;
  for (const auto& r : a.relations) {
    cls(r.lhs);
    if (r.rhs.empty()) {
      if (nil) {
        rep.verdict = Verdict::Undecided;
        rep.reason = "unsupported relation pattern";
        return rep;
      }
      nil = r;
    } else {
      cls(r.rhs);
      if (prop) {
        rep.verdict = Verdict::Undecided;
        rep.reason = "unsupported relation pattern";
        return rep;
      }
      prop = r;
    }
  }
  if (prop && (!nil || nil->lhs != prop->rhs || prop->lhs == prop->rhs)) {
    rep.verdict = Verdict::Undecided;
    rep.reason = "unsupported relation pattern: the proportionality must compare a second class to the nilpotent one";
    return rep;
  }
  if (z.size() == 1) {
    rep.verdict = prop ? Verdict::Undecided : Verdict::Formal;
    rep.reason = prop ? "unsupported: a single class cannot carry two names" : "nilpotency checked directly";
    if (!prop && !is_zero_vec(detail::dga_power(a, z[0], nil->power))) {
      rep.verdict = Verdict::NotFormal;
      rep.witnesses.push_back({{}, {}, {}, 0, {}, {}, nil->lhs + "^" + std::to_string(nil->power) +
                                                       " is nonzero for every representative"});
      rep.reason = "relation impossible on representatives";
    }
    return rep;
  }
  // Stage one: directions u with (u1 z1 + u2 z2)^p = 0, u = (1, s) or (0, 1).
  std::vector<std::pair<RVec, std::string>> dirs;
  bool irrational = false;
  {
    const std::size_t nv = 1;
    std::vector<Poly> x(a.size(), Poly(0));
    for (std::size_t k = 0; k < a.size(); ++k)
      x[k] = Poly(z[0][k], nv) + Poly::var(0, nv) * z[1][k];
    auto xp = detail::dga_power(a, x, nil->power);
    UPoly g;
    for (const auto& c : xp) g = gcd(g, detail::to_upoly(c, 0));
    if (g.is_zero()) {
      rep.verdict = prop ? Verdict::Undecided : Verdict::Formal;
      rep.reason = prop ? "unsupported: the nilpotency relation leaves the class unconstrained"
                        : "every representative satisfies the declared relations";
      return rep;
    }
    if (g.degree() > 0)
      for (const auto& r : real_roots(g)) {
        if (r.exact) dirs.emplace_back(RVec{Rational(1), r.lo}, "");
        else irrational = true;
      }
    if (is_zero_vec(detail::dga_power(a, z[1], nil->power))) dirs.emplace_back(RVec{Rational(0), Rational(1)}, "");
  }
  if (dirs.empty() && !irrational) {
    rep.verdict = Verdict::NotFormal;
    rep.witnesses.push_back({{}, {}, {}, 0, {}, {}, nil->lhs + "^" + std::to_string(nil->power) +
                                                     " = 0 has no nonzero representative"});
    rep.reason = "relation impossible on representatives";
    return rep;
  }
  if (!prop) {
    rep.verdict = dirs.empty() ? Verdict::Undecided : Verdict::Formal;
    rep.reason = dirs.empty() ? "only irrational representatives, not resolved"
                              : "representatives satisfying the declared relations exist";
    return rep;
  }
  // Stage two: y = alpha x0 + w independent of x = lambda x0; mu = lambda^q.
  const unsigned q = prop->power;
  bool undecided = irrational;
  std::vector<std::string> failures;
  for (auto& [x0, why] : dirs) {
    RVec w = x0[0].is_zero() ? RVec{Rational(1), Rational(0)} : RVec{Rational(0), Rational(1)};
    const std::size_t nv = 2;  // alpha, mu
    std::vector<Poly> y(a.size(), Poly(0)), xf(a.size(), Poly(0));
    for (std::size_t k = 0; k < a.size(); ++k) {
      Rational xk = x0[0] * z[0][k] + x0[1] * z[1][k];
      Rational wk = w[0] * z[0][k] + w[1] * z[1][k];
      y[k] = Poly::var(0, nv) * xk + Poly(wk, nv);
      xf[k] = Poly(xk, nv);
    }
    auto yq = detail::dga_power(a, y, q);
    auto xq = detail::dga_power(a, xf, q);
    std::vector<Poly> eqs;
    for (std::size_t k = 0; k < a.size(); ++k) {
      Poly e = yq[k] - Poly::var(1, nv) * xq[k] * prop->factor;
      if (!e.is_zero()) eqs.push_back(e);
    }
    std::string xs = detail::rvec_in(z, x0, a);
    auto admissible = [&](const Rational& mu) { return !mu.is_zero() && (q % 2 == 1 || mu.sign() > 0); };
    std::optional<std::size_t> lin;
    for (std::size_t m = 0; m < eqs.size() && !lin; ++m)
      if (!(eqs[m].substitute(1, Rational(1)) - eqs[m].substitute(1, Rational(0))).is_zero()) lin = m;
    bool solvable = false;
    if (!lin) {
      UPoly g;
      for (const auto& e : eqs) g = gcd(g, detail::to_upoly(e.substitute(1, Rational(0)), 0));
      solvable = g.is_zero() || (g.degree() > 0 && !real_roots(g).empty());
      if (!solvable) failures.push_back("for x ~ " + xs + ": no real alpha solves the y-equations");
    } else {
      const Poly& e = eqs[*lin];
      Poly mu_coeff = e.substitute(1, Rational(1)) - e.substitute(1, Rational(0));
      if (!mu_coeff.is_constant()) {
        undecided = true;
        continue;
      }
      Rational dm = mu_coeff.constant_value();
      Poly r = e.substitute(1, Rational(0)) * (-dm.inverse());  // mu = r(alpha)
      UPoly ru = detail::to_upoly(r, 0);
      UPoly g;
      for (std::size_t m = 0; m < eqs.size(); ++m) {
        if (m == *lin) continue;
        // Replace mu by r(alpha): eqs are linear in mu.
        Poly c1 = eqs[m].substitute(1, Rational(1)) - eqs[m].substitute(1, Rational(0));
        Poly c0 = eqs[m].substitute(1, Rational(0));
        g = gcd(g, detail::to_upoly(c0 + c1 * r, 0));
      }
      if (g.is_zero()) {
        if (ru.is_zero()) {
          solvable = false;
        } else if (q % 2 == 1 || ru.lead().sign() > 0 || ru.degree() % 2 == 1) {
          solvable = true;
        } else {
          for (const auto& pt : detail::gap_points(ru.degree() > 0 ? real_roots(ru) : std::vector<RootInterval>{}))
            if (admissible(ru(pt))) solvable = true;
        }
      } else if (g.degree() > 0) {
        for (const auto& root : real_roots(g)) {
          if (!root.exact) {
            undecided = true;
            continue;
          }
          if (admissible(ru(root.lo))) solvable = true;
        }
      }
      if (!solvable)
        failures.push_back("for " + nil->lhs + " ~ " + xs + ": " + prop->lhs + "^" + std::to_string(q) + " = " +
                           prop->factor.str() + "*" + nil->lhs + "^" + std::to_string(q) +
                           " forces " + prop->lhs + " to be a multiple of " + nil->lhs);
    }
    if (solvable) {
      rep.verdict = Verdict::Formal;
      rep.reason = "representatives satisfying the declared relations exist";
      return rep;
    }
  }
  if (undecided) {
    rep.verdict = Verdict::Undecided;
    rep.reason = "irrational or non-linear branches not resolved";
    return rep;
  }
  rep.verdict = Verdict::NotFormal;
  std::string note = nil->lhs + "^" + std::to_string(nil->power) + " = 0 allows " + std::to_string(dirs.size()) +
                     " direction(s)";
  for (const auto& f : failures) note += "; " + f;
  rep.witnesses.push_back({{}, {}, {}, 0, {}, {}, note});
  rep.reason = "declared relations force a degenerate representative";
  return rep;
}

namespace catalog {

/// The flag-manifold model: even generators w1, w2, w3 of degree 2k with
/// w_i^2 = 0 and independent products, and an odd t of degree 2k+1 with
/// d(w_i) = t and t annihilating every positive-degree element, so
/// sum a_i w_i is closed iff sum a_i = 0.
inline AbstractDGA flag_dga(int k, bool with_proportional = true) {
  AbstractDGA a;
  a.name = "flag_" + std::to_string(6 * k);
  // Subsets of {w1, w2, w3} as bitmasks, then t.
  const std::vector<unsigned> sets{0u, 1u, 2u, 4u, 3u, 5u, 6u, 7u};
  for (unsigned s : sets) {
    std::string nm;
    for (int i = 0; i < 3; ++i)
      if (s & (1u << i)) nm += (nm.empty() ? "" : "*") + std::string("w") + std::to_string(i + 1);
    a.names.push_back(nm.empty() ? "1" : nm);
    a.degrees.push_back(2 * k * std::popcount(s));
  }
  a.names.push_back("t");
  a.degrees.push_back(2 * k + 1);
  const std::size_t n = a.names.size(), t = n - 1;
  auto index = [&](unsigned s) {
    return static_cast<std::size_t>(std::find(sets.begin(), sets.end(), s) - sets.begin());
  };
  a.generators = {index(1), index(2), index(4), t};
  for (std::size_t i = 0; i < sets.size(); ++i)
    for (std::size_t j = 0; j < sets.size(); ++j)
      if (!(sets[i] & sets[j])) a.product[{i, j}] = unit_vec(n, index(sets[i] | sets[j]));
  a.product[{0, t}] = unit_vec(n, t);
  a.product[{t, 0}] = unit_vec(n, t);
  for (std::size_t i = 0; i < n; ++i)
    a.differential.push_back(std::popcount(sets.size() > i ? sets[i] : 0u) == 1 ? unit_vec(n, t) : zero_vec(n));
  a.class_degree = 2 * k;
  a.classes = {"x", "y"};
  a.relations.push_back({"x", "", 3, Rational(0)});
  if (with_proportional) a.relations.push_back({"y", "x", 2, Rational(-3)});
  return a;
}

/// Truncated free algebra on one even generator: 1, x, ..., x^top.
inline AbstractDGA free_even_dga(int degree = 2, int top = 3) {
  AbstractDGA a;
  a.name = "free_even";
  const std::size_t n = static_cast<std::size_t>(top) + 1;
  for (int i = 0; i <= top; ++i) {
    a.names.push_back(i == 0 ? "1" : (i == 1 ? "x" : "x^" + std::to_string(i)));
    a.degrees.push_back(i * degree);
    a.differential.push_back(zero_vec(n));
  }
  a.generators = {1};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; i + j < n; ++j) a.product[{i, j}] = unit_vec(n, i + j);
  return a;
}

}  // namespace catalog

}  // namespace invform
