#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "invform/forms.hpp"
#include "invform/homogeneous.hpp"
#include "invform/matrix.hpp"

namespace invform {

/// Basis of a subspace of degree-k forms. Rational spaces are kept in reduced
/// row echelon form over the lexicographically ordered index sets, so the
/// coordinates of a member are its coefficients at the pivot index sets.
struct FormSpace {
  std::size_t degree = 0;
  std::string role;
  std::vector<Form> basis;
  std::vector<Mask> pivots;

  [[nodiscard]] std::size_t dim() const { return basis.size(); }

  /// Coordinates of a member of the span (read at the pivots).
  [[nodiscard]] std::vector<Scalar> coordinates(const Form& f) const {
    std::vector<Scalar> c;
    for (Mask p : pivots) c.push_back(f.coeff(p));
    return c;
  }

  /// Whether f lies in the span.
  [[nodiscard]] bool contains(const Form& f) const {
    Form r = f;
    auto c = coordinates(f);
    for (std::size_t i = 0; i < basis.size(); ++i) r -= c[i] * basis[i];
    return r.is_zero();
  }
};

/// Rational forms of one degree to an RREF basis of their span.
inline FormSpace canonical_space(std::size_t dim, std::size_t degree, const std::vector<Form>& forms,
                                 std::string role) {
  FormSpace out;
  out.degree = degree;
  out.role = std::move(role);
  std::vector<Mask> cols;
  for (const auto& f : forms)
    for (const auto& [m, c] : f.terms()) cols.push_back(m);
  std::sort(cols.begin(), cols.end(), LexMask{});
  cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
  if (cols.empty()) return out;
  std::map<Mask, std::size_t, LexMask> pos;
  for (std::size_t i = 0; i < cols.size(); ++i) pos[cols[i]] = i;
  Matrix<Rational> m(forms.size(), cols.size());
  for (std::size_t r = 0; r < forms.size(); ++r)
    for (const auto& [mk, c] : forms[r].terms()) m(r, pos[mk]) = c.rational();
  auto piv = rref(m);
  for (std::size_t r = 0; r < piv.size(); ++r) {
    Form f(dim, degree);
    for (std::size_t j = 0; j < cols.size(); ++j)
      if (!m(r, j).is_zero()) f.add_term(cols[j], Scalar(m(r, j)));
    out.basis.push_back(std::move(f));
    out.pivots.push_back(cols[piv[r]]);
  }
  return out;
}

namespace detail {

/// Kernel of the linear map s -> image(s) restricted to span(current), by
/// splitting the columns into groups that share no index set.
inline std::vector<Form> restrict_kernel(const std::vector<Form>& current, const std::vector<Form>& images) {
  const std::size_t ncols = current.size();
  std::vector<std::size_t> parent(ncols);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::unordered_map<Mask, std::size_t> owner;
  for (std::size_t j = 0; j < ncols; ++j)
    for (const auto& [m, c] : images[j].terms()) {
      auto [it, fresh] = owner.try_emplace(m, j);
      if (!fresh) parent[find(j)] = find(it->second);
    }
  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t j = 0; j < ncols; ++j) groups[find(j)].push_back(j);
  std::vector<Form> out;
  for (const auto& [root, cols] : groups) {
    if (cols.size() == 1 && images[cols[0]].is_zero()) {
      out.push_back(current[cols[0]]);
      continue;
    }
    std::vector<Mask> rows;
    for (auto j : cols)
      for (const auto& [m, c] : images[j].terms()) rows.push_back(m);
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    Matrix<Rational> a(rows.size(), cols.size());
    for (std::size_t jj = 0; jj < cols.size(); ++jj)
      for (const auto& [m, c] : images[cols[jj]].terms()) {
        auto r = static_cast<std::size_t>(std::lower_bound(rows.begin(), rows.end(), m) - rows.begin());
        a(r, jj) = c.rational();
      }
    for (const auto& v : nullspace(a).basis) {
      Form f(current[0].dim(), current[0].degree());
      for (std::size_t jj = 0; jj < cols.size(); ++jj)
        if (!v[jj].is_zero()) f += Scalar(v[jj]) * current[cols[jj]];
      out.push_back(std::move(f));
    }
  }
  return out;
}

inline std::size_t nnz(const Matrix<Rational>& a) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) n += !a(i, j).is_zero();
  return n;
}

}  // namespace detail

/// Degree-k forms annihilated by every isotropy operator.
inline FormSpace invariant_forms(const ReductiveSplit& s, const std::vector<Matrix<Rational>>& ops, std::size_t k) {
  const std::size_t n = s.dim_m();
  std::vector<Form> current;
  if (k <= n)
    for (Mask m : subsets(n, k)) current.push_back(Form::basis(n, m));
  std::vector<std::size_t> order(ops.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return detail::nnz(ops[a]) < detail::nnz(ops[b]); });
  for (std::size_t o : order) {
    if (current.empty()) break;
    std::vector<Form> images;
    images.reserve(current.size());
    for (const auto& f : current) images.push_back(act(ops[o], f));
    current = detail::restrict_kernel(current, images);
  }
  return canonical_space(n, k, current, "invariant");
}

/// The invariant complex of a validated spec: invariant forms, d, closed and
/// exact subspaces in every degree, computed on demand and cached.
class InvariantComplex {
 public:
  InvariantComplex(const HomogeneousSpaceSpec& spec, const ReductiveSplit& split)
      : spec_(spec), split_(split), ops_(isotropy_operators(spec.algebra, split)), d_(split) {
    const std::size_t n = split_.dim_m();
    inv_.resize(n + 1);
    closed_.resize(n + 1);
    exact_.resize(n + 1);
    dimages_.resize(n + 1);
  }

  [[nodiscard]] std::size_t dim_m() const { return split_.dim_m(); }
  [[nodiscard]] const ReductiveSplit& split() const { return split_; }
  [[nodiscard]] const HomogeneousSpaceSpec& spec() const { return spec_; }
  [[nodiscard]] const std::vector<Matrix<Rational>>& isotropy() const { return ops_; }
  [[nodiscard]] Form d(const Form& f) const { return d_(f); }

  const FormSpace& invariant(std::size_t k) {
    if (k > dim_m()) return empty(k);
    if (!inv_[k]) inv_[k] = invariant_forms(split_, ops_, k);
    return *inv_[k];
  }

  /// d of each invariant basis form of degree k.
  const std::vector<Form>& d_images(std::size_t k) {
    if (!dimages_[k]) {
      std::vector<Form> im;
      for (const auto& b : invariant(k).basis) im.push_back(d_(b));
      dimages_[k] = std::move(im);
    }
    return *dimages_[k];
  }

  const FormSpace& closed(std::size_t k) {
    if (k > dim_m()) return empty(k);
    if (!closed_[k]) {
      const auto& inv = invariant(k);
      const auto& im = d_images(k);
      std::vector<Form> ker;
      if (k == dim_m()) {
        ker = inv.basis;
      } else {
        std::vector<Mask> rows;
        for (const auto& f : im)
          for (const auto& [m, c] : f.terms()) rows.push_back(m);
        std::sort(rows.begin(), rows.end());
        rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
        Matrix<Rational> a(rows.size(), inv.dim());
        for (std::size_t j = 0; j < im.size(); ++j)
          for (const auto& [m, c] : im[j].terms())
            a(static_cast<std::size_t>(std::lower_bound(rows.begin(), rows.end(), m) - rows.begin()), j) =
                c.rational();
        for (const auto& v : nullspace(a).basis) {
          Form f(dim_m(), k);
          for (std::size_t j = 0; j < v.size(); ++j)
            if (!v[j].is_zero()) f += Scalar(v[j]) * inv.basis[j];
          ker.push_back(std::move(f));
        }
      }
      closed_[k] = canonical_space(dim_m(), k, ker, "closed");
    }
    return *closed_[k];
  }

  const FormSpace& exact(std::size_t k) {
    if (k > dim_m()) return empty(k);
    if (!exact_[k]) {
      std::vector<Form> im;
      if (k > 0) im = d_images(k - 1);
      exact_[k] = canonical_space(dim_m(), k, im, "exact");
    }
    return *exact_[k];
  }

  std::size_t betti(std::size_t k) { return closed(k).dim() - exact(k).dim(); }

  std::vector<std::size_t> betti_vector() {
    std::vector<std::size_t> b;
    for (std::size_t k = 0; k <= dim_m(); ++k) b.push_back(betti(k));
    return b;
  }

 private:
  const FormSpace& empty(std::size_t k) {
    empty_ = FormSpace{k, "empty", {}, {}};
    return empty_;
  }

  const HomogeneousSpaceSpec& spec_;
  const ReductiveSplit& split_;
  std::vector<Matrix<Rational>> ops_;
  ProductRuleD d_;
  std::vector<std::optional<FormSpace>> inv_, closed_, exact_;
  std::vector<std::optional<std::vector<Form>>> dimages_;
  FormSpace empty_;
};

/// Harmonic subspace: closed forms pairing to zero with every exact form.
/// `coords` expresses each basis form in the closed basis with its first
/// nonzero coordinate set to 1. `pivots` are the polynomials whose
/// nonvanishing keeps the generic parametric answer valid.
struct HarmonicSpace {
  FormSpace space;
  std::vector<std::vector<Scalar>> coords;
  std::vector<Poly> pivots;
  /// Pairing matrix rows: exact basis j against closed basis i.
  ScalarMatrix conditions;
};

inline HarmonicSpace harmonic_space(InvariantComplex& cx, std::size_t k, const MetricOnM& g) {
  HarmonicSpace out;
  out.space.degree = k;
  out.space.role = "harmonic";
  const auto& cl = cx.closed(k);
  const auto& ex = cx.exact(k);
  FormPairing pair(g);
  ScalarMatrix m(ex.dim(), cl.dim());
  for (std::size_t j = 0; j < ex.dim(); ++j)
    for (std::size_t i = 0; i < cl.dim(); ++i) m(j, i) = pair(ex.basis[j], cl.basis[i]);
  out.conditions = m;
  std::vector<std::vector<Scalar>> kernel;
  if (ex.dim() == 0) {
    for (std::size_t i = 0; i < cl.dim(); ++i) {
      std::vector<Scalar> v(cl.dim(), Scalar(0));
      v[i] = Scalar(1);
      kernel.push_back(v);
    }
  } else {
    auto ns = nullspace(m);
    kernel = ns.basis;
    out.pivots = ns.pivots;
  }
  for (auto& v : kernel) {
    Scalar lead(0);
    for (const auto& x : v)
      if (!x.is_zero()) {
        lead = x;
        break;
      }
    Form f(cx.dim_m(), k);
    for (std::size_t i = 0; i < v.size(); ++i) {
      v[i] = v[i] / lead;
      if (!v[i].is_zero()) f += v[i] * cl.basis[i];
    }
    out.space.basis.push_back(std::move(f));
    out.coords.push_back(v);
  }
  return out;
}

}  // namespace invform
