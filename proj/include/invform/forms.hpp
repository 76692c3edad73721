#pragma once

#include <bit>
#include <cctype>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "invform/homogeneous.hpp"
#include "invform/matrix.hpp"
#include "invform/scalar.hpp"

namespace invform {

using Mask = std::uint64_t;

/// Orders index sets as lexicographically ordered increasing tuples.
struct LexMask {
  bool operator()(Mask a, Mask b) const {
    while (a && b) {
      int la = std::countr_zero(a), lb = std::countr_zero(b);
      if (la != lb) return la < lb;
      a &= a - 1;
      b &= b - 1;
    }
    return b != 0 && a == 0;
  }
};

inline std::vector<std::size_t> mask_indices(Mask m) {
  std::vector<std::size_t> out;
  while (m) {
    out.push_back(static_cast<std::size_t>(std::countr_zero(m)));
    m &= m - 1;
  }
  return out;
}

inline Mask bit(std::size_t i) { return Mask{1} << i; }

/// All k-subsets of {0..n-1} in lexicographic order.
inline std::vector<Mask> subsets(std::size_t n, std::size_t k) {
  std::vector<Mask> out;
  if (k > n) return out;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    Mask m = 0;
    for (auto i : idx) m |= bit(i);
    out.push_back(m);
    std::size_t p = k;
    while (p > 0 && idx[p - 1] == n - k + p - 1) --p;
    if (p == 0) break;
    ++idx[p - 1];
    for (std::size_t q = p; q < k; ++q) idx[q] = idx[q - 1] + 1;
  }
  return out;
}

/// Sign of the permutation sorting the concatenation (A, B) of disjoint sets.
inline int merge_sign(Mask a, Mask b) {
  int inv = 0;
  for (Mask bb = b; bb; bb &= bb - 1) {
    int j = std::countr_zero(bb);
    inv += std::popcount(a >> (j + 1));
  }
  return (inv & 1) ? -1 : 1;
}

/// Sparse exterior form on the dual of m: index set -> coefficient.
class Form {
 public:
  using Terms = std::map<Mask, Scalar, LexMask>;

  Form() = default;
  Form(std::size_t dim, std::size_t degree) : dim_(dim), deg_(degree) {
    if (dim > 64) throw StructuralError("Form: dimension above 64 unsupported");
  }

  static Form constant(std::size_t dim, const Scalar& c) {
    Form f(dim, 0);
    f.add_term(0, c);
    return f;
  }
  static Form basis(std::size_t dim, Mask m, const Scalar& c = Scalar(1)) {
    Form f(dim, static_cast<std::size_t>(std::popcount(m)));
    f.add_term(m, c);
    return f;
  }
  static Form one_form(std::size_t dim, std::size_t i) { return basis(dim, bit(i)); }

  [[nodiscard]] std::size_t dim() const { return dim_; }
  [[nodiscard]] std::size_t degree() const { return deg_; }
  [[nodiscard]] const Terms& terms() const { return terms_; }
  [[nodiscard]] bool is_zero() const { return terms_.empty(); }

  [[nodiscard]] Scalar coeff(Mask m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Scalar(0) : it->second;
  }

  void add_term(Mask m, const Scalar& c) {
    if (static_cast<std::size_t>(std::popcount(m)) != deg_) throw StructuralError("Form: term degree mismatch");
    if (c.is_zero()) return;
    auto [it, fresh] = terms_.try_emplace(m, c);
    if (!fresh) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  Form& operator+=(const Form& o) {
    check_same(o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  Form& operator-=(const Form& o) {
    check_same(o);
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  friend Form operator+(Form a, const Form& b) { return a += b; }
  friend Form operator-(Form a, const Form& b) { return a -= b; }
  Form operator-() const {
    Form r(dim_, deg_);
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
    return r;
  }
  friend Form operator*(const Scalar& s, const Form& f) {
    Form r(f.dim_, f.deg_);
    if (s.is_zero()) return r;
    for (const auto& [m, c] : f.terms_) r.add_term(m, s * c);
    return r;
  }

  friend bool operator==(const Form& a, const Form& b) {
    if (a.dim_ != b.dim_ || a.deg_ != b.deg_ || a.terms_.size() != b.terms_.size()) return false;
    auto i = a.terms_.begin();
    auto j = b.terms_.begin();
    for (; i != a.terms_.end(); ++i, ++j)
      if (i->first != j->first || !(i->second == j->second)) return false;
    return true;
  }

  /// Value on the basis vectors listed in increasing order by `m`.
  [[nodiscard]] Scalar on_sorted(Mask m) const { return coeff(m); }

  /// ω(u_c, u_R) for R a sorted (deg-1)-set.
  [[nodiscard]] Scalar on_front(std::size_t c, Mask r) const {
    if (r & bit(c)) return Scalar(0);
    Scalar v = coeff(r | bit(c));
    if (v.is_zero()) return v;
    int below = std::popcount(r & (bit(c) - 1));
    return (below & 1) ? -v : v;
  }

  [[nodiscard]] Form evaluate(std::span<const Rational> point) const {
    Form r(dim_, deg_);
    for (const auto& [m, c] : terms_) r.add_term(m, Scalar(c.evaluate(point)));
    return r;
  }

  [[nodiscard]] std::string str(const std::vector<std::string>& labels = {},
                                const std::vector<std::string>& params = {}) const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [m, c] : terms_) {
      std::string cs;
      bool neg = false;
      if (c.is_rational()) {
        Rational r = c.rational();
        if (r.sign() < 0) {
          neg = true;
          r = -r;
        }
        if (!r.is_one() || m == 0) cs = r.str();
      } else {
        cs = "(" + c.str(params) + ")";
      }
      std::string mono;
      for (auto i : mask_indices(m)) {
        if (!mono.empty()) mono += "^";
        mono += i < labels.size() ? labels[i] : "e" + std::to_string(i);
      }
      std::string body = cs.empty() ? mono : (mono.empty() ? cs : cs + "*" + mono);
      if (first) out += (neg ? "-" : "") + body;
      else out += (neg ? " - " : " + ") + body;
      first = false;
    }
    return out;
  }

 private:
  void check_same(const Form& o) const {
    if (o.dim_ != dim_ || o.deg_ != deg_) throw StructuralError("Form: dimension or degree mismatch");
  }

  std::size_t dim_ = 0;
  std::size_t deg_ = 0;
  Terms terms_;
};

/// Exterior product; degree above dim m gives the zero form.
inline Form wedge(const Form& a, const Form& b) {
  if (a.dim() != b.dim()) throw StructuralError("wedge: forms over different spaces");
  Form r(a.dim(), a.degree() + b.degree());
  if (a.degree() + b.degree() > a.dim()) return r;
  for (const auto& [ma, ca] : a.terms())
    for (const auto& [mb, cb] : b.terms()) {
      if (ma & mb) continue;
      Scalar c = ca * cb;
      r.add_term(ma | mb, merge_sign(ma, mb) < 0 ? -c : c);
    }
  return r;
}

inline Form wedge_power(const Form& a, unsigned p) {
  Form r = Form::constant(a.dim(), Scalar(1));
  for (unsigned i = 0; i < p; ++i) r = wedge(r, a);
  return r;
}

/// d(e^c) = sum_{a<b} c-th coordinate of [u_a, u_b]_m * e^a ^ e^b, the
/// formal differential of a dual basis 1-form.
inline Form d_basis_oneform(const ReductiveSplit& s, std::size_t c) {
  const std::size_t n = s.dim_m();
  Form r(n, 2);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      const Rational& v = s.bracket_m(a, b)[c];
      if (!v.is_zero()) r.add_term(bit(a) | bit(b), Scalar(v));
    }
  return r;
}

/// Pointwise differential: dω(u_0..u_k) = sum_{p<q} (-1)^(p+q+1) ω([u_p,u_q]_m, rest).
/// Invariance of ω is not required.
inline Form d_form(const ReductiveSplit& s, const Form& w) {
  const std::size_t n = s.dim_m();
  const std::size_t k = w.degree();
  if (k + 1 > n || w.is_zero() || k == 0) return Form(n, k + 1);
  Form r(n, k + 1);
  for (Mask j : subsets(n, k + 1)) {
    auto idx = mask_indices(j);
    Scalar acc(0);
    for (std::size_t p = 0; p < idx.size(); ++p)
      for (std::size_t q = p + 1; q < idx.size(); ++q) {
        const RVec& br = s.bracket_m(idx[p], idx[q]);
        Mask rest = j & ~bit(idx[p]) & ~bit(idx[q]);
        Scalar val(0);
        for (std::size_t c = 0; c < n; ++c)
          if (!br[c].is_zero()) {
            Scalar v = w.on_front(c, rest);
            if (!v.is_zero()) val += Scalar(br[c]) * v;
          }
        if (val.is_zero()) continue;
        acc += ((p + q + 1) & 1) ? -val : val;
      }
    r.add_term(j, acc);
  }
  return r;
}

/// Differential through the graded product rule over the wedge expansion,
/// from the precomputed d of the basis 1-forms.
class ProductRuleD {
 public:
  explicit ProductRuleD(const ReductiveSplit& s) : n_(s.dim_m()) {
    for (std::size_t c = 0; c < n_; ++c) d1_.push_back(d_basis_oneform(s, c));
  }

  [[nodiscard]] const Form& d_basis(std::size_t c) const { return d1_[c]; }

  [[nodiscard]] Form operator()(const Form& w) const {
    const std::size_t k = w.degree();
    if (k == 0 || k + 1 > n_) return Form(n_, k + 1);
    Form r(n_, k + 1);
    for (const auto& [m, c] : w.terms()) {
      auto idx = mask_indices(m);
      for (std::size_t p = 0; p < idx.size(); ++p) {
        Mask before = 0, after = 0;
        for (std::size_t q = 0; q < p; ++q) before |= bit(idx[q]);
        for (std::size_t q = p + 1; q < idx.size(); ++q) after |= bit(idx[q]);
        Form term = wedge(wedge(Form::basis(n_, before), d1_[idx[p]]), Form::basis(n_, after));
        Scalar coef = (p & 1) ? -c : c;
        r += coef * term;
      }
    }
    return r;
  }

 private:
  std::size_t n_;
  std::vector<Form> d1_;
};

inline Form d_product_rule(const ReductiveSplit& s, const Form& w) { return ProductRuleD(s)(w); }

/// Infinitesimal isotropy action X.ω = -sum over slots of ω composed with A = ad_X|m.
inline Form act(const Matrix<Rational>& a, const Form& w) {
  const std::size_t n = w.dim();
  Form r(n, w.degree());
  for (const auto& [m, c] : w.terms()) {
    for (std::size_t slot : mask_indices(m)) {
      Mask rest = m & ~bit(slot);
      for (std::size_t j = 0; j < n; ++j) {
        const Rational& v = a(slot, j);
        if (v.is_zero() || (rest & bit(j))) continue;
        // Replace e^slot by -v e^j in place: moving j to slot's position.
        int s1 = std::popcount(rest & (bit(slot) - 1));
        int s2 = std::popcount(rest & (bit(j) - 1));
        Scalar coef = c * Scalar(-v);
        r.add_term(rest | bit(j), ((s1 + s2) & 1) ? -coef : coef);
      }
    }
  }
  return r;
}

/// Inner products induced by a metric on m: on degree k the pairing of basis
/// forms e^I, e^J is det of the (I, J) block of the inverse Gram.
class FormPairing {
 public:
  explicit FormPairing(const MetricOnM& g) : g_(g), rational_(g.is_rational()) {
    if (rational_) cr_ = to_rational(g.cogram);
  }

  [[nodiscard]] Scalar basis_pairing(Mask i, Mask j) const {
    if (std::popcount(i) != std::popcount(j)) throw StructuralError("inner_product: degree mismatch");
    auto key = std::make_pair(i, j);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    auto ii = mask_indices(i), jj = mask_indices(j);
    const std::size_t k = ii.size();
    Scalar v;
    if (k == 0) {
      v = Scalar(1);
    } else if (rational_) {
      Matrix<Rational> b(k, k);
      bool row_zero = false;
      for (std::size_t r = 0; r < k && !row_zero; ++r) {
        bool any = false;
        for (std::size_t c = 0; c < k; ++c) {
          b(r, c) = cr_(ii[r], jj[c]);
          any = any || !b(r, c).is_zero();
        }
        row_zero = !any;
      }
      v = row_zero ? Scalar(0) : Scalar(determinant(b));
    } else {
      Matrix<Scalar> b(k, k);
      bool row_zero = false;
      for (std::size_t r = 0; r < k && !row_zero; ++r) {
        bool any = false;
        for (std::size_t c = 0; c < k; ++c) {
          b(r, c) = g_.cogram(ii[r], jj[c]);
          any = any || !b(r, c).is_zero();
        }
        row_zero = !any;
      }
      v = row_zero ? Scalar(0) : determinant(b);
    }
    cache_.emplace(key, v);
    return v;
  }

  [[nodiscard]] Scalar operator()(const Form& a, const Form& b) const {
    if (a.degree() != b.degree()) throw StructuralError("inner_product: degree mismatch");
    Scalar acc(0);
    for (const auto& [ma, ca] : a.terms())
      for (const auto& [mb, cb] : b.terms()) {
        Scalar p = basis_pairing(ma, mb);
        if (!p.is_zero()) acc += ca * cb * p;
      }
    return acc;
  }

 private:
  struct PairHash {
    std::size_t operator()(const std::pair<Mask, Mask>& p) const {
      return std::hash<Mask>()(p.first) * 1000003u ^ std::hash<Mask>()(p.second);
    }
  };
  const MetricOnM& g_;
  bool rational_;
  Matrix<Rational> cr_;
  mutable std::unordered_map<std::pair<Mask, Mask>, Scalar, PairHash> cache_;
};

inline Scalar inner_product(const Form& a, const Form& b, const MetricOnM& g) { return FormPairing(g)(a, b); }

/// Parses expressions like "E2^E3 - F2^F3 + 3*F1^eps" or "(E1^F1 + E2^F2)^F3".
/// Both '^' and '*' denote the exterior product; numbers are 0-forms and
/// "$name" refers to a declared parameter.
class FormParser {
 public:
  FormParser(std::size_t dim, const std::vector<std::string>& labels, const std::vector<std::string>& params = {})
      : dim_(dim), labels_(labels), params_(params) {}

  Form parse(std::string_view text) {
    s_ = text;
    pos_ = 0;
    Form f = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw std::invalid_argument("form parse error at " + std::to_string(pos_) + ": " + why + " in '" +
                                std::string(s_) + "'");
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  static Form add_forms(const Form& a, const Form& b) {
    if (a.is_zero() && a.degree() != b.degree()) return b;
    if (b.is_zero() && a.degree() != b.degree()) return a;
    return a + b;
  }
  Form expr() {
    Form acc = term();
    while (true) {
      skip();
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) {
        char op = s_[pos_++];
        Form t = term();
        acc = add_forms(acc, op == '+' ? t : -t);
      } else {
        return acc;
      }
    }
  }
  Form term() {
    Form acc = factor();
    while (true) {
      skip();
      if (pos_ < s_.size() && (s_[pos_] == '^' || s_[pos_] == '*')) {
        ++pos_;
        acc = wedge(acc, factor());
      } else {
        return acc;
      }
    }
  }
  Form factor() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    char ch = s_[pos_];
    if (ch == '-') {
      ++pos_;
      return -factor();
    }
    if (ch == '(') {
      ++pos_;
      Form f = expr();
      skip();
      if (pos_ >= s_.size() || s_[pos_] != ')') fail("missing ')'");
      ++pos_;
      return f;
    }
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '/')) ++pos_;
      if (pos_ < s_.size() && s_[pos_] == '.') fail("floating-point literal");
      return Form::constant(dim_, Scalar(Rational::parse(s_.substr(start, pos_ - start))));
    }
    bool param = ch == '$';
    if (param) ++pos_;
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    if (start == pos_) fail("expected a label");
    std::string name(s_.substr(start, pos_ - start));
    if (param) {
      for (std::size_t i = 0; i < params_.size(); ++i)
        if (params_[i] == name) return Form::constant(dim_, Scalar(Poly::var(i, params_.size())));
      fail("undeclared parameter '" + name + "'");
    }
    for (std::size_t i = 0; i < labels_.size(); ++i)
      if (labels_[i] == name) return Form::one_form(dim_, i);
    fail("unknown label '" + name + "'");
  }

  std::size_t dim_;
  const std::vector<std::string>& labels_;
  const std::vector<std::string>& params_;
  std::string_view s_;
  std::size_t pos_ = 0;
};

inline Form parse_form(std::string_view text, std::size_t dim, const std::vector<std::string>& labels,
                       const std::vector<std::string>& params = {}) {
  return FormParser(dim, labels, params).parse(text);
}

}  // namespace invform
