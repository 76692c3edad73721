#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "invform/rational.hpp"

namespace invform {

using Monomial = std::vector<std::uint32_t>;

/// Graded-lexicographic order, largest first: higher total degree wins, ties
/// broken lexicographically with variable 0 most significant.
struct GrlexGreater {
  bool operator()(const Monomial& a, const Monomial& b) const {
    std::uint64_t da = 0, db = 0;
    for (auto e : a) da += e;
    for (auto e : b) db += e;
    if (da != db) return da > db;
    std::size_t n = std::max(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
      std::uint32_t ea = i < a.size() ? a[i] : 0;
      std::uint32_t eb = i < b.size() ? b[i] : 0;
      if (ea != eb) return ea > eb;
    }
    return false;
  }
};

/// Sparse multivariate polynomial over the rationals.
///
/// Variables are positional; names live with whoever owns the parameter list
/// and are only needed for printing and parsing. Polynomials with fewer
/// variables are implicitly padded with zero exponents, so a constant built
/// with zero variables mixes freely with anything.
class Poly {
 public:
  using Terms = std::map<Monomial, Rational, GrlexGreater>;

  Poly() = default;
  Poly(const Rational& c, std::size_t nvars = 0) : nvars_(nvars) {  // NOLINT
    if (!c.is_zero()) terms_.emplace(Monomial(nvars, 0), c);
  }
  Poly(long c) : Poly(Rational(c)) {}  // NOLINT
  Poly(int c) : Poly(Rational(c)) {}   // NOLINT

  static Poly var(std::size_t i, std::size_t nvars) {
    if (i >= nvars) throw std::out_of_range("Poly::var: index out of range");
    Monomial m(nvars, 0);
    m[i] = 1;
    Poly p;
    p.nvars_ = nvars;
    p.terms_.emplace(std::move(m), Rational(1));
    return p;
  }

  static Poly monomial(Monomial m, const Rational& c) {
    Poly p;
    p.nvars_ = m.size();
    if (!c.is_zero()) p.terms_.emplace(std::move(m), c);
    return p;
  }

  [[nodiscard]] std::size_t nvars() const { return nvars_; }
  [[nodiscard]] const Terms& terms() const { return terms_; }
  [[nodiscard]] bool is_zero() const { return terms_.empty(); }
  [[nodiscard]] bool is_constant() const {
    if (terms_.empty()) return true;
    if (terms_.size() > 1) return false;
    for (auto e : terms_.begin()->first)
      if (e) return false;
    return true;
  }
  [[nodiscard]] Rational constant_value() const {
    if (!is_constant()) throw std::logic_error("Poly: not a constant");
    return terms_.empty() ? Rational(0) : terms_.begin()->second;
  }
  [[nodiscard]] const Monomial& leading_monomial() const { return terms_.begin()->first; }
  [[nodiscard]] const Rational& leading_coefficient() const { return terms_.begin()->second; }

  [[nodiscard]] std::uint64_t total_degree() const {
    if (terms_.empty()) return 0;
    std::uint64_t d = 0;
    for (auto e : terms_.begin()->first) d += e;
    return d;
  }

  [[nodiscard]] bool is_homogeneous() const {
    if (terms_.empty()) return true;
    std::uint64_t d = total_degree();
    for (const auto& [m, c] : terms_) {
      std::uint64_t dm = 0;
      for (auto e : m) dm += e;
      if (dm != d) return false;
    }
    return true;
  }

  /// Indices of variables that occur with nonzero exponent.
  [[nodiscard]] std::vector<std::size_t> variables_used() const {
    std::vector<bool> used(nvars_, false);
    for (const auto& [m, c] : terms_)
      for (std::size_t i = 0; i < m.size(); ++i)
        if (m[i]) used[i] = true;
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < used.size(); ++i)
      if (used[i]) out.push_back(i);
    return out;
  }

  Poly operator-() const {
    Poly r = *this;
    for (auto& [m, c] : r.terms_) c = -c;
    return r;
  }

  Poly& operator+=(const Poly& o) {
    widen(o.nvars_);
    for (const auto& [m, c] : o.terms_) add_term(padded(m), c);
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    widen(o.nvars_);
    for (const auto& [m, c] : o.terms_) add_term(padded(m), -c);
    return *this;
  }
  Poly& operator*=(const Rational& c) {
    if (c.is_zero()) {
      terms_.clear();
      return *this;
    }
    for (auto& [m, v] : terms_) v *= c;
    return *this;
  }
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(Poly a, const Rational& c) { return a *= c; }
  friend Poly operator*(const Rational& c, Poly a) { return a *= c; }
  friend Poly operator*(const Poly& a, const Poly& b) {
    Poly r;
    r.nvars_ = std::max(a.nvars_, b.nvars_);
    for (const auto& [ma, ca] : a.terms_) {
      for (const auto& [mb, cb] : b.terms_) {
        Monomial m(r.nvars_, 0);
        for (std::size_t i = 0; i < ma.size(); ++i) m[i] += ma[i];
        for (std::size_t i = 0; i < mb.size(); ++i) m[i] += mb[i];
        r.add_term(std::move(m), ca * cb);
      }
    }
    return r;
  }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }

  friend bool operator==(const Poly& a, const Poly& b) {
    return (a - b).is_zero();
  }

  [[nodiscard]] Poly pow(unsigned e) const {
    Poly r(Rational(1), nvars_);
    Poly b = *this;
    while (e) {
      if (e & 1u) r *= b;
      b *= b;
      e >>= 1u;
    }
    return r;
  }

  [[nodiscard]] Rational evaluate(std::span<const Rational> point) const {
    Rational acc(0);
    for (const auto& [m, c] : terms_) {
      Rational t = c;
      for (std::size_t i = 0; i < m.size(); ++i) {
        if (!m[i]) continue;
        if (i >= point.size()) throw std::out_of_range("Poly::evaluate: point too short");
        t *= point[i].pow(m[i]);
      }
      acc += t;
    }
    return acc;
  }

  /// Replaces variable `i` by the rational `value`.
  [[nodiscard]] Poly substitute(std::size_t i, const Rational& value) const {
    Poly r;
    r.nvars_ = nvars_;
    for (const auto& [m, c] : terms_) {
      Monomial mm = m;
      Rational cc = c;
      if (i < mm.size() && mm[i]) {
        cc *= value.pow(mm[i]);
        mm[i] = 0;
      }
      r.add_term(std::move(mm), cc);
    }
    return r;
  }

  /// Exact quotient `*this / d` if `d` divides `*this`, otherwise nullopt.
  /// A single divisor is a Groebner basis of its ideal, so the division
  /// algorithm has remainder zero exactly when `d` divides.
  [[nodiscard]] std::optional<Poly> divide_exact(const Poly& d) const {
    if (d.is_zero()) throw std::domain_error("Poly: division by zero");
    Poly r = *this;
    Poly q;
    std::size_t n = std::max(nvars_, d.nvars_);
    r.widen(n);
    q.nvars_ = n;
    const Monomial lm = padded_to(d.leading_monomial(), n);
    const Rational lc = d.leading_coefficient();
    while (!r.is_zero()) {
      const Monomial& rm = r.leading_monomial();
      Monomial t(n, 0);
      for (std::size_t i = 0; i < n; ++i) {
        if (rm[i] < lm[i]) return std::nullopt;
        t[i] = rm[i] - lm[i];
      }
      Poly term = monomial(std::move(t), r.leading_coefficient() / lc);
      q += term;
      r -= term * d;
    }
    return q;
  }

  /// Splits into (unit, primitive) with integer coprime coefficients and a
  /// positive leading coefficient, so that `*this == unit * primitive`.
  [[nodiscard]] std::pair<Rational, Poly> primitive_part() const {
    if (is_zero()) return {Rational(1), *this};
    mpz_class g = 0, l = 1;
    for (const auto& [m, c] : terms_) {
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.num().get_mpz_t());
      mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.den().get_mpz_t());
    }
    Rational unit(g, l);
    if (leading_coefficient().sign() < 0) unit = -unit;
    Poly p = *this;
    p *= unit.inverse();
    return {unit, p};
  }

  /// Coefficients (low to high) in the single variable `i`; throws if any
  /// other variable occurs.
  [[nodiscard]] std::vector<Rational> univariate_coefficients(std::size_t i) const {
    std::vector<Rational> out;
    for (const auto& [m, c] : terms_) {
      for (std::size_t j = 0; j < m.size(); ++j)
        if (j != i && m[j]) throw std::invalid_argument("Poly: not univariate");
      std::size_t e = i < m.size() ? m[i] : 0;
      if (out.size() <= e) out.resize(e + 1, Rational(0));
      out[e] += c;
    }
    return out;
  }

  /// Human-readable form. Variable names come from `names`; missing names
  /// print as x0, x1, ...
  [[nodiscard]] std::string str(const std::vector<std::string>& names = {}) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
      bool has_var = false;
      for (auto e : m)
        if (e) has_var = true;
      Rational a = c.abs();
      if (first) {
        if (c.sign() < 0) os << "-";
      } else {
        os << (c.sign() < 0 ? " - " : " + ");
      }
      first = false;
      bool need_star = false;
      if (!has_var || !a.is_one()) {
        os << a.str();
        need_star = true;
      }
      for (std::size_t i = 0; i < m.size(); ++i) {
        if (!m[i]) continue;
        if (need_star) os << "*";
        os << (i < names.size() ? names[i] : "x" + std::to_string(i));
        if (m[i] > 1) os << "^" << m[i];
        need_star = true;
      }
    }
    return os.str();
  }

  /// Parses sums of products like "2/3*t^2*u - 5 + u", against `names`.
  /// A leading '$' on variable names is accepted and ignored.
  static Poly parse(std::string_view text, const std::vector<std::string>& names) {
    Parser p{text, names, 0};
    Poly r = p.expr();
    p.skip_ws();
    if (p.pos != text.size())
      throw std::invalid_argument("malformed polynomial '" + std::string(text) + "'");
    return r;
  }

 private:
  struct Parser {
    std::string_view s;
    const std::vector<std::string>& names;
    std::size_t pos;

    void skip_ws() {
      while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    [[noreturn]] void fail() const {
      throw std::invalid_argument("malformed polynomial '" + std::string(s) + "'");
    }
    Poly expr() {
      Poly acc(Rational(0), names.size());
      skip_ws();
      bool negate = false;
      if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) {
        negate = s[pos] == '-';
        ++pos;
      }
      for (;;) {
        Poly t = term();
        if (negate) acc -= t; else acc += t;
        skip_ws();
        if (pos >= s.size() || (s[pos] != '+' && s[pos] != '-')) break;
        negate = s[pos] == '-';
        ++pos;
      }
      return acc;
    }
    Poly term() {
      Poly acc(Rational(1), names.size());
      for (;;) {
        acc *= factor();
        skip_ws();
        if (pos < s.size() && s[pos] == '*') {
          ++pos;
          continue;
        }
        break;
      }
      return acc;
    }
    Poly factor() {
      skip_ws();
      if (pos >= s.size()) fail();
      Poly base;
      if (s[pos] == '(') {
        ++pos;
        base = expr();
        skip_ws();
        if (pos >= s.size() || s[pos] != ')') fail();
        ++pos;
      } else if (std::isdigit(static_cast<unsigned char>(s[pos]))) {
        std::size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos < s.size() && s[pos] == '/') {
          ++pos;
          std::size_t ds = pos;
          while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
          if (ds == pos) fail();
        }
        if (pos < s.size() && (s[pos] == '.' || s[pos] == 'e' || s[pos] == 'E')) fail();
        base = Poly(Rational::parse(s.substr(start, pos - start)), names.size());
      } else {
        if (s[pos] == '$') ++pos;
        std::size_t start = pos;
        while (pos < s.size() &&
               (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
          ++pos;
        if (start == pos) fail();
        std::string_view name = s.substr(start, pos - start);
        auto it = std::find(names.begin(), names.end(), name);
        if (it == names.end())
          throw std::invalid_argument("undeclared parameter '" + std::string(name) + "'");
        base = Poly::var(static_cast<std::size_t>(it - names.begin()), names.size());
      }
      skip_ws();
      if (pos < s.size() && s[pos] == '^') {
        ++pos;
        skip_ws();
        std::size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (start == pos) fail();
        base = base.pow(static_cast<unsigned>(std::stoul(std::string(s.substr(start, pos - start)))));
      }
      return base;
    }
  };

  static Monomial padded_to(const Monomial& m, std::size_t n) {
    Monomial r = m;
    r.resize(n, 0);
    return r;
  }
  [[nodiscard]] Monomial padded(const Monomial& m) const { return padded_to(m, nvars_); }

  void widen(std::size_t n) {
    if (n <= nvars_) return;
    Terms t;
    for (auto& [m, c] : terms_) t.emplace(padded_to(m, n), c);
    terms_ = std::move(t);
    nvars_ = n;
  }

  void add_term(Monomial m, const Rational& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(std::move(m), c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  std::size_t nvars_ = 0;
  Terms terms_;
};

}  // namespace invform
