#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "invform/poly.hpp"
#include "invform/rational.hpp"

namespace invform {

/// Dense univariate polynomial, coefficients from low to high degree.
class UPoly {
 public:
  UPoly() = default;
  explicit UPoly(std::vector<Rational> c) : c_(std::move(c)) { trim(); }

  [[nodiscard]] const std::vector<Rational>& coeffs() const { return c_; }
  [[nodiscard]] bool is_zero() const { return c_.empty(); }
  [[nodiscard]] int degree() const { return static_cast<int>(c_.size()) - 1; }
  [[nodiscard]] const Rational& lead() const { return c_.back(); }

  [[nodiscard]] Rational operator()(const Rational& x) const {
    Rational acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  [[nodiscard]] UPoly derivative() const {
    std::vector<Rational> d;
    for (std::size_t i = 1; i < c_.size(); ++i) d.push_back(c_[i] * Rational(static_cast<long>(i)));
    return UPoly(std::move(d));
  }

  friend UPoly operator-(const UPoly& a) {
    UPoly r = a;
    for (auto& x : r.c_) x = -x;
    return r;
  }

  /// Quotient and remainder of polynomial long division.
  friend std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b) {
    if (b.is_zero()) throw std::domain_error("UPoly: division by zero");
    std::vector<Rational> r = a.c_;
    int db = b.degree();
    std::vector<Rational> q(std::max(0, a.degree() - db + 1), Rational(0));
    for (int i = a.degree(); i >= db; --i) {
      if (r[i].is_zero()) continue;
      Rational f = r[i] / b.lead();
      q[i - db] = f;
      for (int j = 0; j <= db; ++j) r[i - db + j] -= f * b.c_[j];
    }
    return {UPoly(std::move(q)), UPoly(std::move(r))};
  }

  friend UPoly gcd(UPoly a, UPoly b) {
    while (!b.is_zero()) {
      UPoly r = divmod(a, b).second;
      a = std::move(b);
      b = std::move(r);
    }
    if (!a.is_zero()) {
      Rational l = a.lead();
      for (auto& x : a.c_) x /= l;
    }
    return a;
  }

  /// Number of sign changes of the sequence evaluated at x (zeros skipped).
  static int sign_changes(const std::vector<UPoly>& seq, const Rational& x) {
    int changes = 0, last = 0;
    for (const auto& p : seq) {
      int s = p(x).sign();
      if (s == 0) continue;
      if (last != 0 && s != last) ++changes;
      last = s;
    }
    return changes;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }
  std::vector<Rational> c_;
};

/// Isolating interval for a single real root. When `exact` is set the root is
/// the rational `lo == hi`; otherwise the root lies strictly inside (lo, hi).
struct RootInterval {
  Rational lo;
  Rational hi;
  bool exact = false;

  friend bool operator==(const RootInterval&, const RootInterval&) = default;
};

/// Sturm sequence of a square-free polynomial.
inline std::vector<UPoly> sturm_sequence(const UPoly& p) {
  std::vector<UPoly> seq{p, p.derivative()};
  while (!seq.back().is_zero()) {
    UPoly r = divmod(seq[seq.size() - 2], seq.back()).second;
    if (r.is_zero()) break;
    seq.push_back(-r);
  }
  return seq;
}

namespace detail {

inline std::vector<mpz_class> divisors(mpz_class n) {
  n = abs(n);
  std::vector<mpz_class> small, large;
  for (mpz_class d = 1; d * d <= n; ++d) {
    if (n % d == 0) {
      small.push_back(d);
      if (d * d != n) large.push_back(n / d);
    }
  }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

/// Rational roots of an integer-coefficient polynomial with nonzero constant
/// term, via the rational root theorem. Skipped (empty) when the end
/// coefficients are too large to enumerate divisors of.
inline std::vector<Rational> rational_roots(const UPoly& p) {
  std::vector<Rational> out;
  mpz_class l = 1;
  for (const auto& c : p.coeffs()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.den().get_mpz_t());
  mpz_class a0 = (p.coeffs().front() * Rational(l)).num();
  mpz_class an = (p.lead() * Rational(l)).num();
  const mpz_class limit("1000000000000");
  if (abs(a0) > limit || abs(an) > limit) return out;
  for (const auto& num : divisors(a0)) {
    for (const auto& den : divisors(an)) {
      for (int s : {-1, 1}) {
        Rational r(mpz_class(num * s), den);
        if (r.den() != den) continue;  // not in lowest terms; seen already
        if (p(r).is_zero()) out.push_back(r);
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace detail

/// Isolates all real roots of a nonzero univariate polynomial.
///
/// Rational roots are reported exactly; the remaining roots get disjoint open
/// intervals with rational endpoints, found by Sturm-sequence bisection. The
/// result is sorted by position.
inline std::vector<RootInterval> real_roots(const UPoly& input) {
  if (input.is_zero()) throw std::invalid_argument("real_roots: zero polynomial");
  std::vector<RootInterval> out;

  // Strip the root at zero.
  std::vector<Rational> c = input.coeffs();
  std::size_t z = 0;
  while (z < c.size() && c[z].is_zero()) ++z;
  if (z > 0) {
    out.push_back({Rational(0), Rational(0), true});
    c.erase(c.begin(), c.begin() + static_cast<long>(z));
  }
  UPoly p(c);
  if (p.degree() <= 0) return out;

  UPoly sq = divmod(p, gcd(p, p.derivative())).first;
  std::vector<Rational> rat = detail::rational_roots(sq);
  for (const auto& r : rat) {
    out.push_back({r, r, true});
    sq = divmod(sq, UPoly({-r, Rational(1)})).first;
  }

  if (sq.degree() > 0) {
    auto seq = sturm_sequence(sq);
    Rational bound(1);
    for (const auto& a : sq.coeffs()) bound = std::max(bound, (a / sq.lead()).abs() + Rational(1));
    struct Job { Rational lo, hi; };
    std::vector<Job> stack{{-bound, bound}};
    while (!stack.empty()) {
      Job j = stack.back();
      stack.pop_back();
      int n = UPoly::sign_changes(seq, j.lo) - UPoly::sign_changes(seq, j.hi);
      if (n == 0) continue;
      if (n == 1) {
        if (sq(j.hi).is_zero()) {
          out.push_back({j.hi, j.hi, true});
          continue;
        }
        // Shrink until no rational root of the input lies in [lo, hi].
        auto clashes = [&] {
          for (const auto& r : rat)
            if (j.lo <= r && r <= j.hi) return true;
          return j.lo <= Rational(0) && Rational(0) <= j.hi && z > 0;
        };
        while (clashes()) {
          Rational mid = (j.lo + j.hi) / Rational(2);
          if (UPoly::sign_changes(seq, j.lo) - UPoly::sign_changes(seq, mid) == 1) j.hi = mid;
          else j.lo = mid;
        }
        out.push_back({j.lo, j.hi, false});
        continue;
      }
      Rational mid = (j.lo + j.hi) / Rational(2);
      stack.push_back({mid, j.hi});
      stack.push_back({j.lo, mid});
    }
  }
  std::sort(out.begin(), out.end(), [](const RootInterval& a, const RootInterval& b) {
    return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
  });
  return out;
}

/// Root isolation for a `Poly` that involves at most one variable.
/// Multivariate input is unsupported and throws std::invalid_argument.
inline std::vector<RootInterval> real_roots(const Poly& p) {
  if (p.is_zero()) throw std::invalid_argument("real_roots: zero polynomial");
  auto used = p.variables_used();
  if (used.size() > 1) throw std::invalid_argument("real_roots: multivariate polynomial");
  if (used.empty()) return {};
  return real_roots(UPoly(p.univariate_coefficients(used[0])));
}

/// Midpoint-refines an irrational root interval until its width is below `width`.
inline RootInterval refine(const UPoly& p, RootInterval r, const Rational& width) {
  if (r.exact) return r;
  while (r.hi - r.lo > width) {
    Rational mid = (r.lo + r.hi) / Rational(2);
    Rational v = p(mid);
    if (v.is_zero()) return {mid, mid, true};
    if ((p(r.lo).sign() < 0) == (v.sign() < 0)) r.lo = mid;
    else r.hi = mid;
  }
  return r;
}

}  // namespace invform
