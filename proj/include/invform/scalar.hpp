#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "invform/poly.hpp"
#include "invform/rational.hpp"

namespace invform {

/// Quotient of two polynomials. The denominator is kept with leading
/// coefficient 1; cancellation happens only when one side divides the other,
/// so equality is decided by cross-multiplication.
class RatFunc {
 public:
  RatFunc() : num_(0), den_(1) {}
  RatFunc(Poly num) : num_(std::move(num)), den_(1) {}  // NOLINT
  RatFunc(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw std::domain_error("RatFunc: zero denominator");
    normalize();
  }
  RatFunc(const Rational& c) : num_(c), den_(1) {}  // NOLINT

  [[nodiscard]] const Poly& num() const { return num_; }
  [[nodiscard]] const Poly& den() const { return den_; }
  [[nodiscard]] bool is_zero() const { return num_.is_zero(); }
  [[nodiscard]] bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
  [[nodiscard]] Rational constant_value() const {
    return num_.constant_value() / den_.constant_value();
  }

  RatFunc operator-() const { return RatFunc(-num_, den_, Raw{}); }
  friend RatFunc operator+(const RatFunc& a, const RatFunc& b) {
    if (a.den_ == b.den_) return RatFunc(a.num_ + b.num_, a.den_);
    return RatFunc(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend RatFunc operator-(const RatFunc& a, const RatFunc& b) { return a + (-b); }
  friend RatFunc operator*(const RatFunc& a, const RatFunc& b) {
    return RatFunc(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend RatFunc operator/(const RatFunc& a, const RatFunc& b) {
    if (b.is_zero()) throw std::domain_error("RatFunc: division by zero");
    return RatFunc(a.num_ * b.den_, a.den_ * b.num_);
  }
  RatFunc& operator+=(const RatFunc& o) { return *this = *this + o; }
  RatFunc& operator-=(const RatFunc& o) { return *this = *this - o; }
  RatFunc& operator*=(const RatFunc& o) { return *this = *this * o; }
  RatFunc& operator/=(const RatFunc& o) { return *this = *this / o; }

  friend bool operator==(const RatFunc& a, const RatFunc& b) {
    return a.num_ * b.den_ == b.num_ * a.den_;
  }

  /// Value at a rational point; throws if the denominator vanishes there.
  [[nodiscard]] Rational evaluate(std::span<const Rational> point) const {
    Rational d = den_.evaluate(point);
    if (d.is_zero()) throw std::domain_error("RatFunc: pole at evaluation point");
    return num_.evaluate(point) / d;
  }

  [[nodiscard]] std::string str(const std::vector<std::string>& names = {}) const {
    if (den_.is_constant() && den_.constant_value().is_one()) return num_.str(names);
    auto wrap = [&](const Poly& p) {
      std::string s = p.str(names);
      return p.terms().size() > 1 ? "(" + s + ")" : s;
    };
    return wrap(num_) + "/" + wrap(den_);
  }

 private:
  struct Raw {};
  RatFunc(Poly n, Poly d, Raw) : num_(std::move(n)), den_(std::move(d)) {}

  void normalize() {
    if (num_.is_zero()) {
      den_ = Poly(1);
      return;
    }
    Rational lc = den_.leading_coefficient();
    if (!lc.is_one()) {
      Rational inv = lc.inverse();
      num_ *= inv;
      den_ *= inv;
    }
    if (den_.is_constant()) return;
    cancel_monomial();
    if (den_.is_constant()) return;
    if (auto q = num_.divide_exact(den_)) {
      num_ = std::move(*q);
      den_ = Poly(1);
    }
  }

  /// Divides out the largest monomial dividing both sides.
  void cancel_monomial() {
    std::size_t n = std::max(num_.nvars(), den_.nvars());
    Monomial common;
    bool first = true;
    for (const Poly* p : {&num_, &den_})
      for (const auto& [m, c] : p->terms()) {
        Monomial e = m;
        e.resize(n, 0);
        if (first) {
          common = e;
          first = false;
        } else {
          for (std::size_t i = 0; i < n; ++i) common[i] = std::min(common[i], e[i]);
        }
      }
    bool any = false;
    for (auto x : common) any = any || x != 0;
    if (!any) return;
    auto shift = [&](const Poly& p) {
      Poly r(Rational(0), n);
      for (const auto& [m, c] : p.terms()) {
        Monomial e = m;
        e.resize(n, 0);
        for (std::size_t i = 0; i < n; ++i) e[i] -= common[i];
        r += Poly::monomial(e, c);
      }
      return r;
    };
    num_ = shift(num_);
    den_ = shift(den_);
  }

  Poly num_;
  Poly den_;
};

/// Exact scalar: a rational number or a rational function in the metric
/// parameters. Arithmetic stays in the rational branch whenever both sides are
/// rational, and rational functions with constant value collapse back.
class Scalar {
 public:
  Scalar() : v_(Rational(0)) {}
  Scalar(const Rational& r) : v_(r) {}  // NOLINT
  Scalar(long r) : v_(Rational(r)) {}   // NOLINT
  Scalar(int r) : v_(Rational(r)) {}    // NOLINT
  Scalar(const Poly& p) : Scalar(RatFunc(p)) {}  // NOLINT
  Scalar(const RatFunc& f) {  // NOLINT
    if (f.is_constant()) v_ = f.constant_value();
    else v_ = f;
  }

  [[nodiscard]] bool is_rational() const { return std::holds_alternative<Rational>(v_); }
  [[nodiscard]] const Rational& rational() const {
    if (!is_rational()) throw std::logic_error("Scalar: not rational");
    return std::get<Rational>(v_);
  }
  [[nodiscard]] RatFunc ratfunc() const {
    if (is_rational()) return RatFunc(std::get<Rational>(v_));
    return std::get<RatFunc>(v_);
  }
  [[nodiscard]] bool is_zero() const {
    return is_rational() ? std::get<Rational>(v_).is_zero() : std::get<RatFunc>(v_).is_zero();
  }

  Scalar operator-() const {
    if (is_rational()) return -rational();
    return -std::get<RatFunc>(v_);
  }
  friend Scalar operator+(const Scalar& a, const Scalar& b) {
    if (a.is_rational() && b.is_rational()) return a.rational() + b.rational();
    return a.ratfunc() + b.ratfunc();
  }
  friend Scalar operator-(const Scalar& a, const Scalar& b) {
    if (a.is_rational() && b.is_rational()) return a.rational() - b.rational();
    return a.ratfunc() - b.ratfunc();
  }
  friend Scalar operator*(const Scalar& a, const Scalar& b) {
    if (a.is_rational() && b.is_rational()) return a.rational() * b.rational();
    if (a.is_zero() || b.is_zero()) return Scalar(0);
    return a.ratfunc() * b.ratfunc();
  }
  friend Scalar operator/(const Scalar& a, const Scalar& b) {
    if (a.is_rational() && b.is_rational()) return a.rational() / b.rational();
    return a.ratfunc() / b.ratfunc();
  }
  Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
  Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
  Scalar& operator/=(const Scalar& o) { return *this = *this / o; }

  friend bool operator==(const Scalar& a, const Scalar& b) {
    if (a.is_rational() && b.is_rational()) return a.rational() == b.rational();
    return a.ratfunc() == b.ratfunc();
  }

  [[nodiscard]] Rational evaluate(std::span<const Rational> point) const {
    if (is_rational()) return rational();
    return std::get<RatFunc>(v_).evaluate(point);
  }

  [[nodiscard]] std::string str(const std::vector<std::string>& names = {}) const {
    if (is_rational()) return rational().str();
    return std::get<RatFunc>(v_).str(names);
  }

 private:
  std::variant<Rational, RatFunc> v_;
};

}  // namespace invform
