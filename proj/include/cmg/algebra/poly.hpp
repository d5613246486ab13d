#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "cmg/algebra/scalar.hpp"
#include "cmg/errors.hpp"

namespace cmg {

/// Univariate polynomial, coefficients stored low degree first and trimmed so
/// the leading coefficient is nonzero. The zero polynomial has no coefficients.
template <Scalar F>
class Poly {
 public:
  using scalar_type = F;

  Poly() = default;
  Poly(const F& c) : c_{c} { trim(); }  // NOLINT: constants embed implicitly
  Poly(std::initializer_list<F> coeffs) : c_(coeffs) { trim(); }
  explicit Poly(std::vector<F> coeffs) : c_(std::move(coeffs)) { trim(); }

  static Poly monomial(std::size_t k, const F& c = from_int<F>(1)) {
    std::vector<F> v(k + 1);
    v[k] = c;
    return Poly(std::move(v));
  }
  static Poly variable() { return monomial(1); }
  /// (z - a)
  static Poly linear_root(const F& a) { return Poly({-a, from_int<F>(1)}); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_constant() const { return c_.size() <= 1; }
  const std::vector<F>& coeffs() const { return c_; }
  F coeff(std::size_t k) const { return k < c_.size() ? c_[k] : F{}; }
  const F& lead() const { return c_.back(); }

  F operator()(const F& z) const {
    F acc{};
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + *it;
    return acc;
  }

  Poly derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<F> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * from_int<F>(static_cast<long>(k));
    return Poly(std::move(d));
  }

  /// Coefficients of p(a + t) as a polynomial in t.
  Poly taylor_shift(const F& a) const {
    std::vector<F> b = c_;
    const std::size_t n = b.size();
    for (std::size_t i = 0; i + 1 < n; ++i)
      for (std::size_t j = n - 1; j > i; --j) b[j - 1] += a * b[j];
    return Poly(std::move(b));
  }

  /// p(q(z))
  Poly compose(const Poly& q) const {
    Poly acc;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * q + Poly(*it);
    return acc;
  }

  Poly monic() const {
    if (is_zero()) return {};
    const F inv = from_int<F>(1) / lead();
    return *this * inv;
  }

  Poly operator-() const {
    Poly r = *this;
    for (auto& a : r.c_) a = -a;
    return r;
  }
  Poly& operator+=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
    trim();
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
    trim();
    return *this;
  }
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<F> r(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (cmg::is_zero(a.c_[i])) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    }
    return Poly(std::move(r));
  }
  friend Poly operator*(Poly a, const F& s) {
    for (auto& x : a.c_) x *= s;
    a.trim();
    return a;
  }
  friend Poly operator*(const F& s, Poly a) { return std::move(a) * s; }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }

  friend bool operator==(const Poly& a, const Poly& b) {
    if (a.c_.size() != b.c_.size()) return false;
    for (std::size_t k = 0; k < a.c_.size(); ++k)
      if (!scalar_equal(a.c_[k], b.c_[k])) return false;
    return true;
  }

  /// Euclidean division: a = q*b + r with deg r < deg b.
  friend std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
    if (b.is_zero()) throw Error(ErrorKind::InvalidArgument, "polynomial division by zero");
    if (a.degree() < b.degree()) return {Poly{}, a};
    std::vector<F> rem = a.c_;
    std::vector<F> quo(a.c_.size() - b.c_.size() + 1);
    const F inv = from_int<F>(1) / b.lead();
    for (int k = static_cast<int>(quo.size()) - 1; k >= 0; --k) {
      const F q = rem[k + b.c_.size() - 1] * inv;
      quo[k] = q;
      if (cmg::is_zero(q)) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) rem[k + j] -= q * b.c_[j];
    }
    rem.resize(b.c_.size() - 1);
    return {Poly(std::move(quo)), Poly(std::move(rem))};
  }

  /// Exact division; the remainder is assumed zero.
  friend Poly exact_div(const Poly& a, const Poly& b) { return divmod(a, b).first; }

  std::string str(char var = 'z') const {
    if (is_zero()) return "0";
    std::string s;
    for (std::size_t k = 0; k < c_.size(); ++k) {
      if (cmg::is_zero(c_[k])) continue;
      if (!s.empty()) s += " + ";
      s += "(" + scalar_str(c_[k]) + ")";
      if (k >= 1) s += std::string("*") + var;
      if (k >= 2) s += "^" + std::to_string(k);
    }
    return s;
  }

 private:
  void trim() {
    while (!c_.empty() && cmg::is_zero(c_.back())) c_.pop_back();
  }

  std::vector<F> c_;
};

template <Scalar F>
bool is_zero(const Poly<F>& p) {
  return p.is_zero();
}

/// Monic gcd. Numeric mode has no stable gcd; it reports 1 so that rational
/// functions stay unreduced rather than being corrupted by roundoff.
template <Scalar F>
Poly<F> gcd(Poly<F> a, Poly<F> b) {
  if constexpr (!ScalarTraits<F>::exact) {
    if (a.is_zero()) return b.monic();
    if (b.is_zero()) return a.monic();
    return Poly<F>(from_int<F>(1));
  } else {
    while (!b.is_zero()) {
      Poly<F> r = divmod(a, b).second;
      a = std::move(b);
      b = std::move(r);
    }
    return a.monic();
  }
}

/// Power-series division: first `terms` coefficients of num/den, den(0) != 0.
template <Scalar F>
std::vector<F> series_divide(const Poly<F>& num, const Poly<F>& den, std::size_t terms) {
  std::vector<F> out(terms);
  const F inv = from_int<F>(1) / den.coeff(0);
  for (std::size_t k = 0; k < terms; ++k) {
    F acc = num.coeff(k);
    const std::size_t top = std::min<std::size_t>(k, den.coeffs().size() - 1);
    for (std::size_t j = 1; j <= top; ++j) acc -= den.coeffs()[j] * out[k - j];
    out[k] = acc * inv;
  }
  return out;
}

}  // namespace cmg
