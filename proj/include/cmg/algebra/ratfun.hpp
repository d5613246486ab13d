#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "cmg/algebra/poly.hpp"

namespace cmg {

/// Element of F(z): numerator over a monic denominator, coprime in exact mode.
template <Scalar F>
class RatFun {
 public:
  using scalar_type = F;

  RatFun() : den_(from_int<F>(1)) {}
  RatFun(const F& c) : num_(c), den_(from_int<F>(1)) {}  // NOLINT
  RatFun(Poly<F> p) : num_(std::move(p)), den_(from_int<F>(1)) {}  // NOLINT
  RatFun(Poly<F> num, Poly<F> den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }

  static RatFun variable() { return RatFun(Poly<F>::variable()); }

  const Poly<F>& num() const { return num_; }
  const Poly<F>& den() const { return den_; }

  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.degree() == 0; }

  /// deg num - deg den; the zero function reports a very negative value.
  int valuation_at_infinity() const { return is_zero() ? -1000000 : den_.degree() - num_.degree(); }

  F operator()(const F& z) const {
    const F d = den_(z);
    if (cmg::is_zero(d)) throw Error(ErrorKind::InvalidArgument, "rational function evaluated at a pole");
    return num_(z) / d;
  }

  RatFun derivative() const {
    return RatFun(num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_);
  }

  /// Order of the pole at a (0 if regular there).
  int pole_order_at(const F& a) const {
    if (is_zero()) return 0;
    const Poly<F> d = den_.taylor_shift(a);
    int m = 0;
    while (m <= d.degree() && cmg::is_zero(d.coeff(m))) ++m;
    return m;
  }

  /// f(q(z)) for a polynomial q.
  RatFun compose(const Poly<F>& q) const { return RatFun(num_.compose(q), den_.compose(q)); }

  RatFun operator-() const {
    RatFun r = *this;
    r.num_ = -r.num_;
    return r;
  }

  friend RatFun operator+(const RatFun& a, const RatFun& b) {
    if (a.den_ == b.den_) return RatFun(a.num_ + b.num_, a.den_);
    if (b.is_polynomial()) return RatFun(a.num_ + b.num_ * a.den_, a.den_);
    if (a.is_polynomial()) return RatFun(b.num_ + a.num_ * b.den_, b.den_);
    return RatFun(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend RatFun operator-(const RatFun& a, const RatFun& b) { return a + (-b); }
  friend RatFun operator*(const RatFun& a, const RatFun& b) {
    if (a.is_zero() || b.is_zero()) return {};
    if (a.is_polynomial() && b.is_polynomial()) return RatFun(a.num_ * b.num_);
    // cross cancellation keeps intermediate degrees small
    const Poly<F> g1 = gcd(a.num_, b.den_);
    const Poly<F> g2 = gcd(b.num_, a.den_);
    RatFun r;
    r.num_ = exact_div(a.num_, g1) * exact_div(b.num_, g2);
    r.den_ = exact_div(a.den_, g2) * exact_div(b.den_, g1);
    r.make_monic();
    return r;
  }
  friend RatFun operator*(const RatFun& a, const F& s) {
    RatFun r = a;
    r.num_ = r.num_ * s;
    if (r.num_.is_zero()) r.den_ = Poly<F>(from_int<F>(1));
    return r;
  }
  friend RatFun operator/(const RatFun& a, const RatFun& b) {
    if (b.is_zero()) throw Error(ErrorKind::InvalidArgument, "rational division by zero");
    RatFun inv;
    inv.num_ = b.den_;
    inv.den_ = b.num_;
    inv.make_monic();
    return a * inv;
  }
  RatFun& operator+=(const RatFun& o) { return *this = *this + o; }
  RatFun& operator-=(const RatFun& o) { return *this = *this - o; }
  RatFun& operator*=(const RatFun& o) { return *this = *this * o; }

  friend bool operator==(const RatFun& a, const RatFun& b) {
    if constexpr (ScalarTraits<F>::exact) {
      return a.num_ == b.num_ && a.den_ == b.den_;
    } else {
      return (a.num_ * b.den_) == (b.num_ * a.den_);
    }
  }

  std::string str(char var = 'z') const {
    if (is_polynomial()) return num_.str(var);
    return "[" + num_.str(var) + "] / [" + den_.str(var) + "]";
  }

 private:
  void make_monic() {
    if (num_.is_zero()) {
      den_ = Poly<F>(from_int<F>(1));
      return;
    }
    const F l = den_.lead();
    if (!scalar_equal(l, from_int<F>(1))) {
      const F inv = from_int<F>(1) / l;
      num_ = num_ * inv;
      den_ = den_ * inv;
    }
  }
  void normalize() {
    if (den_.is_zero()) throw Error(ErrorKind::InvalidArgument, "zero denominator");
    if (num_.is_zero()) {
      den_ = Poly<F>(from_int<F>(1));
      return;
    }
    if (den_.degree() > 0) {
      const Poly<F> g = gcd(num_, den_);
      if (g.degree() > 0) {
        num_ = exact_div(num_, g);
        den_ = exact_div(den_, g);
      }
    }
    make_monic();
  }

  Poly<F> num_;
  Poly<F> den_;
};

template <Scalar F>
bool is_zero(const RatFun<F>& f) {
  return f.is_zero();
}

template <Scalar F>
bool better_pivot(const RatFun<F>& cand, const RatFun<F>& cur) {
  return cur.is_zero() && !cand.is_zero();
}

/// Laurent data of a width-r row of rational functions at a base point:
/// coeffs[k - k_min] is the row of (z - base)^k coefficients.
template <Scalar F>
struct LaurentJet {
  F base{};
  int k_min = 0;
  int k_max = 0;
  std::size_t width = 0;
  std::vector<std::vector<F>> coeffs;
  bool pole_overflow = false;  // a pole deeper than -k_min was present

  const std::vector<F>& at(int k) const { return coeffs.at(static_cast<std::size_t>(k - k_min)); }
};

/// Coefficients of (z - base)^k, k in [k_min, k_max], of a single function.
template <Scalar F>
std::vector<F> laurent_coefficients(const RatFun<F>& f, const F& base, int k_min, int k_max, bool* overflow = nullptr) {
  std::vector<F> out(static_cast<std::size_t>(k_max - k_min + 1));
  if (f.is_zero()) return out;
  const Poly<F> d = f.den().taylor_shift(base);
  int m = 0;
  while (cmg::is_zero(d.coeff(m))) ++m;
  std::vector<F> dc(d.coeffs().begin() + m, d.coeffs().end());
  const Poly<F> d1(std::move(dc));
  const Poly<F> n = f.num().taylor_shift(base);
  // f = t^{-m} n(t)/d1(t); series index j corresponds to order j - m
  const int top = std::max(k_max + m, k_min + m - 1);
  if (top < 0) return out;
  const std::vector<F> s = series_divide(n, d1, static_cast<std::size_t>(top + 1));
  for (int j = 0; j <= top; ++j) {
    const int k = j - m;
    if (k < k_min) {
      if (overflow && !cmg::is_zero(s[j])) *overflow = true;
      continue;
    }
    if (k <= k_max) out[static_cast<std::size_t>(k - k_min)] = s[j];
  }
  return out;
}

template <Scalar F>
LaurentJet<F> laurent_expand(const std::vector<RatFun<F>>& row, const F& base, int k_min, int k_max) {
  if (k_min > k_max) throw Error(ErrorKind::InvalidArgument, "empty Laurent window");
  LaurentJet<F> jet;
  jet.base = base;
  jet.k_min = k_min;
  jet.k_max = k_max;
  jet.width = row.size();
  jet.coeffs.assign(static_cast<std::size_t>(k_max - k_min + 1), std::vector<F>(row.size()));
  for (std::size_t a = 0; a < row.size(); ++a) {
    const std::vector<F> c = laurent_coefficients(row[a], base, k_min, k_max, &jet.pole_overflow);
    for (std::size_t k = 0; k < c.size(); ++k) jet.coeffs[k][a] = c[k];
  }
  return jet;
}

/// Expansion at z = infinity: map k -> coefficient of z^k for k in [k_min, k_max].
template <Scalar F>
std::map<int, F> expand_at_infinity(const RatFun<F>& f, int k_min, int k_max) {
  std::map<int, F> out;
  for (int k = k_min; k <= k_max; ++k) out[k] = F{};
  if (f.is_zero()) return out;
  // with t = 1/z: f = t^{dd - dn} nrev(t)/drev(t)
  std::vector<F> nr(f.num().coeffs().rbegin(), f.num().coeffs().rend());
  std::vector<F> dr(f.den().coeffs().rbegin(), f.den().coeffs().rend());
  const int shift = f.den().degree() - f.num().degree();
  const int top = -k_min - shift;
  if (top < 0) return out;
  const std::vector<F> s = series_divide(Poly<F>(nr), Poly<F>(dr), static_cast<std::size_t>(top + 1));
  for (int j = 0; j <= top; ++j) {
    const int k = -(j + shift);
    if (k >= k_min && k <= k_max) out[k] = s[j];
  }
  return out;
}

}  // namespace cmg
