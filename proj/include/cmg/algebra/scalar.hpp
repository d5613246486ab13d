#pragma once

// Scalar fields. Exact mode works over the Gaussian rationals Q(i); numeric
// mode over complex doubles with a process-wide comparison tolerance.

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <ostream>
#include <string>

namespace cmg {

using Cplx = std::complex<double>;

class GaussQ {
 public:
  GaussQ() = default;
  GaussQ(long v) : re_(v) {}  // NOLINT: implicit integer embedding is intended
  GaussQ(mpq_class re, mpq_class im = 0) : re_(std::move(re)), im_(std::move(im)) {
    re_.canonicalize();
    im_.canonicalize();
  }

  static GaussQ rational(long num, long den) { return GaussQ(mpq_class(num, den)); }
  static GaussQ imag_unit() { return GaussQ(0, 1); }

  const mpq_class& re() const { return re_; }
  const mpq_class& im() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }

  GaussQ conj() const { return GaussQ(re_, -im_); }
  mpq_class norm2() const { return re_ * re_ + im_ * im_; }

  GaussQ operator-() const { return GaussQ(-re_, -im_); }

  GaussQ& operator+=(const GaussQ& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }
  GaussQ& operator-=(const GaussQ& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
  }
  GaussQ& operator*=(const GaussQ& o) {
    if (is_real() && o.is_real()) {
      re_ *= o.re_;
      return *this;
    }
    mpq_class r = re_ * o.re_ - im_ * o.im_;
    mpq_class i = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(r);
    im_ = std::move(i);
    return *this;
  }
  GaussQ& operator/=(const GaussQ& o) {
    if (o.is_real()) {
      re_ /= o.re_;
      im_ /= o.re_;
      return *this;
    }
    const mpq_class d = o.norm2();
    mpq_class r = (re_ * o.re_ + im_ * o.im_) / d;
    mpq_class i = (im_ * o.re_ - re_ * o.im_) / d;
    re_ = std::move(r);
    im_ = std::move(i);
    return *this;
  }

  friend GaussQ operator+(GaussQ a, const GaussQ& b) { return a += b; }
  friend GaussQ operator-(GaussQ a, const GaussQ& b) { return a -= b; }
  friend GaussQ operator*(GaussQ a, const GaussQ& b) { return a *= b; }
  friend GaussQ operator/(GaussQ a, const GaussQ& b) { return a /= b; }
  friend bool operator==(const GaussQ& a, const GaussQ& b) { return a.re_ == b.re_ && a.im_ == b.im_; }

  Cplx to_complex() const { return {re_.get_d(), im_.get_d()}; }

  std::string str() const {
    if (is_real()) return re_.get_str();
    std::string s = sgn(re_) == 0 ? std::string() : re_.get_str();
    if (sgn(im_) >= 0 && !s.empty()) s += "+";
    return s + im_.get_str() + "i";
  }

  friend std::ostream& operator<<(std::ostream& os, const GaussQ& a) { return os << a.str(); }

 private:
  mpq_class re_{0};
  mpq_class im_{0};
};

/// Comparison tolerance for numeric mode. Exact mode ignores it.
inline double& numeric_tolerance() {
  static double eps = 1e-9;
  return eps;
}

inline bool is_zero(const GaussQ& a) { return a.is_zero(); }
inline bool is_zero(const Cplx& a) { return std::abs(a) <= numeric_tolerance(); }

inline bool scalar_equal(const GaussQ& a, const GaussQ& b) { return a == b; }
inline bool scalar_equal(const Cplx& a, const Cplx& b) {
  const double scale = std::max({1.0, std::abs(a), std::abs(b)});
  return std::abs(a - b) <= numeric_tolerance() * scale;
}

inline Cplx to_complex(const GaussQ& a) { return a.to_complex(); }
inline Cplx to_complex(const Cplx& a) { return a; }

inline std::string scalar_str(const GaussQ& a) { return a.str(); }
inline std::string scalar_str(const Cplx& a) {
  return "(" + std::to_string(a.real()) + "," + std::to_string(a.imag()) + ")";
}

/// Lexicographic (Re, Im) order used to fix the permutation gauge.
inline bool lex_less(const GaussQ& a, const GaussQ& b) {
  if (a.re() != b.re()) return a.re() < b.re();
  return a.im() < b.im();
}
inline bool lex_less(const Cplx& a, const Cplx& b) {
  const double eps = numeric_tolerance();
  if (std::abs(a.real() - b.real()) > eps) return a.real() < b.real();
  return a.imag() < b.imag() - eps;
}

template <class F>
struct ScalarTraits;

template <>
struct ScalarTraits<GaussQ> {
  static constexpr bool exact = true;
  static constexpr const char* mode = "exact";
  static GaussQ from_rational(long num, long den) { return GaussQ::rational(num, den); }
};

template <>
struct ScalarTraits<Cplx> {
  static constexpr bool exact = false;
  static constexpr const char* mode = "numeric";
  static Cplx from_rational(long num, long den) { return {double(num) / double(den), 0.0}; }
};

template <class F>
concept Scalar = requires(const F& a, const F& b) {
  { a + b } -> std::convertible_to<F>;
  { a * b } -> std::convertible_to<F>;
  { a / b } -> std::convertible_to<F>;
  { is_zero(a) } -> std::convertible_to<bool>;
  { scalar_equal(a, b) } -> std::convertible_to<bool>;
  ScalarTraits<F>::exact;
};

template <Scalar F>
F from_int(long v) {
  return ScalarTraits<F>::from_rational(v, 1);
}

/// Preference used by elimination: exact fields take any nonzero pivot,
/// numeric mode does partial pivoting on magnitude.
inline bool better_pivot(const GaussQ& cand, const GaussQ& cur) { return cur.is_zero() && !cand.is_zero(); }
inline bool better_pivot(const Cplx& cand, const Cplx& cur) { return std::abs(cand) > std::abs(cur); }

}  // namespace cmg
