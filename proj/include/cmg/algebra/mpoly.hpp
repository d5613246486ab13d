#pragma once

#include <map>
#include <string>
#include <vector>

#include "cmg/algebra/scalar.hpp"

namespace cmg {

/// Sparse polynomial in a fixed number of variables, keyed by exponent vectors.
template <Scalar F>
class MPoly {
 public:
  using Exponents = std::vector<int>;

  MPoly() = default;
  MPoly(long c) : MPoly(from_int<F>(c)) {}  // NOLINT: integer literals in generic formulas
  MPoly(const F& c) {  // NOLINT
    if (!cmg::is_zero(c)) terms_[Exponents{}] = c;
  }

  static MPoly variable(std::size_t i) {
    MPoly p;
    Exponents e(i + 1, 0);
    e[i] = 1;
    p.terms_[e] = from_int<F>(1);
    return p;
  }

  const std::map<Exponents, F>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  friend MPoly operator+(const MPoly& a, const MPoly& b) {
    MPoly s = a;
    for (const auto& [e, c] : b.terms_) s.add(e, c);
    return s;
  }
  friend MPoly operator-(const MPoly& a, const MPoly& b) {
    MPoly s = a;
    for (const auto& [e, c] : b.terms_) s.add(e, -c);
    return s;
  }
  friend MPoly operator*(const MPoly& a, const MPoly& b) {
    MPoly s;
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        Exponents e(std::max(ea.size(), eb.size()), 0);
        for (std::size_t i = 0; i < ea.size(); ++i) e[i] += ea[i];
        for (std::size_t i = 0; i < eb.size(); ++i) e[i] += eb[i];
        s.add(trim(e), ca * cb);
      }
    return s;
  }
  friend bool operator==(const MPoly& a, const MPoly& b) { return (a - b).is_zero(); }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (const auto& [e, c] : terms_) {
      if (!s.empty()) s += " + ";
      s += "(" + scalar_str(c) + ")";
      for (std::size_t i = 0; i < e.size(); ++i)
        if (e[i]) s += "*t" + std::to_string(i + 1) + (e[i] > 1 ? "^" + std::to_string(e[i]) : "");
    }
    return s;
  }

 private:
  static Exponents trim(Exponents e) {
    while (!e.empty() && e.back() == 0) e.pop_back();
    return e;
  }
  void add(const Exponents& e, const F& c) {
    const Exponents k = trim(e);
    auto it = terms_.find(k);
    if (it == terms_.end()) {
      if (!cmg::is_zero(c)) terms_[k] = c;
      return;
    }
    it->second += c;
    if (cmg::is_zero(it->second)) terms_.erase(it);
  }

  std::map<Exponents, F> terms_;
};

}  // namespace cmg
