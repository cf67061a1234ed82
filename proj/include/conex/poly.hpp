// Copyright 2026 The conex authors.
// Licensed under the Apache License, Version 2.0.
#pragma once

#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "conex/errors.hpp"
#include "conex/fp.hpp"
#include "conex/rational.hpp"

namespace conex {

inline bool prints_negative(const Rational& x) { return x.sign() < 0; }
template <class T>
bool prints_negative(const T&) {
  return false;
}

// Dense univariate polynomial over a field K in the variable named V.
// Coefficients are stored lowest degree first with no trailing zeros.
// `zero_` carries the coefficient context (modulus, extension data).
template <class K, char V = 'u'>
class Poly {
 public:
  Poly() = default;
  explicit Poly(const K& c) : zero_(c.zero()) {
    if (!c.is_zero()) c_.push_back(c);
  }
  Poly(std::vector<K> coeffs, const K& zero) : c_(std::move(coeffs)), zero_(zero) { trim(); }

  static Poly monomial(const K& c, int d) {
    Poly p(c.zero());
    if (!c.is_zero()) {
      p.c_.assign(d + 1, c.zero());
      p.c_[d] = c;
    }
    return p;
  }
  // The variable itself.
  static Poly var(const K& sample) { return monomial(sample.one(), 1); }

  int deg() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_one() const { return c_.size() == 1 && c_[0].is_one(); }
  bool is_constant() const { return c_.size() <= 1; }
  const K& zero_elem() const { return zero_; }
  K coeff(int i) const { return (i >= 0 && i < static_cast<int>(c_.size())) ? c_[i] : zero_; }
  const std::vector<K>& coeffs() const { return c_; }
  const K& lc() const {
    if (c_.empty()) throw Error(Errc::ZeroInput, "leading coefficient of zero polynomial");
    return c_.back();
  }
  // Multiplicity of the variable as a factor; requires nonzero.
  int ord0() const {
    if (c_.empty()) throw Error(Errc::ZeroInput, "order of zero polynomial");
    int k = 0;
    while (c_[k].is_zero()) ++k;
    return k;
  }
  // True iff the polynomial is c*V^k for some k.
  bool is_monomial() const { return !c_.empty() && ord0() == deg(); }

  Poly zero() const { return Poly(zero_); }
  Poly one() const { return Poly(zero_.one()); }

  // Multiply by V^k; a negative k requires divisibility.
  Poly shift(int k) const {
    if (c_.empty() || k == 0) return *this;
    Poly r(zero_);
    if (k > 0) {
      r.c_.assign(k, zero_);
      r.c_.insert(r.c_.end(), c_.begin(), c_.end());
    } else {
      if (ord0() < -k) throw Error(Errc::InvalidArgument, "negative shift of non-divisible polynomial");
      r.c_.assign(c_.begin() + (-k), c_.end());
    }
    return r;
  }

  Poly operator-() const {
    Poly r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
  }
  Poly& operator+=(const Poly& o) {
    adopt(o);
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), zero_);
    for (size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    trim();
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    adopt(o);
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), zero_);
    for (size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    trim();
    return *this;
  }
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.c_.empty() || b.c_.empty()) return Poly(a.c_.empty() ? b.zero_ : a.zero_);
    std::vector<K> r(a.c_.size() + b.c_.size() - 1, b.zero_.zero());
    for (size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i].is_zero()) continue;
      for (size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    }
    return Poly(std::move(r), a.c_[0].zero());
  }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }
  Poly scaled(const K& s) const {
    if (s.is_zero()) return Poly(s.zero());
    Poly r = *this;
    for (auto& x : r.c_) x *= s;
    r.trim();
    return r;
  }

  friend bool operator==(const Poly& a, const Poly& b) {
    if (a.c_.size() != b.c_.size()) return false;
    for (size_t i = 0; i < a.c_.size(); ++i)
      if (!(a.c_[i] == b.c_[i])) return false;
    return true;
  }

  // Euclidean division: a = q*b + r with deg r < deg b.
  friend std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
    if (b.is_zero()) throw Error(Errc::ZeroInput, "polynomial division by zero");
    Poly q(b.zero_), r = a;
    r.adopt(b);
    if (r.deg() < b.deg()) return {q, r};
    q.c_.assign(r.deg() - b.deg() + 1, b.zero_);
    K inv_lc = b.lc().inv();
    while (!r.is_zero() && r.deg() >= b.deg()) {
      int shift = r.deg() - b.deg();
      K f = r.lc() * inv_lc;
      q.c_[shift] = f;
      for (int i = 0; i <= b.deg(); ++i) r.c_[i + shift] -= f * b.c_[i];
      r.c_.pop_back();
      r.trim();
    }
    q.trim();
    return {q, r};
  }
  friend Poly operator/(const Poly& a, const Poly& b) { return divmod(a, b).first; }
  friend Poly operator%(const Poly& a, const Poly& b) { return divmod(a, b).second; }

  Poly monic() const {
    if (c_.empty()) return *this;
    return scaled(lc().inv());
  }

  K eval(const K& x) const {
    K acc = zero_;
    for (size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
    return acc;
  }
  // Horner evaluation in any ring R that can absorb coefficients via `lift`.
  template <class R, class Lift>
  R eval_in(const R& x, const R& zero_r, Lift lift) const {
    R acc = zero_r;
    for (size_t i = c_.size(); i-- > 0;) acc = acc * x + lift(c_[i]);
    return acc;
  }

  Poly derivative() const {
    if (c_.size() <= 1) return Poly(zero_);
    std::vector<K> r;
    for (size_t i = 1; i < c_.size(); ++i) r.push_back(c_[i] * zero_.from_int(static_cast<long>(i)));
    return Poly(std::move(r), zero_);
  }

  bool is_atomic() const {
    int nz = 0;
    for (auto& x : c_)
      if (!x.is_zero()) ++nz;
    if (nz == 0) return true;
    if (nz > 1) return false;
    const K& c = c_.back();
    if (deg() == 0) return c.is_atomic() && !prints_negative(c);
    return c.is_one();
  }

  std::string str() const {
    if (c_.empty()) return "0";
    std::string out;
    bool first = true;
    for (int d = deg(); d >= 0; --d) {
      const K& c = c_[d];
      if (c.is_zero()) continue;
      bool neg = prints_negative(c);
      K a = neg ? -c : c;
      if (first) {
        if (neg) out += "-";
      } else {
        out += neg ? " - " : " + ";
      }
      first = false;
      std::string mono;
      if (d >= 1) mono = std::string(1, V) + (d > 1 ? "^" + std::to_string(d) : "");
      if (d == 0) {
        out += a.is_atomic() ? a.str() : "(" + a.str() + ")";
      } else if (a.is_one()) {
        out += mono;
      } else {
        out += (a.is_atomic() ? a.str() : "(" + a.str() + ")") + "*" + mono;
      }
    }
    return out;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }
  void adopt(const Poly& o) {
    if (c_.empty() && !o.c_.empty()) zero_ = o.zero_;
  }

  std::vector<K> c_;
  K zero_{};
};

// Monic gcd; gcd(0, 0) = 0.
template <class K, char V>
Poly<K, V> gcd(Poly<K, V> a, Poly<K, V> b) {
  while (!b.is_zero()) {
    Poly<K, V> r = a % b;
    a = std::move(b);
    b = r.monic();
  }
  return a.monic();
}

namespace detail {

using ZPoly = std::vector<mpz_class>;  // integer coefficients, low to high

inline void zp_trim(ZPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline void zp_make_primitive(ZPoly& a) {
  mpz_class c = 0;
  for (auto& x : a) c = gcd(c, x);
  if (c == 0 || c == 1) return;
  for (auto& x : a) x /= c;
}

// Pseudo-remainder of a by b over Z.
inline ZPoly zp_prem(ZPoly a, const ZPoly& b) {
  const mpz_class& lb = b.back();
  while (a.size() >= b.size()) {
    mpz_class la = a.back();
    size_t shift = a.size() - b.size();
    for (auto& x : a) x *= lb;
    for (size_t i = 0; i < b.size(); ++i) a[i + shift] -= la * b[i];
    a.pop_back();
    zp_trim(a);
  }
  return a;
}

template <char V>
ZPoly to_primitive_integer(const Poly<Rational, V>& p) {
  mpz_class l = 1;
  for (auto& c : p.coeffs()) l = lcm(l, c.den());
  ZPoly z;
  for (auto& c : p.coeffs()) z.push_back(c.num() * (l / c.den()));
  zp_make_primitive(z);
  return z;
}

// Degree of gcd(a, b) modulo a prime not dividing either leading
// coefficient; an upper bound for the degree of the rational gcd.
inline int modular_gcd_degree(const ZPoly& a, const ZPoly& b) {
  for (uint32_t p : {4294967291u, 4294967279u, 4294967231u}) {
    mpz_class pz = p;
    if (a.back() % pz == 0 || b.back() % pz == 0) continue;
    auto reduce = [&](const ZPoly& z) {
      std::vector<Fp> c;
      for (auto& x : z) {
        mpz_class r = x % pz;
        if (r < 0) r += pz;
        c.emplace_back(static_cast<long>(r.get_ui()), p);
      }
      return Poly<Fp, 'x'>(c, Fp(0, p));
    };
    return gcd(reduce(a), reduce(b)).deg();
  }
  return 1;  // inconclusive; forces the exact computation
}

}  // namespace detail

// Over QQ the remainder sequence is run on primitive integer polynomials,
// after a modular test that settles the common coprime case immediately.
template <char V>
Poly<Rational, V> gcd(const Poly<Rational, V>& a, const Poly<Rational, V>& b) {
  if (a.is_zero() || b.is_zero()) return (a.is_zero() ? b : a).monic();
  if (a.deg() == 0 || b.deg() == 0) return a.one();
  detail::ZPoly x = detail::to_primitive_integer(a), y = detail::to_primitive_integer(b);
  if (detail::modular_gcd_degree(x, y) == 0) return a.one();
  if (x.size() < y.size()) std::swap(x, y);
  while (!y.empty()) {
    detail::ZPoly r = detail::zp_prem(x, y);
    detail::zp_make_primitive(r);
    x = std::move(y);
    y = std::move(r);
  }
  std::vector<Rational> c;
  for (auto& v : x) c.emplace_back(mpq_class(v, x.back()));
  return Poly<Rational, V>(c, Rational(0));
}

// Extended Euclid: returns (g, s, t) with s*a + t*b = g and g monic.
template <class K, char V>
std::tuple<Poly<K, V>, Poly<K, V>, Poly<K, V>> ext_gcd(const Poly<K, V>& a, const Poly<K, V>& b) {
  const K z = a.is_zero() ? b.zero_elem() : a.zero_elem();
  Poly<K, V> r0 = a, r1 = b, s0(z.one()), s1(z), t0(z), t1(z.one());
  while (!r1.is_zero()) {
    auto [q, r] = divmod(r0, r1);
    r0 = std::move(r1);
    r1 = std::move(r);
    Poly<K, V> s2 = s0 - q * s1, t2 = t0 - q * t1;
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0.is_zero()) return {r0, s0, t0};
  K c = r0.lc().inv();
  return {r0.scaled(c), s0.scaled(c), t0.scaled(c)};
}

template <class K, char V>
Poly<K, V> pow(const Poly<K, V>& p, unsigned e) {
  Poly<K, V> r = p.one(), b = p;
  while (e) {
    if (e & 1u) r *= b;
    b *= b;
    e >>= 1u;
  }
  return r;
}

}  // namespace conex
