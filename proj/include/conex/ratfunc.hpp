// Copyright 2026 The conex authors.
// Licensed under the Apache License, Version 2.0.
#pragma once

#include <string>
#include <utility>

#include "conex/poly.hpp"

namespace conex {

// Element of K(V) kept as num/den with den monic and gcd(num, den) = 1,
// so that equality is structural. A default-constructed value is a zero
// with no coefficient context; it adopts the context of any operand.
template <class K, char V = 'u'>
class RatFunc {
 public:
  using Coeff = K;
  using P = Poly<K, V>;

  RatFunc() = default;
  explicit RatFunc(const K& c) : n_(c), d_(c.one()) {}
  explicit RatFunc(const P& n) : n_(n), d_(n.zero_elem().one()) {}
  RatFunc(const P& n, const P& d) : n_(n), d_(d) { canonicalize(); }

  static RatFunc var(const K& sample) { return RatFunc(P::var(sample)); }
  // c * V^k for any integer k.
  static RatFunc monomial(const K& c, int k) {
    if (k >= 0) return RatFunc(P::monomial(c, k));
    RatFunc r;
    r.n_ = P(c);
    r.d_ = P::monomial(c.one(), -k);
    return r;
  }

  const P& num() const { return n_; }
  const P& den() const { return d_; }
  K zero_elem() const { return n_.is_zero() ? d_.zero_elem() : n_.zero_elem(); }

  bool is_zero() const { return n_.is_zero(); }
  bool is_one() const { return n_.is_one() && d_.is_one(); }
  bool is_constant() const { return n_.is_constant() && d_.is_constant(); }
  // Constant value; requires is_constant().
  K constant() const { return n_.coeff(0); }
  RatFunc zero() const { return RatFunc(zero_elem()); }
  RatFunc one() const { return RatFunc(zero_elem().one()); }
  RatFunc from_int(long k) const { return RatFunc(zero_elem().from_int(k)); }
  long characteristic() const { return zero_elem().characteristic(); }

  // Order of vanishing at V = 0.
  int val0() const {
    if (is_zero()) throw Error(Errc::ZeroInput, "valuation of zero");
    return n_.ord0() - d_.ord0();
  }
  // Order of vanishing at V = infinity.
  int valinf() const {
    if (is_zero()) throw Error(Errc::ZeroInput, "valuation of zero");
    return d_.deg() - n_.deg();
  }
  // Element of K[V, 1/V].
  bool is_laurent() const { return d_.is_zero() || d_.is_monomial(); }

  RatFunc inv() const {
    if (is_zero()) throw Error(Errc::ZeroInput, "inverse of zero rational function");
    RatFunc r;
    K c = n_.lc().inv();
    r.n_ = d_.scaled(c);
    r.d_ = n_.scaled(c);
    return r;
  }

  RatFunc operator-() const {
    RatFunc r = *this;
    r.n_ = -r.n_;
    return r;
  }
  friend RatFunc operator+(const RatFunc& a, const RatFunc& b) {
    if (a.is_zero()) return b.is_zero() && b.d_.is_zero() ? a : b;
    if (b.is_zero()) return a;
    if (a.d_ == b.d_) return RatFunc(a.n_ + b.n_, a.d_);
    P g = gcd(a.d_, b.d_);
    if (g.is_one()) {
      RatFunc r;
      r.n_ = a.n_ * b.d_ + b.n_ * a.d_;
      r.d_ = a.d_ * b.d_;
      if (r.n_.is_zero()) r.d_ = r.d_.one();
      return r;
    }
    P ad = a.d_ / g, bd = b.d_ / g;
    P n = a.n_ * bd + b.n_ * ad;
    P h = gcd(n, g);
    RatFunc r;
    if (n.is_zero()) {
      r.n_ = n;
      r.d_ = g.one();
      return r;
    }
    r.n_ = n / h;
    r.d_ = (a.d_ * bd) / h;
    return r;
  }
  friend RatFunc operator-(const RatFunc& a, const RatFunc& b) { return a + (-b); }
  friend RatFunc operator*(const RatFunc& a, const RatFunc& b) {
    if (a.is_zero()) return b.d_.is_zero() ? a : b.zero();
    if (b.is_zero()) return a.zero();
    P g1 = gcd(a.n_, b.d_), g2 = gcd(b.n_, a.d_);
    RatFunc r;
    r.n_ = (g1.is_one() ? a.n_ : a.n_ / g1) * (g2.is_one() ? b.n_ : b.n_ / g2);
    r.d_ = (g2.is_one() ? a.d_ : a.d_ / g2) * (g1.is_one() ? b.d_ : b.d_ / g1);
    return r;
  }
  friend RatFunc operator/(const RatFunc& a, const RatFunc& b) { return a * b.inv(); }
  RatFunc& operator+=(const RatFunc& o) { return *this = *this + o; }
  RatFunc& operator-=(const RatFunc& o) { return *this = *this - o; }
  RatFunc& operator*=(const RatFunc& o) { return *this = *this * o; }
  RatFunc& operator/=(const RatFunc& o) { return *this = *this / o; }
  friend bool operator==(const RatFunc& a, const RatFunc& b) {
    if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero();
    return a.n_ == b.n_ && a.d_ == b.d_;
  }

  RatFunc scaled(const K& c) const {
    RatFunc r = *this;
    r.n_ = n_.scaled(c);
    return r;
  }

  bool is_atomic() const { return d_.is_one() && n_.is_atomic(); }
  std::string str() const {
    if (is_zero()) return "0";
    if (d_.is_one()) return n_.str();
    auto wrap = [](const P& p) { return p.is_atomic() ? p.str() : "(" + p.str() + ")"; };
    return wrap(n_) + "/" + wrap(d_);
  }

 private:
  void canonicalize() {
    if (d_.is_zero()) throw Error(Errc::ZeroInput, "rational function with zero denominator");
    if (n_.is_zero()) {
      d_ = d_.one();
      return;
    }
    P g = gcd(n_, d_);
    if (!g.is_one()) {
      n_ = n_ / g;
      d_ = d_ / g;
    }
    if (!d_.lc().is_one()) {
      K c = d_.lc().inv();
      n_ = n_.scaled(c);
      d_ = d_.scaled(c);
    }
  }

  P n_, d_;
};

template <class K, char V>
RatFunc<K, V> pow(const RatFunc<K, V>& f, int e) {
  if (e < 0) return pow(f.inv(), -e);
  RatFunc<K, V> r = f.one(), b = f;
  unsigned k = static_cast<unsigned>(e);
  while (k) {
    if (k & 1u) r *= b;
    b *= b;
    k >>= 1u;
  }
  return r;
}

// Units of O_S: both valuations vanish.
template <class K, char V>
bool is_unit_OS(const RatFunc<K, V>& f) {
  return !f.is_zero() && f.val0() == 0 && f.valinf() == 0;
}
// O_S membership: both valuations non-negative.
template <class K, char V>
bool in_OS(const RatFunc<K, V>& f) {
  return f.is_zero() || (f.val0() >= 0 && f.valinf() >= 0);
}
// Units of O_V = K[V, 1/V] are the nonzero monomials.
template <class K, char V>
bool is_unit_OV(const RatFunc<K, V>& f) {
  return !f.is_zero() && f.num().is_monomial() && f.den().is_monomial();
}

template <class K, char V>
struct RankOneFactor {
  RatFunc<K, V> unit;  // unit of O_S
  int k;               // exponent of (V - 1)
  int alpha;           // exponent of V
};

// f = unit * (V-1)^k * V^alpha. The exponents are forced by the two
// valuations: alpha = val0(f) and k = -val0(f) - valinf(f).
template <class K, char V>
RankOneFactor<K, V> factor_rank1(const RatFunc<K, V>& f) {
  if (f.is_zero()) throw Error(Errc::ZeroInput, "factor_rank1 of zero");
  int alpha = f.val0();
  int k = -alpha - f.valinf();
  const K one = f.zero_elem().one();
  RatFunc<K, V> lin(Poly<K, V>({-one, one}, one.zero()));
  RatFunc<K, V> shape = pow(lin, k) * RatFunc<K, V>::monomial(one, alpha);
  return {f / shape, k, alpha};
}

// Laurent polynomial lambda with f - lambda either zero or satisfying
// val0(f - lambda) >= 0 and valinf(f - lambda) > 0. The principal part at
// V = 0 is stripped first, then the polynomial part at infinity.
template <class K, char V>
RatFunc<K, V> approximate(const RatFunc<K, V>& f) {
  using P = Poly<K, V>;
  if (f.is_zero()) return f;
  const K z = f.zero_elem();
  RatFunc<K, V> lambda = f.zero();
  int m = f.den().ord0();
  if (m > 0) {
    // Power series of num / (den / V^m) at 0, truncated below V^m.
    P dred = f.den().shift(-m);
    K inv0 = dred.coeff(0).inv();
    std::vector<K> series;
    for (int i = 0; i < m; ++i) {
      K acc = f.num().coeff(i);
      for (int j = 1; j <= i; ++j) acc -= dred.coeff(j) * series[i - j];
      series.push_back(acc * inv0);
    }
    P principal(series, z);
    lambda = RatFunc<K, V>(principal) * RatFunc<K, V>::monomial(z.one(), -m);
  }
  RatFunc<K, V> rest = f - lambda;
  if (!rest.is_zero()) lambda += RatFunc<K, V>(rest.num() / rest.den());
  return lambda;
}

// phi(f)(c / V) for a coefficient map phi, computed on numerator and
// denominator separately: p(c/V) = V^{-deg p} * sum phi(p_k) c^k V^{deg p - k}.
template <class K, char V, class CoeffMap>
RatFunc<K, V> substitute_reciprocal(const RatFunc<K, V>& f, const K& c, CoeffMap phi) {
  using P = Poly<K, V>;
  if (f.is_zero()) return f;
  auto flip = [&](const P& p) {
    const int d = p.deg();
    std::vector<K> out(d + 1, p.zero_elem());
    K ck = c.one();
    for (int k = 0; k <= d; ++k) {
      out[d - k] = phi(p.coeff(k)) * ck;
      ck *= c;
    }
    return P(out, p.zero_elem());
  };
  return RatFunc<K, V>(flip(f.num()), flip(f.den())) *
         RatFunc<K, V>::monomial(c.one(), f.den().deg() - f.num().deg());
}

}  // namespace conex
