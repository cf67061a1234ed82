// Copyright 2026 The conex authors.
// Licensed under the Apache License, Version 2.0.
#pragma once

#include <random>

#include "conex/fp.hpp"
#include "conex/matrix.hpp"
#include "conex/quadext.hpp"
#include "conex/ratfunc.hpp"

namespace conex {

// Seeded generator for reproducible test instances. Degrees are bounded by
// 3 and rational heights by 10 unless stated otherwise.
class Sampler {
 public:
  explicit Sampler(uint64_t seed) : rng_(seed) {}

  long uniform(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }
  bool coin() { return uniform(0, 1) == 1; }
  std::mt19937_64& engine() { return rng_; }

  Rational scalar(const Rational&, long height = 10) {
    long n = uniform(-height, height);
    long d = coin() ? 1 : uniform(1, height);
    return Rational(n, d);
  }
  Fp scalar(const Fp& ctx, long = 0) { return Fp(uniform(0, static_cast<long>(ctx.modulus()) - 1), ctx.modulus()); }

  template <class F>
  QuadExt<F> scalar(const QuadExt<F>& ctx, long height = 10) {
    return QuadExt<F>(scalar(ctx.c0(), height), scalar(ctx.c0(), height), ctx.params());
  }

  template <class K>
  K nonzero_scalar(const K& ctx) {
    for (;;) {
      K x = scalar(ctx);
      if (!x.is_zero()) return x;
    }
  }

  template <class K, char V>
  Poly<K, V> poly(const K& ctx, int max_deg = 3) {
    int d = static_cast<int>(uniform(0, max_deg));
    std::vector<K> c;
    for (int i = 0; i <= d; ++i) c.push_back(scalar(ctx));
    return Poly<K, V>(c, ctx.zero());
  }

  template <class K, char V = 'u'>
  RatFunc<K, V> ratfunc(const K& ctx, int max_deg = 3) {
    Poly<K, V> n = poly<K, V>(ctx, max_deg);
    Poly<K, V> d;
    do d = poly<K, V>(ctx, max_deg);
    while (d.is_zero());
    return RatFunc<K, V>(n, d);
  }
  template <class K, char V = 'u'>
  RatFunc<K, V> nonzero_ratfunc(const K& ctx, int max_deg = 3) {
    for (;;) {
      auto f = ratfunc<K, V>(ctx, max_deg);
      if (!f.is_zero()) return f;
    }
  }

  // Element of O_S: denominator nonzero at 0 and of degree >= numerator.
  template <class K>
  RatFunc<K> os_element(const K& ctx, int max_deg = 2) {
    Poly<K> d;
    do d = poly<K, 'u'>(ctx, max_deg);
    while (d.is_zero() || d.coeff(0).is_zero());
    Poly<K> n = poly<K, 'u'>(ctx, d.deg());
    return RatFunc<K>(n, d);
  }
  template <class K>
  RatFunc<K> os_unit(const K& ctx, int max_deg = 2) {
    for (;;) {
      RatFunc<K> f = os_element(ctx, max_deg);
      if (is_unit_OS(f)) return f;
    }
  }
  // Laurent polynomial with exponents in [-2, max_deg].
  template <class K>
  RatFunc<K> laurent(const K& ctx, int max_deg = 2) {
    return RatFunc<K>(poly<K, 'u'>(ctx, max_deg + 2)) * RatFunc<K>::monomial(ctx.one(), -2);
  }

  // Random invertible n x n matrix with entries of degree <= max_deg.
  template <class K>
  Matrix<RatFunc<K>> invertible(int n, const K& ctx, int max_deg = 3) {
    using RF = RatFunc<K>;
    for (;;) {
      Matrix<RF> g = Matrix<RF>::zeros(n, n, RF(ctx.zero()));
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = ratfunc<K, 'u'>(ctx, max_deg);
      if (!g.det().is_zero()) return g;
    }
  }

  // Products of elementary matrices, unit scalings and swaps, so the
  // inverse automatically has entries in the same ring.
  template <class K>
  Matrix<RatFunc<K>> gl_os(int n, const K& ctx) {
    return gl_product(n, ctx, [&] { return os_element(ctx); }, [&] { return os_unit(ctx); });
  }
  template <class K>
  Matrix<RatFunc<K>> gl_ov(int n, const K& ctx) {
    return gl_product(n, ctx, [&] { return laurent(ctx); },
                      [&] { return RatFunc<K>::monomial(nonzero_scalar(ctx), static_cast<int>(uniform(-2, 2))); });
  }

 private:
  template <class K, class Entry, class Unit>
  Matrix<RatFunc<K>> gl_product(int n, const K& ctx, Entry entry, Unit unit) {
    using RF = RatFunc<K>;
    Matrix<RF> m = Matrix<RF>::identity(n, RF(ctx.zero()));
    for (int step = 0; step < 2 * n; ++step) {
      int i = static_cast<int>(uniform(0, n - 1)), j = static_cast<int>(uniform(0, n - 1));
      long kind = uniform(0, 3);
      if (i != j && kind <= 1) m.add_row(i, j, entry());
      else if (kind == 2) m.scale_row(i, unit());
      else if (i != j) m.swap_rows(i, j);
    }
    return m;
  }

  std::mt19937_64 rng_;
};

}  // namespace conex
