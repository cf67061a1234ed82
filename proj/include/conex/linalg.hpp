// Copyright 2026 The conex authors.
// Licensed under the Apache License, Version 2.0.
#pragma once

#include "conex/matrix.hpp"
#include "conex/ratfunc.hpp"

namespace conex {

// Fraction-free determinant over K[V] (Bareiss); every division is exact.
template <class K, char V>
Poly<K, V> det_bareiss(Matrix<Poly<K, V>> m) {
  const int n = m.rows();
  const Poly<K, V> one = m.sample().one();
  Poly<K, V> prev = one;
  bool neg = false;
  for (int k = 0; k + 1 < n; ++k) {
    if (m(k, k).is_zero()) {
      int r = k + 1;
      while (r < n && m(r, k).is_zero()) ++r;
      if (r == n) return m.sample().zero();
      m.swap_rows(k, r);
      neg = !neg;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
      m(i, k) = m.sample().zero();
    }
    prev = m(k, k);
  }
  Poly<K, V> d = n ? m(n - 1, n - 1) : one;
  return neg ? -d : d;
}

// Clears each row of a matrix over K(V) into K[V]; returns the row lcms.
template <class K, char V>
std::pair<Matrix<Poly<K, V>>, std::vector<Poly<K, V>>> clear_rows(const Matrix<RatFunc<K, V>>& a) {
  const K z = a.sample().zero_elem();
  Matrix<Poly<K, V>> m(a.rows(), a.cols(), Poly<K, V>(z));
  std::vector<Poly<K, V>> lcms;
  for (int i = 0; i < a.rows(); ++i) {
    Poly<K, V> l(z.one());
    for (int j = 0; j < a.cols(); ++j)
      if (!a(i, j).is_zero()) l = l * (a(i, j).den() / gcd(l, a(i, j).den()));
    for (int j = 0; j < a.cols(); ++j)
      if (!a(i, j).is_zero()) m(i, j) = a(i, j).num() * (l / a(i, j).den());
    lcms.push_back(l);
  }
  return {m, lcms};
}

template <class K, char V>
RatFunc<K, V> det_fraction_free(const Matrix<RatFunc<K, V>>& a) {
  auto [m, lcms] = clear_rows(a);
  Poly<K, V> den(a.sample().zero_elem().one());
  for (auto& l : lcms) den = den * l;
  return RatFunc<K, V>(det_bareiss(m), den);
}

// Inverse through the adjugate of the row-cleared polynomial matrix.
// Avoids the intermediate fractions of Gauss-Jordan over K(V).
template <class K, char V>
Matrix<RatFunc<K, V>> inverse_fraction_free(const Matrix<RatFunc<K, V>>& a) {
  using RF = RatFunc<K, V>;
  using P = Poly<K, V>;
  const int n = a.rows();
  auto [m, lcms] = clear_rows(a);
  P d = det_bareiss(m);
  if (d.is_zero()) throw Error(Errc::SingularInput, "matrix is not invertible");
  Matrix<RF> inv = Matrix<RF>::zeros(n, n, a.sample());
  if (n == 1) {
    inv(0, 0) = RF(lcms[0], m(0, 0));
    return inv;
  }
  Matrix<P> minor(n - 1, n - 1, m.sample());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      // cofactor C_ij; adj(M)_ji = C_ij and A^{-1} = M^{-1} diag(lcm).
      for (int r = 0, rr = 0; r < n; ++r) {
        if (r == i) continue;
        for (int c = 0, cc = 0; c < n; ++c) {
          if (c == j) continue;
          minor(rr, cc++) = m(r, c);
        }
        ++rr;
      }
      P cof = det_bareiss(minor);
      if ((i + j) % 2) cof = -cof;
      if (!cof.is_zero()) inv(j, i) = RF(cof * lcms[i], d);
    }
  return inv;
}

}  // namespace conex
