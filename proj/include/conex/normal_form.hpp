// Copyright 2026 The conex authors.
// Licensed under the Apache License, Version 2.0.
#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "conex/linalg.hpp"
#include "conex/matrix.hpp"
#include "conex/ratfunc.hpp"

namespace conex {

// Certificate p*g*q = diag((u-1)^k_1, ..., (u-1)^k_n) with p in GL(O_S)
// and q in GL(O_V). Exponents are sorted in descending order.
template <class K>
struct NormalFormCertificate {
  Matrix<RatFunc<K>> p, q;
  std::vector<int> exponents;
};

template <class K>
struct Diag2x2 {
  Matrix<RatFunc<K>> p, q;
  bool swapped = false;  // a column swap happened, so q(0,1) may be nonzero
};

namespace detail {

template <class T>
void left_2x2(Matrix<T>& m, int i, int j, const Matrix<T>& p) {
  for (int c = 0; c < m.cols(); ++c) {
    T x = m(i, c), y = m(j, c);
    m(i, c) = p(0, 0) * x + p(0, 1) * y;
    m(j, c) = p(1, 0) * x + p(1, 1) * y;
  }
}

template <class T>
void right_2x2(Matrix<T>& m, int i, int j, const Matrix<T>& q) {
  for (int r = 0; r < m.rows(); ++r) {
    T x = m(r, i), y = m(r, j);
    m(r, i) = x * q(0, 0) + y * q(1, 0);
    m(r, j) = x * q(0, 1) + y * q(1, 1);
  }
}

template <class T>
Matrix<T> mat2(const T& a, const T& b, const T& c, const T& d) {
  return Matrix<T>::from_rows({{a, b}, {c, d}});
}

}  // namespace detail

// p * [[a, 0], [b, c]] * q is diagonal. Each swap round strictly lowers
// w(a) - w(c) with w = val0 + valinf, and a round is only entered while that
// quantity is at least 2, so the loop terminates.
template <class K>
Diag2x2<K> diag_2x2(RatFunc<K> a, RatFunc<K> b, RatFunc<K> c) {
  using RF = RatFunc<K>;
  if (a.is_zero() || c.is_zero()) throw Error(Errc::ZeroPivot, "diag_2x2 needs nonzero diagonal entries");
  const K one = a.zero_elem().one();
  const RF r0 = RF(one.zero()), r1 = RF(one);
  Diag2x2<K> out{Matrix<RF>::identity(2, r1), Matrix<RF>::identity(2, r1), false};
  while (!b.is_zero()) {
    if (in_OS(b / a)) {
      out.p = detail::mat2(r1, r0, -(b / a), r1) * out.p;
      break;
    }
    int alpha = a.val0() - c.val0();
    if (alpha != 0) {
      RF s = RF::monomial(one, alpha);
      out.q.scale_col(1, s);
      c *= s;
    }
    RF lambda = approximate(b / c);
    if (!lambda.is_zero()) {
      out.q.add_col(0, 1, -lambda);
      b -= lambda * c;
      if (b.is_zero()) break;
    }
    // Now val0(b) >= val0(a) = val0(c) and valinf(b) > valinf(c).
    if (b.valinf() >= a.valinf()) {
      // b/a lies in O_S: clear it with a row operation.
      out.p = detail::mat2(r1, r0, -(b / a), r1) * out.p;
      b = r0;
      break;
    }
    if (b.val0() > a.val0()) {
      out.p = detail::mat2(r1, r0, r1, r1) * out.p;
      b += a;
    }
    // a/b is in O_S with valinf(a/b) > 0: kill a, then swap columns.
    RF ab = a / b;
    out.p = detail::mat2(r1, -ab, r0, r1) * out.p;
    out.q = out.q * detail::mat2(r0, r1, r1, r0);
    RF na = -(ab * c);
    a = na;
    std::swap(b, c);
    out.swapped = true;
  }
  return out;
}

namespace detail {

template <class K>
RatFunc<K> u_minus_one(const K& sample) {
  const K one = sample.one();
  return RatFunc<K>(Poly<K>({-one, one}, one.zero()));
}

// p(1 + t) as a polynomial in t.
template <class K>
Poly<K> taylor_shift_one(const Poly<K>& p) {
  const K one = p.zero_elem().one();
  Poly<K> lin({one, one}, one.zero()), acc(one.zero());
  for (int i = p.deg(); i >= 0; --i) acc = acc * lin + Poly<K>(p.coeff(i));
  return acc;
}

// Coefficients x_1..x_count of the expansion of x in s = 1/(u-1) around
// u = infinity; requires x = 0 or valinf(x) >= 1.
template <class K>
std::vector<K> expand_at_infinity(const RatFunc<K>& x, int count) {
  const K z = x.zero_elem();
  std::vector<K> out(count, z.zero());
  if (x.is_zero() || count <= 0) return out;
  Poly<K> n = taylor_shift_one(x.num()), d = taylor_shift_one(x.den());
  int shift = d.deg() - n.deg();  // >= 1
  auto rev = [](const Poly<K>& p) {
    std::vector<K> c(p.coeffs().rbegin(), p.coeffs().rend());
    return c;
  };
  std::vector<K> rn = rev(n), rd = rev(d);
  K inv0 = rd[0].inv();
  std::vector<K> series;
  for (int j = 0; j + shift <= count; ++j) {
    K acc = j < static_cast<int>(rn.size()) ? rn[j] : z.zero();
    for (int i = 1; i <= j && i < static_cast<int>(rd.size()); ++i) acc -= rd[i] * series[j - i];
    series.push_back(acc * inv0);
    out[j + shift - 1] = series.back();
  }
  return out;
}

// Column operations on columns [k, n) of `work` (mirrored into `q`) that
// leave row k as (a, 0, ..., 0) with a an O_V-gcd of the row. The row is
// cleared into K[u] by the lcm of its denominators; Euclid then runs with
// the smallest-degree entry as pivot.
template <class K>
void reduce_row(Matrix<RatFunc<K>>& work, Matrix<RatFunc<K>>& q, int k) {
  using RF = RatFunc<K>;
  using P = Poly<K>;
  const int n = work.cols();
  const K z = work.sample().zero_elem();
  P lcm(z.one());
  bool nonzero = false;
  for (int j = k; j < n; ++j) {
    const RF& x = work(k, j);
    if (x.is_zero()) continue;
    nonzero = true;
    lcm = lcm * (x.den() / gcd(lcm, x.den()));
  }
  if (!nonzero) throw Error(Errc::SingularInput, "zero row in column reduction");
  std::vector<P> cleared(n, P(z));
  for (int j = k; j < n; ++j) {
    const RF& x = work(k, j);
    if (!x.is_zero()) cleared[j] = x.num() * (lcm / x.den());
  }
  for (;;) {
    int piv = -1, live = 0;
    for (int j = k; j < n; ++j) {
      if (cleared[j].is_zero()) continue;
      ++live;
      if (piv < 0 || cleared[j].deg() < cleared[piv].deg()) piv = j;
    }
    if (live == 1) {
      if (piv != k) {
        work.swap_cols(k, piv);
        q.swap_cols(k, piv);
        std::swap(cleared[k], cleared[piv]);
      }
      break;
    }
    for (int j = k; j < n; ++j) {
      if (j == piv || cleared[j].is_zero()) continue;
      auto [quo, rem] = divmod(cleared[j], cleared[piv]);
      RF f = -RF(quo);
      work.add_col(j, piv, f);
      q.add_col(j, piv, f);
      cleared[j] = rem;
      work(k, j) = RF(rem, lcm);
    }
  }
  for (int j = k + 1; j < n; ++j) work(k, j) = RF(z);
}

// Scales row i by an O_S unit and column i by a power of u so that the
// diagonal entry becomes (u-1)^k; returns k.
template <class K>
int normalize_diagonal(Matrix<RatFunc<K>>& work, Matrix<RatFunc<K>>& p, Matrix<RatFunc<K>>& q, int i) {
  using RF = RatFunc<K>;
  auto f = factor_rank1(work(i, i));
  if (!f.unit.is_one()) {
    RF s = f.unit.inv();
    work.scale_row(i, s);
    p.scale_row(i, s);
  }
  if (f.alpha != 0) {
    RF s = RF::monomial(work.sample().zero_elem().one(), -f.alpha);
    work.scale_col(i, s);
    q.scale_col(i, s);
  }
  return f.k;
}

// With work(k,k) = (u-1)^alpha, work(i,i) = (u-1)^delta and row k, column i
// otherwise zero, replaces b = work(i,k) by its canonical representative
// modulo a*O_S + c*O_V: a combination of (u-1)^e with alpha < e < delta.
template <class K>
void reduce_offdiagonal(Matrix<RatFunc<K>>& work, Matrix<RatFunc<K>>& p, Matrix<RatFunc<K>>& q, int k, int i,
                        int alpha, int delta) {
  using RF = RatFunc<K>;
  if (work(i, k).is_zero()) return;
  const K z = work.sample().zero_elem();
  const RF t = u_minus_one(z);
  RF lambda = approximate(work(i, k) / work(i, i));
  if (!lambda.is_zero()) {
    work.add_col(k, i, -lambda);
    q.add_col(k, i, -lambda);
  }
  RF x = work(i, k) / work(i, i);  // zero or in O_S with valinf >= 1
  if (x.is_zero()) return;
  int m = delta - alpha;
  // Keep the expansion terms s^1..s^(m-1); the tail times t^m lies in O_S
  // and is removed by a row operation against row k.
  std::vector<K> coef = m >= 2 ? expand_at_infinity(x, m - 1) : std::vector<K>{};
  RF head(z);
  for (int j = 1; j <= static_cast<int>(coef.size()); ++j) head += RF(coef[j - 1]) * pow(t, -j);
  RF mu = (x - head) * pow(t, m);
  if (!mu.is_zero()) {
    work.add_row(i, k, -mu);
    p.add_row(i, k, -mu);
  }
}

template <class K>
void diagonalize(Matrix<RatFunc<K>>& work, Matrix<RatFunc<K>>& p, Matrix<RatFunc<K>>& q, int k,
                 std::vector<int>& ks) {
  const int n = work.rows();
  if (k == n - 1) {
    ks[k] = normalize_diagonal(work, p, q, k);
    return;
  }
  reduce_row(work, q, k);
  for (int guard = 0;; ++guard) {
    if (guard > 100000) throw Error(Errc::InternalMismatch, "normal form failed to terminate");
    diagonalize(work, p, q, k + 1, ks);
    ks[k] = normalize_diagonal(work, p, q, k);
    int target = -1;
    for (int i = k + 1; i < n; ++i) {
      reduce_offdiagonal(work, p, q, k, i, ks[k], ks[i]);
      if (target < 0 && !work(i, k).is_zero()) target = i;
    }
    if (target < 0) break;
    Diag2x2<K> d = diag_2x2(work(k, k), work(target, k), work(target, target));
    left_2x2(work, k, target, d.p);
    left_2x2(p, k, target, d.p);
    right_2x2(work, k, target, d.q);
    right_2x2(q, k, target, d.q);
    // A column swap may spill the other entries of column k into column
    // `target`; the minor is re-diagonalized on the next pass either way.
  }
}

}  // namespace detail

// Column reduction of the first row; returns (q1, g*q1).
template <class K>
std::pair<Matrix<RatFunc<K>>, Matrix<RatFunc<K>>> column_reduce_OV(const Matrix<RatFunc<K>>& g) {
  if (!g.square() || det_fraction_free(g).is_zero())
    throw Error(Errc::SingularInput, "column_reduce_OV needs an invertible matrix");
  Matrix<RatFunc<K>> work = g, q = Matrix<RatFunc<K>>::identity(g.rows(), g.sample());
  detail::reduce_row(work, q, 0);
  return {q, work};
}

namespace detail {

template <class K>
NormalFormCertificate<K> sorted_certificate(const Matrix<RatFunc<K>>& p, const Matrix<RatFunc<K>>& q,
                                            const std::vector<int>& ks) {
  const int n = p.rows();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return ks[x] > ks[y]; });
  NormalFormCertificate<K> cert{Matrix<RatFunc<K>>::zeros(n, n, p.sample()), Matrix<RatFunc<K>>::zeros(n, n, p.sample()), {}};
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      cert.p(i, j) = p(order[i], j);
      cert.q(j, i) = q(j, order[i]);
    }
    cert.exponents.push_back(ks[order[i]]);
  }
  return cert;
}

// Value at u = 0 of an element with val0 >= 0.
template <class K>
K value_at_zero(const RatFunc<K>& f) {
  if (f.is_zero() || f.val0() > 0) return f.zero_elem().zero();
  return f.num().coeff(0) * f.den().coeff(0).inv();
}

// Coefficient of u^d in the expansion at infinity of an element with
// -valinf <= d.
template <class K>
K leading_at_infinity(const RatFunc<K>& f, int d) {
  if (f.is_zero() || -f.valinf() != d) return f.zero_elem().zero();
  return f.num().lc() * f.den().lc().inv();
}

// Column operations over O_V bringing y = g*q into a shape where, after
// scaling every column to minimal u-adic order 0, the matrices of values
// at u = 0 and of leading coefficients at infinity are both invertible.
// Each step raises sum_j (v0 + vinf)(column j), which is bounded by
// val0(det g) + valinf(det g), so the loop terminates. Returns the column
// degrees at infinity, which are the exponents.
template <class K>
std::vector<int> reduce_both_places(Matrix<RatFunc<K>>& y, Matrix<RatFunc<K>>* q) {
  using RF = RatFunc<K>;
  const int n = y.rows();
  const K z = y.sample().zero_elem();
  std::vector<int> deg(n);
  // Denominators of y always divide the lcm of those of the input, and
  // w(f) <= deg(den f) for f != 0, which bounds the step count even when the
  // input is singular (then a column eventually vanishes).
  Poly<K> lcm(z.one());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!y(i, j).is_zero()) lcm = lcm * (y(i, j).den() / gcd(lcm, y(i, j).den()));
  long budget = -1;
  for (;;) {
    for (int j = 0; j < n; ++j) {
      int v0 = INT32_MAX, vinf = INT32_MAX;
      for (int i = 0; i < n; ++i) {
        if (y(i, j).is_zero()) continue;
        v0 = std::min(v0, y(i, j).val0());
        vinf = std::min(vinf, y(i, j).valinf());
      }
      if (v0 == INT32_MAX) throw Error(Errc::SingularInput, "zero column in normal form");
      if (v0 != 0) {
        RF s = RF::monomial(z.one(), -v0);
        y.scale_col(j, s);
        if (q) q->scale_col(j, s);
      }
      deg[j] = -(vinf + v0);  // degree at infinity after the u-power scaling
    }
    if (budget < 0) {
      budget = 1;
      for (int j = 0; j < n; ++j) budget += static_cast<long>(lcm.deg()) + deg[j];
    }
    if (budget-- == 0) throw Error(Errc::SingularInput, "normal form needs an invertible matrix");
    Matrix<K> at0 = Matrix<K>::zeros(n, n, z), atinf = Matrix<K>::zeros(n, n, z);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        at0(i, j) = value_at_zero(y(i, j));
        atinf(i, j) = leading_at_infinity(y(i, j), deg[j]);
      }
    bool at_zero = true;
    Matrix<K> ker = at0.kernel();
    if (ker.cols() == 0) {
      at_zero = false;
      ker = atinf.kernel();
      if (ker.cols() == 0) return deg;
    }
    int j0 = -1;
    for (int j = 0; j < n; ++j)
      if (!ker(j, 0).is_zero() && (j0 < 0 || deg[j] > deg[j0])) j0 = j;
    K inv = ker(j0, 0).inv();
    for (int j = 0; j < n; ++j) {
      if (j == j0 || ker(j, 0).is_zero()) continue;
      RF f = RF::monomial(ker(j, 0) * inv, at_zero ? 0 : deg[j0] - deg[j]);
      y.add_col(j0, j, f);
      if (q) q->add_col(j0, j, f);
    }
  }
}

}  // namespace detail

// Normal form by simultaneous column reduction at u = 0 and u = infinity.
// With y = g*q reduced and k_j its column degrees, p^{-1} = y*diag((u-1)^-k)
// has entries in O_S and a determinant that is a unit at both places.
template <class K>
NormalFormCertificate<K> grothendieck_normal_form(const Matrix<RatFunc<K>>& g) {
  using RF = RatFunc<K>;
  if (!g.square() || g.rows() == 0) throw Error(Errc::InvalidArgument, "normal form needs a nonempty square matrix");
  const int n = g.rows();
  Matrix<RF> y = g, q = Matrix<RF>::identity(n, g.sample());
  std::vector<int> ks = detail::reduce_both_places(y, &q);
  const RF t = detail::u_minus_one(g.sample().zero_elem());
  for (int j = 0; j < n; ++j) y.scale_col(j, pow(t, -ks[j]));
  return detail::sorted_certificate(inverse_fraction_free(y), q, ks);
}

// Exponents only (descending); same reduction without bookkeeping.
template <class K>
std::vector<int> normal_form_exponents(const Matrix<RatFunc<K>>& g) {
  if (!g.square() || g.rows() == 0) throw Error(Errc::InvalidArgument, "normal form needs a nonempty square matrix");
  Matrix<RatFunc<K>> y = g;
  std::vector<int> ks = detail::reduce_both_places(y, static_cast<Matrix<RatFunc<K>>*>(nullptr));
  std::sort(ks.rbegin(), ks.rend());
  return ks;
}

// Inductive route: reduce the first row over O_V, recurse on the minor,
// then clear the first column with diag_2x2. Between rounds the diagonal is
// normalized to powers of (u-1) and the first column to canonical
// representatives, which keeps entry sizes in check.
template <class K>
NormalFormCertificate<K> normal_form_inductive(const Matrix<RatFunc<K>>& g) {
  using RF = RatFunc<K>;
  if (!g.square() || g.rows() == 0) throw Error(Errc::InvalidArgument, "normal form needs a nonempty square matrix");
  if (det_fraction_free(g).is_zero()) throw Error(Errc::SingularInput, "normal form needs an invertible matrix");
  const int n = g.rows();
  Matrix<RF> work = g, p = Matrix<RF>::identity(n, g.sample()), q = p;
  std::vector<int> ks(n);
  detail::diagonalize(work, p, q, 0, ks);
  return detail::sorted_certificate(p, q, ks);
}

template <class K>
Matrix<RatFunc<K>> normal_form_diagonal(const std::vector<int>& ks, const K& sample) {
  using RF = RatFunc<K>;
  const K one = sample.one();
  RF lin(Poly<K>({-one, one}, one.zero()));
  Matrix<RF> d = Matrix<RF>::zeros(static_cast<int>(ks.size()), static_cast<int>(ks.size()), RF(one.zero()));
  for (size_t i = 0; i < ks.size(); ++i) d(i, i) = pow(lin, ks[i]);
  return d;
}

// Exact check of every certificate invariant. Inverses are obtained from the
// claimed identity (p^{-1} = g q D^{-1}, q^{-1} = D^{-1} p g) and confirmed by
// multiplication, which avoids inverting matrices over K(u).
template <class K>
bool verify_certificate(const Matrix<RatFunc<K>>& g, const NormalFormCertificate<K>& cert) {
  using RF = RatFunc<K>;
  const int n = g.rows();
  if (cert.p.rows() != n || cert.q.rows() != n || static_cast<int>(cert.exponents.size()) != n) return false;
  auto all = [n](const Matrix<RF>& m, auto pred) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (!pred(m(i, j))) return false;
    return true;
  };
  auto os = [](const RF& x) { return in_OS(x); };
  auto laurent = [](const RF& x) { return x.is_laurent(); };
  const K z = g.sample().zero_elem();
  if (!all(cert.p, os) || !all(cert.q, laurent)) return false;
  Matrix<RF> d = normal_form_diagonal(cert.exponents, z);
  std::vector<int> neg;
  for (int k : cert.exponents) neg.push_back(-k);
  Matrix<RF> dinv = normal_form_diagonal(neg, z);
  if (!(cert.p * g * cert.q == d)) return false;
  const Matrix<RF> id = Matrix<RF>::identity(n, g.sample());
  Matrix<RF> pinv = g * cert.q * dinv, qinv = dinv * cert.p * g;
  if (!all(pinv, os) || !(cert.p * pinv == id)) return false;
  if (!all(qinv, laurent) || !(cert.q * qinv == id)) return false;
  return is_unit_OS(det_fraction_free(cert.p)) && is_unit_OV(det_fraction_free(cert.q));
}

}  // namespace conex
