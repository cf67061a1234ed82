// Copyright 2026 The conex authors.
// Licensed under the Apache License, Version 2.0.
#pragma once

#include <algorithm>
#include <functional>
#include <vector>

#include "conex/linalg.hpp"
#include "conex/normal_form.hpp"

namespace conex {

// A vector bundle over the projective line over K, stored as its transition
// matrix g: the standard basis e of the O_V-lattice and a basis f of the
// O_S-lattice are related by e_j = sum_i f_i g_ij.
template <class K>
struct BundleP1 {
  Matrix<RatFunc<K>> transition;
  int rank() const { return transition.rows(); }
};

template <class K>
BundleP1<K> twist_line(int n, const K& sample) {
  RatFunc<K> g = pow(detail::u_minus_one(sample), -n);
  return {Matrix<RatFunc<K>>::from_rows({{g}})};
}

// Sum of both valuations of det g.
template <class K>
int degree(const BundleP1<K>& e) {
  RatFunc<K> d = det_fraction_free(e.transition);
  if (d.is_zero()) throw Error(Errc::SingularInput, "bundle transition is singular");
  return d.val0() + d.valinf();
}

// Descending list of k_i with E = O(k_1) + ... + O(k_n).
template <class K>
std::vector<int> splitting_type(const BundleP1<K>& e) {
  std::vector<int> ks = normal_form_exponents(e.transition);
  for (int& k : ks) k = -k;
  std::sort(ks.rbegin(), ks.rend());
  return ks;
}

// K-basis (as columns) of the global sections {x in O_V^n : g x in O_S^n}.
// Entries of x are Laurent polynomials whose exponent range is fixed by
// x = g^{-1} y with y in O_S^n; the two integrality conditions on g x are
// then linear in the coefficients of x.
template <class K>
Matrix<RatFunc<K>> global_sections_basis(const BundleP1<K>& e) {
  using RF = RatFunc<K>;
  using P = Poly<K>;
  const auto& g = e.transition;
  const int n = g.rows();
  const K z = g.sample().zero_elem();
  Matrix<RF> ginv = inverse_fraction_free(g);

  struct Unknown {
    int col;
    int exp;
  };
  std::vector<Unknown> unknowns;
  for (int j = 0; j < n; ++j) {
    bool any = false;
    int lo = 0, hi = 0;
    for (int i = 0; i < n; ++i) {
      if (ginv(j, i).is_zero()) continue;
      int a = ginv(j, i).val0(), b = -ginv(j, i).valinf();
      lo = any ? std::min(lo, a) : a;
      hi = any ? std::max(hi, b) : b;
      any = true;
    }
    for (int k = lo; any && k <= hi; ++k) unknowns.push_back({j, k});
  }
  const int m = static_cast<int>(unknowns.size());
  if (m == 0) return Matrix<RF>::zeros(n, 0, RF(z));

  // Row i of g x is (sum_j P_ij x_j) / D_i with D_i the lcm of row i's
  // denominators; it lies in O_S iff the Laurent numerator has no
  // exponent below ord0(D_i) and none above deg(D_i).
  std::vector<std::vector<K>> rows;
  for (int i = 0; i < n; ++i) {
    P lcm(z.one());
    for (int j = 0; j < n; ++j) {
      const P& d = g(i, j).den();
      lcm = (lcm * d) / gcd(lcm, d);
    }
    std::vector<P> num(n, P(z));
    for (int j = 0; j < n; ++j) num[j] = g(i, j).num() * (lcm / g(i, j).den());
    const int low = lcm.ord0(), high = lcm.deg();
    int emin = 0, emax = 0;
    bool any = false;
    for (const auto& un : unknowns) {
      if (num[un.col].is_zero()) continue;
      int a = un.exp + num[un.col].ord0(), b = un.exp + num[un.col].deg();
      emin = any ? std::min(emin, a) : a;
      emax = any ? std::max(emax, b) : b;
      any = true;
    }
    if (!any) continue;
    for (int ex = emin; ex <= emax; ++ex) {
      if (ex >= low && ex <= high) continue;
      std::vector<K> row(m, z);
      bool nonzero = false;
      for (int c = 0; c < m; ++c) {
        row[c] = num[unknowns[c].col].coeff(ex - unknowns[c].exp);
        nonzero = nonzero || !row[c].is_zero();
      }
      if (nonzero) rows.push_back(std::move(row));
    }
  }
  Matrix<K> sys = Matrix<K>::zeros(static_cast<int>(rows.size()), m, z);
  for (size_t r = 0; r < rows.size(); ++r)
    for (int c = 0; c < m; ++c) sys(static_cast<int>(r), c) = rows[r][c];
  Matrix<K> ker = rows.empty() ? Matrix<K>::identity(m, z) : sys.kernel();

  Matrix<RF> out = Matrix<RF>::zeros(n, ker.cols(), RF(z));
  for (int b = 0; b < ker.cols(); ++b)
    for (int c = 0; c < m; ++c)
      if (!ker(c, b).is_zero()) out(unknowns[c].col, b) += RF::monomial(ker(c, b), unknowns[c].exp);
  return out;
}

// Global sections dimension from the splitting type and from the direct
// linear solve; the two must agree.
template <class K>
int global_sections_dim(const BundleP1<K>& e) {
  int from_type = 0;
  for (int k : splitting_type(e)) from_type += std::max(1 + k, 0);
  int direct = global_sections_basis(e).cols();
  if (from_type != direct)
    throw Error(Errc::InternalMismatch, "global sections: splitting formula gives " + std::to_string(from_type) +
                                            ", direct solve gives " + std::to_string(direct));
  return direct;
}

template <class K>
BundleP1<K> dual(const BundleP1<K>& e) {
  return {inverse_fraction_free(e.transition).transpose()};
}

template <class K>
BundleP1<K> direct_sum(const BundleP1<K>& a, const BundleP1<K>& b) {
  return {block_diag(a.transition, b.transition)};
}

// Kronecker product; basis pairs (i, i') ordered lexicographically.
template <class K>
BundleP1<K> tensor(const BundleP1<K>& a, const BundleP1<K>& b) {
  return {kron(a.transition, b.transition)};
}

// Applies a semilinear field automorphism entrywise to the transition.
template <class K>
BundleP1<K> twist_conjugate(const BundleP1<K>& e, const std::function<RatFunc<K>(const RatFunc<K>&)>& iota) {
  if (!iota) throw Error(Errc::NoInvolution, "no involution attached to the coefficient field");
  return {e.transition.map([&](const RatFunc<K>& x) { return iota(x); })};
}

}  // namespace conex
