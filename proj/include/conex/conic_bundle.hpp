// Copyright 2026 The conex authors.
// Licensed under the Apache License, Version 2.0.
#pragma once

#include <algorithm>
#include <array>
#include <string>
#include <vector>

#include "conex/conic.hpp"
#include "conex/p1_bundle.hpp"

namespace conex {

// Vector bundle over the conic: the standard basis e of the O_U-lattice and
// a basis f of the O_infinity-lattice satisfy e_j = sum_i f_i g_ij.
template <class F>
struct BundleC {
  Matrix<LElem<F>> transition;
  ChartPtr<F> chart;
  int rank() const { return transition.rows(); }
};

template <class F>
LElem<F> l_const(const F& c, const ChartPtr<F>& ch) {
  return LElem<F>::constant(c, ch);
}

// O_C(2n): transition X^(-n), so f = X^n is the O_infinity generator.
template <class F>
BundleC<F> line_c(int n, const ChartPtr<F>& ch) {
  LElem<F> x = LElem<F>::var_x(ch), g = x.one();
  for (int k = 0; k < std::abs(n); ++k) g = n > 0 ? g / x : g * x;
  return {Matrix<LElem<F>>::from_rows({{g}}), ch};
}

template <class F>
int degree_c(const BundleC<F>& e) {
  if (e.rank() == 0) return 0;
  LElem<F> d = e.transition.det();
  if (d.is_zero()) throw Error(Errc::SingularInput, "bundle transition is singular");
  return 2 * v_infinity(d);
}

template <class F>
BundleP1<QuadExt<F>> pullback(const BundleC<F>& e) {
  return {e.transition.map([](const LElem<F>& x) { return embed_L(x); })};
}

// Restriction of scalars along L -> K(u), with K(u) = L + L w. The basis
// (e_1, e_1 w, e_2, e_2 w, ...) is interleaved; multiplication by
// alpha + beta w acts on (1, w) through [[alpha, -N beta], [beta, alpha + T beta]]
// where w^2 = T w - N.
template <class F>
BundleC<F> pushforward(const BundleP1<QuadExt<F>>& e, const ChartPtr<F>& ch) {
  using L = LElem<F>;
  const int n = e.rank();
  const L zero = l_const(ch->qr.zero(), ch);
  const L tr = l_const(ch->brs, ch), nm = l_const(ch->qr * ch->qs, ch);
  Matrix<L> g = Matrix<L>::zeros(2 * n, 2 * n, zero);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (e.transition(i, j).is_zero()) continue;
      LKPair<F> ab = split_over_L(e.transition(i, j), ch);
      g(2 * i, 2 * j) = ab.a;
      g(2 * i + 1, 2 * j) = ab.b;
      g(2 * i, 2 * j + 1) = -(nm * ab.b);
      g(2 * i + 1, 2 * j + 1) = ab.a + tr * ab.b;
    }
  return {g, ch};
}

template <class F>
BundleC<F> dual_c(const BundleC<F>& e) {
  return {e.transition.inverse().transpose(), e.chart};
}
template <class F>
BundleC<F> direct_sum_c(const BundleC<F>& a, const BundleC<F>& b) {
  return {block_diag(a.transition, b.transition), a.chart ? a.chart : b.chart};
}
template <class F>
BundleC<F> tensor_c(const BundleC<F>& a, const BundleC<F>& b) {
  return {kron(a.transition, b.transition), a.chart};
}

// Indecomposable summands: O(d) has rank 1 and even degree d; I(d) has
// rank 2 and degree d = 2 mod 4.
struct ConicSummand {
  bool rank_two = false;
  int degree = 0;
  std::string str() const { return (rank_two ? "I(" : "O(") + std::to_string(degree) + ")"; }
  friend bool operator==(const ConicSummand& a, const ConicSummand& b) {
    return a.rank_two == b.rank_two && a.degree == b.degree;
  }
};

struct ConicClassification {
  std::vector<ConicSummand> summands;  // O-labels first, each group by descending degree
  int rank() const {
    int r = 0;
    for (const auto& s : summands) r += s.rank_two ? 2 : 1;
    return r;
  }
  int degree() const {
    int d = 0;
    for (const auto& s : summands) d += s.degree;
    return d;
  }
  std::string str() const {
    if (summands.empty()) return "0";
    std::string out;
    for (const auto& s : summands) out += (out.empty() ? "" : " + ") + s.str();
    return out;
  }
  friend bool operator==(const ConicClassification& a, const ConicClassification& b) {
    return a.summands == b.summands;
  }
};

// Even pullback exponents 2k give O(2k); odd exponents pair up, each pair
// (2l+1, 2l+1) giving I(4l+2).
inline ConicClassification classification_from_type(const std::vector<int>& type) {
  ConicClassification out;
  std::vector<int> odd;
  for (int k : type) {
    if (k % 2 == 0) {
      out.summands.push_back({false, k});
    } else {
      odd.push_back(k);
    }
  }
  std::sort(odd.rbegin(), odd.rend());
  for (size_t i = 0; i < odd.size(); i += 2) {
    if (i + 1 >= odd.size() || odd[i] != odd[i + 1])
      throw Error(Errc::OddExponentUnpaired, "odd pullback exponent without a partner");
    out.summands.push_back({true, 2 * odd[i]});
  }
  auto key = [](const ConicSummand& s) { return std::make_pair(s.rank_two, -s.degree); };
  std::sort(out.summands.begin(), out.summands.end(),
            [&](const ConicSummand& a, const ConicSummand& b) { return key(a) < key(b); });
  return out;
}

template <class F>
ConicClassification classify(const BundleC<F>& e) {
  if (e.rank() == 0) return {};
  return classification_from_type(splitting_type(pullback(e)));
}

// Direct sum of the model bundles O(2k) = line_c(k) and
// I(4l+2) = pushforward of O(2l+1).
template <class F>
BundleC<F> model_bundle(const ConicClassification& c, const ChartPtr<F>& ch) {
  BundleC<F> out{Matrix<LElem<F>>::zeros(0, 0, l_const(ch->qr.zero(), ch)), ch};
  const QuadExt<F> kz = QuadExt<F>::embed(ch->qr.zero(), ch->kparams);
  for (const auto& s : c.summands) {
    BundleC<F> piece = s.rank_two ? pushforward(twist_line(s.degree / 2, kz), ch) : line_c(s.degree / 2, ch);
    out = direct_sum_c(out, piece);
  }
  return out;
}

// F-coordinates of vectors with entries in O_U = F[X] + F[X] Y, padded to a
// common length: entry i contributes the coefficients of f, then of g.
template <class F>
std::vector<std::vector<F>> ou_coordinates(const std::vector<std::vector<LElem<F>>>& vecs, const F&) {
  int width = 0;
  for (const auto& v : vecs)
    for (const auto& x : v) {
      if (!in_OU(x)) throw Error(Errc::InvalidArgument, "ou_coordinates: entry not in O_U");
      width = std::max({width, x.f().num().deg() + 1, x.g().num().deg() + 1});
    }
  std::vector<std::vector<F>> out;
  for (const auto& v : vecs) {
    std::vector<F> row;
    for (const auto& x : v)
      for (const auto* part : {&x.f(), &x.g()})
        for (int k = 0; k < width; ++k) row.push_back(part->num().coeff(k));
    out.push_back(std::move(row));
  }
  return out;
}

// Indices of an F-linearly independent subset spanning the same F-space.
template <class F>
std::vector<int> independent_subset(const std::vector<std::vector<F>>& rows, const F& zero) {
  std::vector<int> keep;
  if (rows.empty()) return keep;
  const int w = static_cast<int>(rows[0].size());
  Matrix<F> acc = Matrix<F>::zeros(0, w, zero);
  int rank = 0;
  for (size_t k = 0; k < rows.size(); ++k) {
    Matrix<F> next = Matrix<F>::zeros(acc.rows() + 1, w, zero);
    next.set_block(0, 0, acc);
    for (int c = 0; c < w; ++c) next(acc.rows(), c) = rows[k][c];
    int r = next.rank();
    if (r > rank) {
      rank = r;
      acc = next;
      keep.push_back(static_cast<int>(k));
    }
  }
  return keep;
}

// F-basis (columns over L) of E_U intersected with E_infinity. Sections of
// the pullback form a K-space stable under iota; the traces of z and w z
// over its K-basis span the descended F-space.
template <class F>
Matrix<LElem<F>> global_sections_c(const BundleC<F>& e) {
  using L = LElem<F>;
  using K = QuadExt<F>;
  const auto& ch = e.chart;
  const int n = e.rank();
  const L zero = l_const(ch->qr.zero(), ch);
  if (n == 0) return Matrix<L>::zeros(0, 0, zero);
  Matrix<KRat<F>> kbasis = global_sections_basis(pullback(e));
  const KRat<F> w(K::gen(ch->kparams));
  std::vector<std::vector<L>> cand;
  for (int b = 0; b < kbasis.cols(); ++b)
    for (int twist = 0; twist < 2; ++twist) {
      std::vector<L> v(n);
      for (int i = 0; i < n; ++i) {
        KRat<F> z = twist ? w * kbasis(i, b) : kbasis(i, b);
        v[i] = descend<F>(trace_to_L(z, ch), ch);
      }
      cand.push_back(std::move(v));
    }
  std::vector<int> keep = independent_subset(ou_coordinates(cand, ch->qr.zero()), ch->qr.zero());
  if (static_cast<int>(keep.size()) != kbasis.cols())
    throw Error(Errc::InternalMismatch, "global sections: descent lost dimension");
  Matrix<L> out = Matrix<L>::zeros(n, static_cast<int>(keep.size()), zero);
  for (size_t b = 0; b < keep.size(); ++b)
    for (int i = 0; i < n; ++i) out(i, static_cast<int>(b)) = cand[keep[b]][i];
  for (int b = 0; b < out.cols(); ++b) {
    Matrix<L> img = e.transition * out.col(b);
    for (int i = 0; i < n; ++i)
      if (!in_Oinf(img(i, 0))) throw Error(Errc::InternalMismatch, "global section is not integral at infinity");
  }
  return out;
}

// dim Gamma predicted by the classification: O(2k) gives max(2k+1, 0) and
// I(d) gives max(d+2, 0), the K-dimension of Gamma of O(d/2)^2.
inline int sections_dim_from_classification(const ConicClassification& c) {
  int d = 0;
  for (const auto& s : c.summands) d += s.rank_two ? std::max(s.degree + 2, 0) : std::max(s.degree + 1, 0);
  return d;
}

template <class F>
int global_sections_dim_c(const BundleC<F>& e) {
  int direct = global_sections_c(e).cols();
  int formula = sections_dim_from_classification(classify(e));
  if (direct != formula)
    throw Error(Errc::InternalMismatch, "conic sections: descent gives " + std::to_string(direct) +
                                            ", classification gives " + std::to_string(formula));
  return direct;
}

// Global endomorphisms with structure constants: basis[a] * basis[b] =
// sum_c mult[a][b][c] basis[c].
template <class F>
struct EndAlgebra {
  std::vector<Matrix<LElem<F>>> basis;
  std::vector<std::vector<std::vector<F>>> mult;
  int dim() const { return static_cast<int>(basis.size()); }
};

// Expresses each target (entries in O_U) in the F-span of the given
// basis; throws if some target lies outside.
template <class F>
std::vector<std::vector<F>> f_coordinates(const std::vector<std::vector<LElem<F>>>& basis,
                                          const std::vector<std::vector<LElem<F>>>& targets, const F& zero) {
  std::vector<std::vector<LElem<F>>> all = basis;
  all.insert(all.end(), targets.begin(), targets.end());
  auto coords = ou_coordinates(all, zero);
  const int m = static_cast<int>(basis.size());
  const int w = coords.empty() ? 0 : static_cast<int>(coords[0].size());
  Matrix<F> a = Matrix<F>::zeros(w, m, zero);
  for (int c = 0; c < m; ++c)
    for (int r = 0; r < w; ++r) a(r, c) = coords[c][r];
  std::vector<std::vector<F>> out;
  for (size_t t = 0; t < targets.size(); ++t) {
    Matrix<F> rhs = Matrix<F>::zeros(w, 1, zero);
    for (int r = 0; r < w; ++r) rhs(r, 0) = coords[m + t][r];
    auto sol = a.solve(rhs);
    if (!sol) throw Error(Errc::InternalMismatch, "element outside the F-span of the basis");
    std::vector<F> col(m, zero);
    for (int c = 0; c < m; ++c) col[c] = (*sol)(c, 0);
    out.push_back(std::move(col));
  }
  return out;
}

// End E is Gamma of the bundle with transition phi -> g phi g^-1, which in
// row-major coordinates is kron(g, g^-T).
template <class F>
EndAlgebra<F> end_algebra(const BundleC<F>& e) {
  using L = LElem<F>;
  const int n = e.rank();
  const F fz = e.chart->qr.zero();
  BundleC<F> hom{kron(e.transition, e.transition.inverse().transpose()), e.chart};
  Matrix<L> sec = global_sections_c(hom);
  EndAlgebra<F> out;
  std::vector<std::vector<L>> flat;
  for (int b = 0; b < sec.cols(); ++b) {
    Matrix<L> phi = Matrix<L>::zeros(n, n, sec.sample());
    std::vector<L> v;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        phi(i, j) = sec(i * n + j, b);
        v.push_back(phi(i, j));
      }
    out.basis.push_back(phi);
    flat.push_back(std::move(v));
  }
  const int m = out.dim();
  std::vector<std::vector<L>> prods;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      Matrix<L> p = out.basis[a] * out.basis[b];
      std::vector<L> v;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) v.push_back(p(i, j));
      prods.push_back(std::move(v));
    }
  auto coords = f_coordinates(flat, prods, fz);
  out.mult.assign(m, std::vector<std::vector<F>>(m));
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) out.mult[a][b] = coords[a * m + b];
  return out;
}

// Dimension of the center, from the structure constants.
template <class F>
int center_dim(const EndAlgebra<F>& alg, const F& zero) {
  const int m = alg.dim();
  if (m == 0) return 0;
  Matrix<F> sys = Matrix<F>::zeros(m * m, m, zero);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c) sys(b * m + c, a) = alg.mult[a][b][c] - alg.mult[b][a][c];
  return sys.kernel().cols();
}

// Quaternion arithmetic with coefficients in L, through the structure
// constants of the basis (1, i, j, ij) over F.
template <class F>
class QuatOverL {
 public:
  using L = LElem<F>;
  using Vec = std::array<L, 4>;
  QuatOverL(const QuatParamsPtr<F>& q, const ChartPtr<F>& ch) : q_(q), ch_(ch) {
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        Quat<F> p = Quat<F>::basis(a, q) * Quat<F>::basis(b, q);
        for (int c = 0; c < 4; ++c) table_[a][b][c] = p.coeff(c);
      }
  }
  Vec lift(const Quat<F>& x) const {
    return {l_const(x.coeff(0), ch_), l_const(x.coeff(1), ch_), l_const(x.coeff(2), ch_), l_const(x.coeff(3), ch_)};
  }
  Vec mul(const Vec& x, const Vec& y) const {
    const L zero = l_const(ch_->qr.zero(), ch_);
    Vec out{zero, zero, zero, zero};
    for (int a = 0; a < 4; ++a) {
      if (x[a].is_zero()) continue;
      for (int b = 0; b < 4; ++b) {
        if (y[b].is_zero()) continue;
        L xy = x[a] * y[b];
        for (int c = 0; c < 4; ++c)
          if (!table_[a][b][c].is_zero()) out[c] += xy * l_const(table_[a][b][c], ch_);
      }
    }
    return out;
  }
  // The generic nilpotent X r + Y s + t of the chart.
  Vec generic_nilpotent() const {
    Vec r = lift(ch_->r), s = lift(ch_->s), t = lift(ch_->t);
    const L x = L::var_x(ch_), y = L::var_y(ch_);
    Vec out;
    for (int c = 0; c < 4; ++c) out[c] = x * r[c] + y * s[c] + t[c];
    return out;
  }
  const ChartPtr<F>& chart() const { return ch_; }

 private:
  QuatParamsPtr<F> q_;
  ChartPtr<F> ch_;
  std::array<std::array<std::array<F, 4>, 4>, 4> table_;
};

// Bundle with a right action of the quaternion algebra: action[k] gives the
// action of the k-th basis element on O_U-coordinates, so that
// (b_j) x = sum_i b_i action_ij.
template <class F>
struct AModuleBundleC {
  BundleC<F> bundle;
  std::vector<Matrix<LElem<F>>> action;
};

// The right action preserves both lattices and is multiplicative:
// action(x y) = action(y) action(x).
template <class F>
bool verify_action(const AModuleBundleC<F>& m, const QuatParamsPtr<F>& q) {
  using L = LElem<F>;
  const auto& g = m.bundle.transition;
  const Matrix<L> ginv = g.inverse();
  for (const auto& a : m.action) {
    Matrix<L> at_inf = g * a * ginv;
    for (int i = 0; i < a.rows(); ++i)
      for (int j = 0; j < a.cols(); ++j)
        if (!in_OU(a(i, j)) || !in_Oinf(at_inf(i, j))) return false;
  }
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y) {
      Quat<F> p = Quat<F>::basis(x, q) * Quat<F>::basis(y, q);
      Matrix<L> lhs = Matrix<L>::zeros(m.bundle.rank(), m.bundle.rank(), g.sample());
      for (int c = 0; c < 4; ++c)
        if (!p.coeff(c).is_zero()) lhs = lhs + m.action[c].scaled(l_const(p.coeff(c), m.bundle.chart));
      if (!(lhs == m.action[y] * m.action[x])) return false;
    }
  return true;
}

// Coordinates of the columns of vs in the L-basis (columns of basis).
template <class F>
Matrix<LElem<F>> coordinates_in(const Matrix<LElem<F>>& basis, const Matrix<LElem<F>>& vs) {
  auto sol = basis.solve(vs);
  if (!sol) throw Error(Errc::InternalMismatch, "vector outside the span of the basis");
  return *sol;
}

// The ideal e Q_L for the generic nilpotent e, with O_U-basis (er, es),
// O_infinity-basis (e r / Y, e t / Y) and transition [[Y, -X], [0, -1]].
template <class F>
AModuleBundleC<F> tautological_bundle(const ChartPtr<F>& ch) {
  using L = LElem<F>;
  QuatOverL<F> ql(ch->algebra, ch);
  auto e = ql.generic_nilpotent();
  auto er = ql.mul(e, ql.lift(ch->r)), es = ql.mul(e, ql.lift(ch->s));
  const L zero = l_const(ch->qr.zero(), ch);
  Matrix<L> fiber = Matrix<L>::zeros(4, 2, zero);
  for (int c = 0; c < 4; ++c) {
    fiber(c, 0) = er[c];
    fiber(c, 1) = es[c];
  }
  const L x = L::var_x(ch), y = L::var_y(ch);
  AModuleBundleC<F> out{{Matrix<L>::from_rows({{y, -x}, {zero, -x.one()}}), ch}, {}};
  for (int k = 0; k < 4; ++k) {
    auto qk = ql.lift(Quat<F>::basis(k, ch->algebra));
    Matrix<L> img = Matrix<L>::zeros(4, 2, zero);
    for (int j = 0; j < 2; ++j) {
      auto v = ql.mul(j == 0 ? er : es, qk);
      for (int c = 0; c < 4; ++c) img(c, j) = v[c];
    }
    out.action.push_back(coordinates_in(fiber, img));
  }
  return out;
}

}  // namespace conex
