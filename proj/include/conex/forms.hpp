// Copyright 2026 The conex authors.
// Licensed under the Apache License, Version 2.0.
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "conex/conic.hpp"
#include "conex/fp.hpp"
#include "conex/matrix.hpp"
#include "conex/quaternion.hpp"

namespace conex {

// A field is an algebra of dimension 1 over itself; a quaternion algebra
// has dimension 4 over its center with basis (1, i, j, ij).
template <class A>
struct AlgebraTraits {
  using Center = A;
  static constexpr int dim = 1;
  static std::vector<A> coords(const A& a) { return {a}; }
  static A from_coords(const std::vector<A>& c, size_t off, const A&) { return c[off]; }
  static A basis(int, const A& sample) { return sample.one(); }
  static A lift(const A& z, const A&) { return z; }
};

template <class Z>
struct AlgebraTraits<Quat<Z>> {
  using Center = Z;
  static constexpr int dim = 4;
  static std::vector<Z> coords(const Quat<Z>& a) { return {a.coeff(0), a.coeff(1), a.coeff(2), a.coeff(3)}; }
  static Quat<Z> from_coords(const std::vector<Z>& c, size_t off, const Quat<Z>& sample) {
    return Quat<Z>({c[off], c[off + 1], c[off + 2], c[off + 3]}, sample.params());
  }
  static Quat<Z> basis(int k, const Quat<Z>& sample) { return Quat<Z>::basis(k, sample.params()); }
  static Quat<Z> lift(const Z& z, const Quat<Z>& sample) { return Quat<Z>::scalar(z, sample.params()); }
};

template <class A>
using CenterOf = typename AlgebraTraits<A>::Center;

enum class InvolutionKind { Identity, Conjugation, Orthogonal };

// Involution of the first kind. Orthogonal involutions on a quaternion
// algebra are x -> v conj(x) v^-1 for an invertible pure v.
template <class A>
struct Involution {
  InvolutionKind kind = InvolutionKind::Identity;
  A sample;  // zero of A, carrying its parameters
  A v;

  // eps = 1 for orthogonal involutions, -1 for symplectic ones.
  int eps() const { return kind == InvolutionKind::Conjugation ? -1 : 1; }
  A operator()(const A& x) const {
    if constexpr (AlgebraTraits<A>::dim == 1) {
      return x;
    } else {
      if (kind == InvolutionKind::Conjugation) return x.conj();
      return v * x.conj() * v.inv();
    }
  }
  std::string name() const {
    switch (kind) {
      case InvolutionKind::Identity:
        return "id";
      case InvolutionKind::Conjugation:
        return "conj";
      default:
        return "orth(" + v.str() + ")";
    }
  }
};

template <class A>
Involution<A> identity_involution(const A& sample) {
  static_assert(AlgebraTraits<A>::dim == 1, "the identity is an involution only on a field");
  return {InvolutionKind::Identity, sample.zero(), sample.zero()};
}
template <class Z>
Involution<Quat<Z>> conjugation(const Quat<Z>& sample) {
  return {InvolutionKind::Conjugation, sample.zero(), sample.zero()};
}
template <class Z>
Involution<Quat<Z>> orthogonal_involution(const Quat<Z>& v) {
  if (!v.trd().is_zero() || v.nrd().is_zero() || v.is_scalar())
    throw Error(Errc::InvalidArgument, "orthogonal involution needs an invertible pure quaternion");
  return {InvolutionKind::Orthogonal, v.zero(), v};
}

namespace detail {

template <class A>
CenterOf<A> center_zero(const A& sample) {
  return AlgebraTraits<A>::coords(sample.zero())[0].zero();
}

// Center coordinates of an n x 1 column: entry i occupies [i*dim, (i+1)*dim).
template <class A>
std::vector<CenterOf<A>> flatten_col(const Matrix<A>& x) {
  std::vector<CenterOf<A>> out;
  for (int i = 0; i < x.rows(); ++i)
    for (auto& c : AlgebraTraits<A>::coords(x(i, 0))) out.push_back(c);
  return out;
}

template <class A>
Matrix<A> unflatten_col(const std::vector<CenterOf<A>>& v, int n, const A& sample) {
  constexpr int d = AlgebraTraits<A>::dim;
  Matrix<A> x = Matrix<A>::zeros(n, 1, sample);
  for (int i = 0; i < n; ++i) x(i, 0) = AlgebraTraits<A>::from_coords(v, static_cast<size_t>(i) * d, sample);
  return x;
}

// Matrix over the center of y -> a y.
template <class A>
Matrix<CenterOf<A>> left_mult(const A& a) {
  constexpr int d = AlgebraTraits<A>::dim;
  Matrix<CenterOf<A>> m = Matrix<CenterOf<A>>::zeros(d, d, center_zero(a));
  for (int k = 0; k < d; ++k) {
    auto c = AlgebraTraits<A>::coords(a * AlgebraTraits<A>::basis(k, a));
    for (int i = 0; i < d; ++i) m(i, k) = c[i];
  }
  return m;
}

// Matrix over the center of x -> R x for x in A^n.
template <class A>
Matrix<CenterOf<A>> flat_operator(const Matrix<A>& r) {
  constexpr int d = AlgebraTraits<A>::dim;
  Matrix<CenterOf<A>> m = Matrix<CenterOf<A>>::zeros(r.rows() * d, r.cols() * d, center_zero(r.sample()));
  for (int i = 0; i < r.rows(); ++i)
    for (int j = 0; j < r.cols(); ++j)
      if (!r(i, j).is_zero()) m.set_block(i * d, j * d, left_mult(r(i, j)));
  return m;
}

}  // namespace detail

// Subspace over the center in echelon form, for membership tests.
template <class Z>
class ZSpace {
 public:
  ZSpace(int width, const Z& zero) : width_(width), zero_(zero) {}
  int dim() const { return static_cast<int>(rows_.size()); }
  bool contains(const std::vector<Z>& v) const { return pivot_of(reduce(v)) < 0; }
  // Adds v; returns false if it was already in the span.
  bool add(const std::vector<Z>& v) {
    auto r = reduce(v);
    int p = pivot_of(r);
    if (p < 0) return false;
    Z inv = r[p].inv();
    for (auto& x : r) x *= inv;
    rows_.push_back(std::move(r));
    piv_.push_back(p);
    return true;
  }
  // Normal form modulo the span: zero at every pivot.
  std::vector<Z> reduce(std::vector<Z> v) const {
    for (size_t k = 0; k < rows_.size(); ++k) {
      if (v[piv_[k]].is_zero()) continue;
      Z f = v[piv_[k]];
      for (int c = 0; c < width_; ++c)
        if (!rows_[k][c].is_zero()) v[c] -= f * rows_[k][c];
    }
    return v;
  }

 private:
  int pivot_of(const std::vector<Z>& v) const {
    for (int c = 0; c < width_; ++c)
      if (!v[c].is_zero()) return c;
    return -1;
  }
  int width_;
  Z zero_;
  std::vector<std::vector<Z>> rows_;
  std::vector<int> piv_;
};

namespace detail {

// Center coordinates of the right A-span of the columns.
template <class A>
std::vector<std::vector<CenterOf<A>>> right_span_vectors(const Matrix<A>& cols) {
  constexpr int d = AlgebraTraits<A>::dim;
  std::vector<std::vector<CenterOf<A>>> out;
  for (int j = 0; j < cols.cols(); ++j)
    for (int k = 0; k < d; ++k) {
      Matrix<A> c = cols.col(j);
      const A bk = AlgebraTraits<A>::basis(k, cols.sample());
      for (int i = 0; i < c.rows(); ++i) c(i, 0) = c(i, 0) * bk;
      out.push_back(flatten_col(c));
    }
  return out;
}

template <class A>
ZSpace<CenterOf<A>> span_of(const Matrix<A>& cols, int n) {
  ZSpace<CenterOf<A>> s(n * AlgebraTraits<A>::dim, center_zero(cols.sample()));
  for (auto& v : right_span_vectors(cols)) s.add(v);
  return s;
}

// Greedy A-basis of the right A-span of candidate vectors, skipping what
// already lies in `span` (which is extended in place).
template <class A>
Matrix<A> extend_a_basis(const std::vector<std::vector<CenterOf<A>>>& cand, int n, const A& sample,
                         ZSpace<CenterOf<A>>& span) {
  Matrix<A> out = Matrix<A>::zeros(n, 0, sample);
  for (const auto& z : cand) {
    if (span.contains(z)) continue;
    Matrix<A> col = unflatten_col(z, n, sample);
    for (auto& v : right_span_vectors(col)) span.add(v);
    out = hcat(out, col);
  }
  return out;
}

}  // namespace detail

// sw(B) = conjugate transpose with respect to the involution.
template <class A>
Matrix<A> sw(const Matrix<A>& b, const Involution<A>& inv) {
  Matrix<A> out = Matrix<A>::zeros(b.cols(), b.rows(), b.sample());
  for (int i = 0; i < b.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j) out(j, i) = inv(b(i, j));
  return out;
}

template <class A>
Matrix<A> signed_sw(const Matrix<A>& b, const Involution<A>& inv, int sign) {
  Matrix<A> s = sw(b, inv);
  return sign > 0 ? s : -s;
}

template <class A>
Matrix<A> hermitianize(const Matrix<A>& b, const Involution<A>& inv) {
  return b + signed_sw(b, inv, inv.eps());
}

template <class A>
bool is_hermitian(const Matrix<A>& h, const Involution<A>& inv, int delta) {
  return h.square() && signed_sw(h, inv, delta) == h;
}

// Coset B + Alt(eps sw) with Alt(eps sw) = { C - eps sw(C) }. The
// representative is the normal form modulo an echelon basis of Alt whose
// coordinates list strictly lower entries first, then the diagonal, then
// the upper entries; over a field with the identity this is the upper
// triangular matrix with B_ij + B_ji above the diagonal.
template <class A>
class QuadClass {
 public:
  using Z = CenterOf<A>;
  QuadClass() = default;
  QuadClass(const Matrix<A>& b, const Involution<A>& inv) : inv_(inv) {
    if (!b.square()) throw Error(Errc::InvalidArgument, "quadratic class of a non-square matrix");
    rep_ = canonical(b, inv);
  }

  const Matrix<A>& rep() const { return rep_; }
  const Involution<A>& involution() const { return inv_; }
  int rank() const { return rep_.rows(); }
  bool is_zero() const { return rep_.is_zero(); }
  Matrix<A> hermitianized() const { return hermitianize(rep_, inv_); }
  friend bool operator==(const QuadClass& a, const QuadClass& b) { return a.rep_ == b.rep_; }

  static Matrix<A> canonical(const Matrix<A>& b, const Involution<A>& inv) {
    const int n = b.rows();
    const A sample = b.sample();
    const auto order = positions(n);
    auto flat = [&](const Matrix<A>& m) {
      std::vector<Z> v;
      for (auto [i, j] : order)
        for (auto& c : AlgebraTraits<A>::coords(m(i, j))) v.push_back(c);
      return v;
    };
    constexpr int d = AlgebraTraits<A>::dim;
    ZSpace<Z> alt(n * n * d, detail::center_zero(sample));
    for (auto [i, j] : order)
      for (int k = 0; k < d; ++k) {
        Matrix<A> c = Matrix<A>::zeros(n, n, sample);
        c(i, j) = AlgebraTraits<A>::basis(k, sample);
        alt.add(flat(c - signed_sw(c, inv, inv.eps())));
      }
    auto red = alt.reduce(flat(b));
    Matrix<A> out = Matrix<A>::zeros(n, n, sample);
    for (size_t p = 0; p < order.size(); ++p)
      out(order[p].first, order[p].second) = AlgebraTraits<A>::from_coords(red, p * d, sample);
    return out;
  }

 private:
  static std::vector<std::pair<int, int>> positions(int n) {
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < i; ++j) out.emplace_back(i, j);
    for (int i = 0; i < n; ++i) out.emplace_back(i, i);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) out.emplace_back(i, j);
    return out;
  }

  Matrix<A> rep_;
  Involution<A> inv_;
};

// A nonsingular candidate form on A^n: a quadratic class, or a
// delta-hermitian Gram matrix.
template <class A>
struct Form {
  enum class Kind { Quadratic, Hermitian };
  Kind kind = Kind::Quadratic;
  Matrix<A> gram;  // canonical representative for quadratic classes
  Involution<A> inv;
  int delta = 1;

  static Form quadratic(const Matrix<A>& b, const Involution<A>& inv) {
    return {Kind::Quadratic, QuadClass<A>(b, inv).rep(), inv, inv.eps()};
  }
  static Form hermitian(const Matrix<A>& h, const Involution<A>& inv, int delta) {
    if (!is_hermitian(h, inv, delta)) throw Error(Errc::InvalidArgument, "Gram matrix is not hermitian");
    return {Kind::Hermitian, h, inv, delta};
  }
  bool is_quadratic() const { return kind == Kind::Quadratic; }
  int rank() const { return gram.rows(); }
  // The hermitian form attached: beta(q) or h itself.
  Matrix<A> polar() const { return is_quadratic() ? hermitianize(gram, inv) : gram; }
  // The form on the columns of v, with the same kind.
  Form restrict_to(const Matrix<A>& v) const {
    Matrix<A> g = sw(v, inv) * gram * v;
    if (is_quadratic()) return quadratic(g, inv);
    return {kind, g, inv, delta};
  }
  bool is_zero() const { return gram.is_zero(); }
  friend bool operator==(const Form& a, const Form& b) { return a.kind == b.kind && a.gram == b.gram; }
};

template <class A>
bool is_nonsingular_matrix(const Matrix<A>& h) {
  if (h.rows() == 0) return true;
  return detail::flat_operator(h).rank() == h.rows() * AlgebraTraits<A>::dim;
}

template <class A>
bool is_nonsingular(const Form<A>& f) {
  return is_nonsingular_matrix(f.polar());
}

// Basis of N^perp = { y : h(n, y) = 0 for n in N } for a hermitian (or
// polar) Gram matrix h.
template <class A>
Matrix<A> orthogonal_submodule(const Matrix<A>& h, const Matrix<A>& n, const Involution<A>& inv) {
  const int dim = h.rows();
  const A sample = h.sample();
  ZSpace<CenterOf<A>> empty(dim * AlgebraTraits<A>::dim, detail::center_zero(sample));
  std::vector<std::vector<CenterOf<A>>> cand;
  if (n.cols() == 0) {
    Matrix<A> id = Matrix<A>::identity(dim, sample);
    for (int j = 0; j < dim; ++j) cand.push_back(detail::flatten_col(id.col(j)));
    return detail::extend_a_basis(cand, dim, sample, empty);
  }
  Matrix<CenterOf<A>> sys = detail::flat_operator(Matrix<A>(sw(n, inv) * h));
  Matrix<CenterOf<A>> ker = sys.kernel();
  for (int j = 0; j < ker.cols(); ++j) {
    std::vector<CenterOf<A>> v(ker.rows(), detail::center_zero(sample));
    for (int i = 0; i < ker.rows(); ++i) v[i] = ker(i, j);
    cand.push_back(std::move(v));
  }
  return detail::extend_a_basis(cand, dim, sample, empty);
}

// Columns of `outer` completing the basis of `inner` to one of the span
// of inner and outer.
template <class A>
Matrix<A> complement_basis(const Matrix<A>& inner, const Matrix<A>& outer) {
  ZSpace<CenterOf<A>> span = detail::span_of(inner, outer.rows());
  std::vector<std::vector<CenterOf<A>>> cand;
  for (int j = 0; j < outer.cols(); ++j) cand.push_back(detail::flatten_col(outer.col(j)));
  return detail::extend_a_basis(cand, outer.rows(), outer.sample(), span);
}

// Some X with X + sign sw(X) = g, by linear algebra over the center.
template <class A>
std::optional<Matrix<A>> solve_sw(const Matrix<A>& g, const Involution<A>& inv, int sign) {
  constexpr int d = AlgebraTraits<A>::dim;
  const int k = g.rows();
  const A sample = g.sample();
  using Z = CenterOf<A>;
  const Z zz = detail::center_zero(sample);
  if (k == 0) return g;
  auto flat = [&](const Matrix<A>& m) {
    std::vector<Z> v;
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j)
        for (auto& c : AlgebraTraits<A>::coords(m(i, j))) v.push_back(c);
    return v;
  };
  const int w = k * k * d;
  Matrix<Z> sys = Matrix<Z>::zeros(w, w, zz);
  int col = 0;
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      for (int l = 0; l < d; ++l, ++col) {
        Matrix<A> c = Matrix<A>::zeros(k, k, sample);
        c(i, j) = AlgebraTraits<A>::basis(l, sample);
        auto v = flat(c + signed_sw(c, inv, sign));
        for (int r = 0; r < w; ++r) sys(r, col) = v[r];
      }
  Matrix<Z> rhs = Matrix<Z>::zeros(w, 1, zz);
  auto gv = flat(g);
  for (int r = 0; r < w; ++r) rhs(r, 0) = gv[r];
  auto sol = sys.solve(rhs);
  if (!sol) return std::nullopt;
  Matrix<A> x = Matrix<A>::zeros(k, k, sample);
  std::vector<Z> sv(w, zz);
  for (int r = 0; r < w; ++r) sv[r] = (*sol)(r, 0);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) x(i, j) = AlgebraTraits<A>::from_coords(sv, static_cast<size_t>(i * k + j) * d, sample);
  return x;
}

template <class A>
struct Reduction {
  Form<A> form;          // on the complement basis, representing N^perp / N
  Matrix<A> complement;  // W with N^perp = N + W
  Matrix<A> perp;        // basis of N^perp
};

// Reduction of a hermitian form at a totally isotropic N.
template <class A>
Reduction<A> reduce_hermitian(const Form<A>& h, const Matrix<A>& n) {
  if (h.is_quadratic()) throw Error(Errc::InvalidArgument, "reduce_hermitian needs a hermitian form");
  if (!(sw(n, h.inv) * h.gram * n).is_zero()) throw Error(Errc::NotIsotropic, "submodule is not totally isotropic");
  Matrix<A> perp = orthogonal_submodule(h.gram, n, h.inv);
  Matrix<A> w = complement_basis(n, perp);
  return {h.restrict_to(w), w, perp};
}

// Optional perturbations of the two choices in the quadratic reduction:
// the complement W becomes W + N shift, and c becomes c + t + eps sw(t).
template <class A>
struct ReductionChoices {
  std::optional<Matrix<A>> complement_shift;
  std::optional<Matrix<A>> c_shift;
};

// Reduction of a quadratic class at a totally isotropic N. With basis
// (N, W) of N^perp and b|_N = c - eps sw(c), the form
//   b1(x, y) = b(x, pi y) - c(pi x, pi y)
// for the projection pi onto N makes b - (b1 - eps sw(b1)) vanish on
// N x N^perp and N^perp x N; what remains is its W x W block.
template <class A>
Reduction<A> reduce_quadratic(const Form<A>& q, const Matrix<A>& n, const ReductionChoices<A>& choices = {}) {
  if (!q.is_quadratic()) throw Error(Errc::InvalidArgument, "reduce_quadratic needs a quadratic class");
  const auto& inv = q.inv;
  const int eps = inv.eps();
  const A sample = q.gram.sample();
  if (!QuadClass<A>(sw(n, inv) * q.gram * n, inv).is_zero())
    throw Error(Errc::NotIsotropic, "submodule is not totally isotropic for the quadratic class");
  Matrix<A> perp = orthogonal_submodule(q.polar(), n, inv);
  Matrix<A> w = complement_basis(n, perp);
  if (choices.complement_shift) w = w + n * *choices.complement_shift;
  const int k = n.cols(), m = w.cols();
  Matrix<A> basis = hcat(n, w);
  Matrix<A> g = sw(basis, inv) * q.gram * basis;
  Matrix<A> gnn = g.block(0, 0, k, k);
  auto c = solve_sw(gnn, inv, -eps);
  if (!c) throw Error(Errc::NotIsotropic, "restriction to N is not alternating");
  if (choices.c_shift) *c = *c + *choices.c_shift + signed_sw(*choices.c_shift, inv, eps);
  Matrix<A> b1 = Matrix<A>::zeros(k + m, k + m, sample);
  b1.set_block(0, 0, gnn - *c);
  b1.set_block(k, 0, g.block(k, 0, m, k));
  Matrix<A> b2 = g - (b1 - signed_sw(b1, inv, eps));
  for (int i = 0; i < k + m; ++i)
    for (int j = 0; j < k + m; ++j)
      if ((i < k || j < k) && !b2(i, j).is_zero())
        throw Error(Errc::InternalMismatch, "reduced form does not vanish on N");
  return {Form<A>::quadratic(b2.block(k, k, m, m), inv), w, perp};
}

template <class A>
Reduction<A> reduce_form(const Form<A>& f, const Matrix<A>& n) {
  return f.is_quadratic() ? reduce_quadratic(f, n) : reduce_hermitian(f, n);
}

// ---- isotropy search ----

inline std::vector<Rational> search_values(const Rational&, int bound) {
  std::vector<Rational> out{Rational(0)};
  for (int k = 1; k <= bound; ++k) {
    out.push_back(Rational(k));
    out.push_back(Rational(-k));
  }
  return out;
}
inline std::vector<Fp> search_values(const Fp& s, int) {
  std::vector<Fp> out;
  for (uint32_t k = 0; k < s.modulus(); ++k) out.emplace_back(static_cast<long>(k), s.modulus());
  return out;
}
template <char V>
std::vector<RatFunc<Fp, V>> search_values(const RatFunc<Fp, V>& s, int bound) {
  const Fp z = s.zero_elem();
  std::vector<RatFunc<Fp, V>> out{RatFunc<Fp, V>(z)};
  std::vector<Fp> digits = search_values(z, 0);
  // polynomials of degree <= bound, in order of the coefficient tuple
  std::vector<int> idx(bound + 1, 0);
  const int p = static_cast<int>(z.modulus());
  for (;;) {
    int pos = 0;
    while (pos <= bound && ++idx[pos] == p) idx[pos++] = 0;
    if (pos > bound) break;
    std::vector<Fp> c;
    for (int i = 0; i <= bound; ++i) c.push_back(digits[idx[i]]);
    out.emplace_back(Poly<Fp, V>(c, z));
  }
  return out;
}
// F-combinations with coefficients 0, 1, -1 of X^a (a <= bound) and
// X^a Y (a < bound): elements with pole order at most bound at infinity.
template <class F>
std::vector<LElem<F>> search_values(const LElem<F>& s, int bound) {
  const auto& ch = s.chart();
  const F one = ch->qr.one();
  std::vector<F> coeffs{one.zero(), one};
  if (!(-one == one)) coeffs.push_back(-one);
  std::vector<LElem<F>> monos;
  LElem<F> xp = LElem<F>::constant(one, ch), x = LElem<F>::var_x(ch), y = LElem<F>::var_y(ch);
  for (int a = 0; a <= bound; ++a, xp = xp * x) {
    monos.push_back(xp);
    if (a < bound) monos.push_back(xp * y);
  }
  std::vector<LElem<F>> out;
  std::vector<size_t> idx(monos.size(), 0);
  for (;;) {
    LElem<F> v = LElem<F>::constant(one.zero(), ch);
    for (size_t m = 0; m < monos.size(); ++m)
      if (idx[m]) v += LElem<F>::constant(coeffs[idx[m]], ch) * monos[m];
    out.push_back(v);
    size_t pos = 0;
    while (pos < monos.size() && ++idx[pos] == coeffs.size()) idx[pos++] = 0;
    if (pos == monos.size()) break;
  }
  return out;
}

inline bool search_is_exhaustive(const Fp&) { return true; }
template <class Z>
bool search_is_exhaustive(const Z&) {
  return false;
}

template <class A>
struct SearchOutcome {
  std::optional<Matrix<A>> vector;  // n x 1
  bool exhaustive = false;
  long candidates = 0;
  bool capped = false;
};

namespace detail {

template <class Z>
std::string key_string(const std::vector<Z>& v) {
  std::string s;
  for (const auto& x : v) {
    s += x.str();
    s += '|';
  }
  return s;
}

}  // namespace detail

// Searches x in A^n with f(x, x) = 0 in the value space, polar(n, x) = 0
// for the columns n of `current`, and x outside the span of `current`.
// Center coordinates range over search_values(bound). Coordinates are
// split in two halves without cross terms and matched through a hash of
// the partial values; the first match in lexicographic order of value
// indices is returned.
template <class A>
SearchOutcome<A> find_isotropic(const Form<A>& f, const Matrix<A>& current, int bound, long cap = 4000000) {
  using Z = CenterOf<A>;
  constexpr int d = AlgebraTraits<A>::dim;
  const int n = f.rank();
  const int m = n * d;
  const A sample = f.gram.sample();
  const Z zz = detail::center_zero(sample);
  SearchOutcome<A> out;
  if (m == 0) {
    out.exhaustive = true;
    return out;
  }
  const Matrix<A> pol = f.polar();
  auto unit = [&](int a) {
    std::vector<Z> v(m, zz);
    v[a] = zz.one();
    return detail::unflatten_col(v, n, sample);
  };
  auto value = [&](const Matrix<A>& x) {
    Matrix<A> v = sw(x, f.inv) * f.gram * x;
    if (f.is_quadratic()) v = QuadClass<A>(v, f.inv).rep();
    return AlgebraTraits<A>::coords(v(0, 0));
  };
  auto linear = [&](const Matrix<A>& x) {
    std::vector<Z> v;
    for (int c = 0; c < current.cols(); ++c) {
      Matrix<A> p = sw(current.col(c), f.inv) * pol * x;
      for (auto& z : AlgebraTraits<A>::coords(p(0, 0))) v.push_back(z);
    }
    return v;
  };
  auto sub = [](std::vector<Z> a, const std::vector<Z>& b) {
    for (size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
    return a;
  };
  std::vector<std::vector<Z>> diag(m), lin(m);
  std::vector<std::vector<std::vector<Z>>> cross(m, std::vector<std::vector<Z>>(m));
  for (int a = 0; a < m; ++a) {
    diag[a] = value(unit(a));
    lin[a] = linear(unit(a));
  }
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b) cross[a][b] = sub(sub(value(unit(a) + unit(b)), diag[a]), diag[b]);
  auto is_zero_vec = [](const std::vector<Z>& v) {
    for (auto& x : v)
      if (!x.is_zero()) return false;
    return true;
  };
  auto separable_at = [&](int h) {
    for (int a = 0; a < h; ++a)
      for (int b = h; b < m; ++b)
        if (!is_zero_vec(cross[a][b])) return false;
    return true;
  };
  int split = m;
  for (int off = 0; off < m && split == m; ++off)
    for (int h : {m / 2 - off, m / 2 + off + (m % 2)})
      if (h > 0 && h < m && separable_at(h)) {
        split = h;
        break;
      }

  const std::vector<Z> vals = search_values(zz, bound);
  const size_t nv = vals.size();
  out.exhaustive = search_is_exhaustive(zz);
  auto count = [&](int len) {
    double c = 1;
    for (int i = 0; i < len; ++i) c *= static_cast<double>(nv);
    return c;
  };
  if (count(split) + count(m - split) > static_cast<double>(cap)) {
    out.capped = true;
    out.exhaustive = false;
    return out;
  }
  const int vdim = static_cast<int>(diag[0].size()), ldim = static_cast<int>(lin[0].size());
  // Partial key of the coordinates [lo, hi) set to vals[idx].
  auto partial = [&](const std::vector<size_t>& idx, int lo) {
    std::vector<Z> key(vdim + ldim, zz);
    const int len = static_cast<int>(idx.size());
    for (int a = 0; a < len; ++a) {
      if (idx[a] == 0) continue;
      const Z& xa = vals[idx[a]];
      const Z sq = xa * xa;
      for (int c = 0; c < vdim; ++c)
        if (!diag[lo + a][c].is_zero()) key[c] += sq * diag[lo + a][c];
      for (int c = 0; c < ldim; ++c)
        if (!lin[lo + a][c].is_zero()) key[vdim + c] += xa * lin[lo + a][c];
      for (int b = a + 1; b < len; ++b) {
        if (idx[b] == 0) continue;
        const auto& cr = cross[lo + a][lo + b];
        if (is_zero_vec(cr)) continue;
        const Z xy = xa * vals[idx[b]];
        for (int c = 0; c < vdim; ++c)
          if (!cr[c].is_zero()) key[c] += xy * cr[c];
      }
    }
    return key;
  };
  auto odometer = [&](std::vector<size_t>& idx) {
    // last coordinate varies fastest: lexicographic order on index tuples
    for (int pos = static_cast<int>(idx.size()) - 1; pos >= 0; --pos) {
      if (++idx[pos] < nv) return true;
      idx[pos] = 0;
    }
    return false;
  };

  ZSpace<Z> span = detail::span_of(current, n);
  std::unordered_map<std::string, std::vector<std::vector<size_t>>> table;
  std::vector<size_t> ib(m - split, 0);
  do {
    auto key = partial(ib, split);
    for (auto& x : key) x = -x;
    table[detail::key_string(key)].push_back(ib);
    ++out.candidates;
  } while (odometer(ib));
  std::vector<size_t> ia(split, 0);
  do {
    ++out.candidates;
    auto it = table.find(detail::key_string(partial(ia, 0)));
    if (it == table.end()) continue;
    for (const auto& jb : it->second) {
      std::vector<Z> x(m, zz);
      bool nonzero = false;
      for (int a = 0; a < split; ++a) {
        x[a] = vals[ia[a]];
        nonzero = nonzero || ia[a] != 0;
      }
      for (int b = split; b < m; ++b) {
        x[b] = vals[jb[b - split]];
        nonzero = nonzero || jb[b - split] != 0;
      }
      if (!nonzero || span.contains(x)) continue;
      out.vector = detail::unflatten_col(x, n, sample);
      return out;
    }
  } while (odometer(ia));
  return out;
}

// ---- anisotropy certificates over the base field ----

inline bool is_rational_square(const Rational& x) {
  if (x.sign() < 0) return false;
  if (x.is_zero()) return true;
  mpz_class n = x.num(), d = x.den();
  return mpz_perfect_square_p(n.get_mpz_t()) != 0 && mpz_perfect_square_p(d.get_mpz_t()) != 0;
}

// Sign pattern of a symmetric rational matrix: +1 positive definite, -1
// negative definite, 0 otherwise. Symmetric Gaussian elimination.
inline int definiteness(Matrix<Rational> s) {
  const int n = s.rows();
  int sign = 0;
  for (int k = 0; k < n; ++k) {
    const Rational p = s(k, k);
    int sg = p.sign();
    if (sg == 0 || (sign != 0 && sg != sign)) return 0;
    sign = sg;
    for (int i = k + 1; i < n; ++i) {
      if (s(i, k).is_zero()) continue;
      Rational f = s(i, k) / p;
      for (int j = k; j < n; ++j) s(i, j) -= f * s(k, j);
    }
  }
  return sign;
}

// Reason why a form over the base field is anisotropic, if one of the
// implemented certificates applies.
template <class A>
std::optional<std::string> anisotropy_certificate(const Form<A>& f) {
  using Z = CenterOf<A>;
  const int n = f.rank();
  if (n == 0) return "rank 0";
  if constexpr (AlgebraTraits<A>::dim == 1) {
    if (!f.is_quadratic() || f.gram(0, 0).characteristic() == 2) return std::nullopt;
    if (n == 1) return "rank 1 with nonzero value";
    if constexpr (std::is_same_v<Z, Rational>) {
      Matrix<Rational> s = f.polar();
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s(i, j) = s(i, j) / Rational(2);
      int sg = definiteness(s);
      if (sg > 0) return "positive definite";
      if (sg < 0) return "negative definite";
      if (n == 2 && !is_rational_square(-s.det())) return "rank 2 with -det not a square";
    }
    return std::nullopt;
  } else {
    if constexpr (std::is_same_v<Z, Rational>) {
      if (n == 1 && !f.is_quadratic() && division_status(f.gram.sample().params()) == DivisionStatus::Division)
        return "rank 1 over a division algebra";
    }
    return std::nullopt;
  }
}

template <class A>
struct WittDecomposition {
  Form<A> kernel;        // on the basis `complement`
  Matrix<A> isotropic;   // basis of the maximal totally isotropic submodule found
  Matrix<A> complement;  // basis of a complement of it in its orthogonal
  int index = 0;
  bool certified = false;
  std::vector<std::string> transcript;
};

// Greedy enlargement of a totally isotropic submodule by search, then one
// reduction at the result.
template <class A>
WittDecomposition<A> witt_decompose(const Form<A>& f, int bound) {
  const A sample = f.gram.sample();
  if (!is_nonsingular(f)) throw Error(Errc::SingularInput, "witt_decompose needs a nonsingular form");
  WittDecomposition<A> out;
  Matrix<A> n = Matrix<A>::zeros(f.rank(), 0, sample);
  bool exhaustive = true;
  for (;;) {
    auto found = find_isotropic(f, n, bound);
    exhaustive = found.exhaustive;
    out.transcript.push_back("search over " + std::to_string(found.candidates) + " candidates" +
                             (found.capped ? " (capped)" : "") +
                             (found.vector ? ": isotropic vector found" : ": none found"));
    if (!found.vector) break;
    n = hcat(n, *found.vector);
  }
  out.isotropic = n;
  out.index = n.cols();
  if (n.cols() == 0) {
    out.kernel = f;
    out.complement = Matrix<A>::identity(f.rank(), sample);
  } else {
    Reduction<A> red = reduce_form(f, n);
    out.kernel = red.form;
    out.complement = red.complement;
  }
  if (exhaustive) {
    out.certified = true;
    out.transcript.push_back("anisotropic: exhaustive search over the finite field");
  } else if (auto why = anisotropy_certificate(out.kernel)) {
    out.certified = true;
    out.transcript.push_back("anisotropic: " + *why);
  } else {
    out.transcript.push_back("anisotropy not certified: search limited at bound " + std::to_string(bound));
  }
  return out;
}

// ---- Goldman element ----

// Pairs (a_i, b_i) with sum a_i x b_i = Trd(x), from the dual basis of the
// reduced trace form; trace_one has reduced trace 1.
template <class E>
struct GoldmanElement {
  std::vector<E> left, right;
  E trace_one;
};

template <class E, class Z, class Mul, class Add, class Scale, class Trd>
GoldmanElement<E> goldman_from_basis(const std::vector<E>& basis, const Z& zero, Mul mul, Add add, Scale scale,
                                     Trd trd) {
  const int n = static_cast<int>(basis.size());
  Matrix<Z> t = Matrix<Z>::zeros(n, n, zero);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) t(i, k) = trd(mul(basis[i], basis[k]));
  auto tinv = t.try_inverse();
  if (!tinv) throw Error(Errc::SingularInput, "reduced trace form is degenerate");
  GoldmanElement<E> g;
  for (int i = 0; i < n; ++i) {
    // dual basis: Trd(a_i b_k) = [i == k]
    E b = scale((*tinv)(0, i), basis[0]);
    for (int l = 1; l < n; ++l) b = add(b, scale((*tinv)(l, i), basis[l]));
    g.left.push_back(basis[i]);
    g.right.push_back(b);
  }
  bool found = false;
  for (const E& a : basis) {
    Z tr = trd(a);
    if (tr.is_zero()) continue;
    g.trace_one = scale(tr.inv(), a);
    found = true;
    break;
  }
  if (!found) throw Error(Errc::NoTraceOne, "no element of reduced trace one");
  return g;
}

template <class Z>
GoldmanElement<Quat<Z>> goldman_element(const QuatParamsPtr<Z>& q) {
  std::vector<Quat<Z>> basis;
  for (int k = 0; k < 4; ++k) basis.push_back(Quat<Z>::basis(k, q));
  return goldman_from_basis(
      basis, q->a.zero(), [](const Quat<Z>& x, const Quat<Z>& y) { return x * y; },
      [](const Quat<Z>& x, const Quat<Z>& y) { return x + y; }, [](const Z& c, const Quat<Z>& x) { return x.scaled(c); },
      [](const Quat<Z>& x) { return x.trd(); });
}

// The split algebra M_2(F) with the matrix units as basis.
template <class Z>
GoldmanElement<Matrix<Z>> goldman_element_split(const Z& zero) {
  std::vector<Matrix<Z>> basis;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      Matrix<Z> e = Matrix<Z>::zeros(2, 2, zero);
      e(i, j) = zero.one();
      basis.push_back(e);
    }
  return goldman_from_basis(
      basis, zero, [](const Matrix<Z>& x, const Matrix<Z>& y) { return x * y; },
      [](const Matrix<Z>& x, const Matrix<Z>& y) { return x + y; },
      [](const Z& c, const Matrix<Z>& x) { return x.scaled(c); },
      [](const Matrix<Z>& x) { return x(0, 0) + x(1, 1); });
}

}  // namespace conex
