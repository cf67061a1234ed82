// Copyright 2026 The conex authors.
// Licensed under the Apache License, Version 2.0.
#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "conex/matrix.hpp"
#include "conex/quaternion.hpp"
#include "conex/ratfunc.hpp"

namespace conex {

template <class F>
using KField = QuadExt<F>;
template <class F>
using KRat = RatFunc<QuadExt<F>, 'u'>;
template <class F>
using XRat = RatFunc<F, 'X'>;

// A chart of the conic of pure quaternions v with v^2 = 0. (r, s, t) is a
// basis of the pure part with b(r, t) = b(s, t) = 0, so that
// (X r + Y s + t)^2 = 0 becomes
//   qr X^2 + brs X Y + qs Y^2 + qt = 0.
// K = F(w) with w = rs, minimal polynomial T^2 - brs T + qr qs, and the
// function field L embeds into K(u) through u = X w + Y qs; the second
// conjugate is u -> c / u with c = -qs qt.
template <class F>
struct ConicChart {
  using Field = F;
  QuatParamsPtr<F> algebra;
  Quat<F> r, s, t;
  F qr, qs, qt, brs;
  std::shared_ptr<const QuadExtParams<F>> kparams;
  F c;
  DivisionStatus division = DivisionStatus::Undecided;
  std::string name;

  // Y^2 = y2_const + y2_lin * Y with both coefficients in F(X).
  XRat<F> y2_const, y2_lin;
  // Images of X and Y in K(u).
  KRat<F> x_image, y_image;
};

template <class F>
using ChartPtr = std::shared_ptr<const ConicChart<F>>;

// Builds a chart from an explicit triple; checks the orthogonality and
// separability conditions and precomputes the embedding.
template <class F>
ChartPtr<F> make_chart(const QuatParamsPtr<F>& algebra, const Quat<F>& r, const Quat<F>& s, const Quat<F>& t,
                       DivisionStatus division) {
  auto ch = std::make_shared<ConicChart<F>>();
  ch->algebra = algebra;
  ch->r = r;
  ch->s = s;
  ch->t = t;
  ch->qr = square_scalar(r);
  ch->qs = square_scalar(s);
  ch->qt = square_scalar(t);
  ch->brs = polar(r, s);
  if (!polar(r, t).is_zero() || !polar(s, t).is_zero())
    throw Error(Errc::DegenerateChart, "chart vector t is not orthogonal to r and s");
  if (ch->qs.is_zero() || ch->qt.is_zero()) throw Error(Errc::DegenerateChart, "chart with isotropic s or t");
  Quat<F> rs = r * s;
  // rs = brs/2 + (pure part) in char != 2; its trace is brs in every characteristic
  if (!(rs.trd() == ch->brs) || !(rs.nrd() == ch->qr * ch->qs))
    throw Error(Errc::DegenerateChart, "rs does not satisfy the expected minimal polynomial");
  ch->kparams = QuadExt<F>::make_params(ch->brs, ch->qr * ch->qs, "w");
  ch->c = -(ch->qs * ch->qt);
  ch->division = division;
  ch->name = "quaternion" + algebra->name;

  const F z = ch->qr.zero(), one = z.one();
  const XRat<F> xv = XRat<F>::var(z);
  ch->y2_const = -(XRat<F>(ch->qr) * xv * xv + XRat<F>(ch->qt)) * XRat<F>(ch->qs.inv());
  ch->y2_lin = -(XRat<F>(ch->brs * ch->qs.inv()) * xv);

  using K = QuadExt<F>;
  const K w = K::gen(ch->kparams);
  const KRat<F> u = KRat<F>::var(K::embed(one, ch->kparams));
  const KRat<F> iota_u = KRat<F>::monomial(K::embed(ch->c, ch->kparams), -1);
  ch->x_image = (u - iota_u) * KRat<F>((w - w.conj()).inv());
  ch->y_image = (u - ch->x_image * KRat<F>(w)) * KRat<F>(K::embed(ch->qs.inv(), ch->kparams));
  return ch;
}

// Default charts: r = i, s = j, t = ij in characteristic != 2, and
// r = j, s = ij, t = 1 in characteristic 2 (where 1 is pure).
template <class F>
ChartPtr<F> default_chart(const QuatParamsPtr<F>& algebra, DivisionStatus division) {
  using Q = Quat<F>;
  if (algebra->a.characteristic() == 2)
    return make_chart(algebra, Q::basis(2, algebra), Q::basis(3, algebra), Q::basis(0, algebra), division);
  return make_chart(algebra, Q::basis(1, algebra), Q::basis(2, algebra), Q::basis(3, algebra), division);
}

// Element f(X) + Y g(X) of the function field L of the conic.
template <class F>
class LElem {
 public:
  using X = XRat<F>;
  LElem() = default;
  LElem(X f, X g, ChartPtr<F> ch) : f_(std::move(f)), g_(std::move(g)), ch_(std::move(ch)) {}

  static LElem constant(const F& c, ChartPtr<F> ch) { return LElem(X(c), X(c.zero()), std::move(ch)); }
  static LElem from_x(const X& f, ChartPtr<F> ch) {
    F z = f.zero_elem();
    return LElem(f, X(z), std::move(ch));
  }
  static LElem var_x(ChartPtr<F> ch) {
    F z = ch->qr.zero();
    return LElem(X::var(z), X(z), std::move(ch));
  }
  static LElem var_y(ChartPtr<F> ch) {
    F z = ch->qr.zero();
    return LElem(X(z), X(z.one()), std::move(ch));
  }

  const X& f() const { return f_; }
  const X& g() const { return g_; }
  const ChartPtr<F>& chart() const { return ch_; }
  F base_zero() const { return ch_->qr.zero(); }

  LElem zero() const { return LElem(X(base_zero()), X(base_zero()), ch_); }
  LElem one() const { return constant(base_zero().one(), ch_); }
  LElem from_int(long n) const { return constant(base_zero().from_int(n), ch_); }
  long characteristic() const { return base_zero().characteristic(); }
  bool is_zero() const { return f_.is_zero() && g_.is_zero(); }
  bool is_one() const { return f_.is_one() && g_.is_zero(); }
  bool is_constant() const { return g_.is_zero() && f_.is_constant(); }
  F constant_value() const { return f_.is_zero() ? base_zero() : f_.constant(); }

  // Conjugate over F(X): Y -> y2_lin - Y.
  LElem conj() const { return LElem(f_ + g_ * ch_->y2_lin, -g_, ch_); }
  X norm() const { return f_ * f_ + ch_->y2_lin * f_ * g_ - ch_->y2_const * g_ * g_; }

  LElem inv() const {
    if (is_zero()) throw Error(Errc::ZeroInput, "inverse of zero in the conic function field");
    if (g_.is_zero()) return LElem(f_.inv(), g_, ch_);
    X ni = norm().inv();
    LElem cj = conj();
    return LElem(cj.f_ * ni, cj.g_ * ni, ch_);
  }

  LElem operator-() const { return LElem(-f_, -g_, ch_); }
  friend LElem operator+(const LElem& a, const LElem& b) { return LElem(a.f_ + b.f_, a.g_ + b.g_, pick(a, b)); }
  friend LElem operator-(const LElem& a, const LElem& b) { return LElem(a.f_ - b.f_, a.g_ - b.g_, pick(a, b)); }
  friend LElem operator*(const LElem& a, const LElem& b) {
    const auto& ch = pick(a, b);
    if (a.g_.is_zero()) return LElem(a.f_ * b.f_, a.f_ * b.g_, ch);
    if (b.g_.is_zero()) return LElem(a.f_ * b.f_, a.g_ * b.f_, ch);
    X gg = a.g_ * b.g_;
    return LElem(a.f_ * b.f_ + ch->y2_const * gg, a.f_ * b.g_ + a.g_ * b.f_ + ch->y2_lin * gg, ch);
  }
  friend LElem operator/(const LElem& a, const LElem& b) { return a * b.inv(); }
  LElem& operator+=(const LElem& o) { return *this = *this + o; }
  LElem& operator-=(const LElem& o) { return *this = *this - o; }
  LElem& operator*=(const LElem& o) { return *this = *this * o; }
  LElem& operator/=(const LElem& o) { return *this = *this / o; }
  friend bool operator==(const LElem& a, const LElem& b) { return a.f_ == b.f_ && a.g_ == b.g_; }

  bool is_atomic() const { return g_.is_zero() ? f_.is_atomic() : (f_.is_zero() && g_.is_one()); }
  std::string str() const {
    if (g_.is_zero()) return f_.str();
    const bool minus = (-g_).is_one();
    std::string tail = g_.is_one() || minus ? "Y" : (g_.is_atomic() ? "Y*" + g_.str() : "Y*(" + g_.str() + ")");
    if (f_.is_zero()) return (minus ? "-" : "") + tail;
    return f_.str() + (minus ? " - " : " + ") + tail;
  }

 private:
  static const ChartPtr<F>& pick(const LElem& a, const LElem& b) { return a.ch_ ? a.ch_ : b.ch_; }
  X f_, g_;
  ChartPtr<F> ch_;
};

template <class F>
bool prints_negative(const LElem<F>&) {
  return false;
}

// Valuation at the point at infinity of the chart: for (f + Y g) / h with
// f, g, h polynomials, deg h - max(deg f, 1 + deg g). Leading terms cannot
// cancel because the residue of Y/X there lies outside F.
template <class F>
int v_infinity(const LElem<F>& x) {
  if (x.is_zero()) throw Error(Errc::ZeroInput, "valuation of zero");
  using P = Poly<F, 'X'>;
  const P& fd = x.f().den();
  const P& gd = x.g().den();
  P h = (fd * gd) / gcd(fd, gd);
  int best = -1;
  bool any = false;
  if (!x.f().is_zero()) {
    best = (x.f().num() * (h / fd)).deg();
    any = true;
  }
  if (!x.g().is_zero()) {
    int d = 1 + (x.g().num() * (h / gd)).deg();
    best = any ? std::max(best, d) : d;
  }
  return h.deg() - best;
}

template <class F>
bool in_OU(const LElem<F>& x) {
  return x.f().den().is_one() && x.g().den().is_one();
}
template <class F>
bool in_Oinf(const LElem<F>& x) {
  return x.is_zero() || v_infinity(x) >= 0;
}

// The embedding L -> K(u).
template <class F>
KRat<F> embed_L(const LElem<F>& x) {
  const auto& ch = *x.chart();
  using K = QuadExt<F>;
  const K kz = K::embed(ch.qr.zero(), ch.kparams);
  auto lift = [&](const F& c) { return KRat<F>(K::embed(c, ch.kparams)); };
  auto ev = [&](const XRat<F>& h) {
    return h.num().eval_in(ch.x_image, KRat<F>(kz), lift) / h.den().eval_in(ch.x_image, KRat<F>(kz), lift);
  };
  KRat<F> out = ev(x.f());
  if (!x.g().is_zero()) out += ch.y_image * ev(x.g());
  return out;
}

// iota on K(u): conjugation on coefficients and u -> c / u.
template <class F>
KRat<F> iota(const KRat<F>& z, const ChartPtr<F>& ch) {
  using K = QuadExt<F>;
  return substitute_reciprocal(z, K::embed(ch->c, ch->kparams), [](const K& k) { return k.conj(); });
}

// Element a + b w of L (x) K, which is K(u) written over L.
template <class F>
struct LKPair {
  LElem<F> a, b;

  friend LKPair operator+(const LKPair& x, const LKPair& y) { return {x.a + y.a, x.b + y.b}; }
  friend LKPair operator*(const LKPair& x, const LKPair& y) {
    const auto& ch = *x.a.chart();
    LElem<F> tr = LElem<F>::constant(ch.brs, x.a.chart()), nm = LElem<F>::constant(ch.qr * ch.qs, x.a.chart());
    LElem<F> bb = x.b * y.b;
    return {x.a * y.a - nm * bb, x.a * y.b + x.b * y.a + tr * bb};
  }
  // Conjugate over L: w -> brs - w.
  LKPair conj() const {
    LElem<F> tr = LElem<F>::constant(a.chart()->brs, a.chart());
    return {a + b * tr, -b};
  }
  LElem<F> norm() const {
    const auto& ch = *a.chart();
    return a * a + LElem<F>::constant(ch.brs, a.chart()) * a * b + LElem<F>::constant(ch.qr * ch.qs, a.chart()) * b * b;
  }
  LKPair inv() const {
    LElem<F> ni = norm().inv();
    LKPair c = conj();
    return {c.a * ni, c.b * ni};
  }
};

// Writes z in K(u) as a + b w with a, b in L, by substituting
// u -> X w + Y qs.
template <class F>
LKPair<F> split_over_L(const KRat<F>& z, const ChartPtr<F>& ch) {
  using L = LElem<F>;
  const L zero = L::constant(ch->qr.zero(), ch), xl = L::var_x(ch), yl = L::var_y(ch);
  const LKPair<F> u_img{yl * L::constant(ch->qs, ch), xl};
  auto lift = [&](const QuadExt<F>& k) { return LKPair<F>{L::constant(k.c0(), ch), L::constant(k.c1(), ch)}; };
  auto ev = [&](const Poly<QuadExt<F>, 'u'>& p, const LKPair<F>& at) {
    return p.eval_in(at, LKPair<F>{zero, zero}, lift);
  };
  if (z.is_zero()) return {zero, zero};
  if (z.den().is_monomial()) {
    // u^{-1} = iota(u) / c = (X conj(w) + Y qs) / c
    const L cinv = L::constant(ch->c.inv(), ch);
    const LKPair<F> uinv{(xl * L::constant(ch->brs, ch) + yl * L::constant(ch->qs, ch)) * cinv, -(xl * cinv)};
    LKPair<F> out = ev(z.num(), u_img);
    for (int k = 0; k < z.den().deg(); ++k) out = out * uinv;
    return out;
  }
  return ev(z.num(), u_img) * ev(z.den(), u_img).inv();
}

// Inverse of the embedding on its image (the iota-fixed elements).
template <class F>
LElem<F> descend(const KRat<F>& z, const ChartPtr<F>& ch) {
  LKPair<F> p = split_over_L(z, ch);
  if (!p.b.is_zero()) throw Error(Errc::InternalMismatch, "descend: element is not fixed by iota");
  return p.a;
}

// Trace from K(u) to L, lambda-weighted: lambda z + iota(lambda z).
template <class F>
KRat<F> trace_to_L(const KRat<F>& z, const ChartPtr<F>& ch) {
  return z + iota(z, ch);
}

// lambda in K with lambda + conj(lambda) = 1.
template <class F>
QuadExt<F> trace_one(const ChartPtr<F>& ch) {
  using K = QuadExt<F>;
  const F one = ch->qr.one();
  if (one.characteristic() == 2) return K::gen(ch->kparams).scaled(ch->brs.inv());
  return K::embed(one.from_int(2).inv(), ch->kparams);
}

namespace detail {

template <class F>
struct LaurentCore {
  Poly<QuadExt<F>, 'u'> p;  // p(0) != 0
  int shift;                // z = p * u^shift
};

template <class F>
LaurentCore<F> laurent_core(const KRat<F>& z) {
  if (!z.is_laurent()) throw Error(Errc::InvalidArgument, "element is not in K[u, 1/u]");
  int o = z.num().ord0();
  return {z.num().shift(-o), o - z.den().deg()};
}

// ou_generator data: the iota-fixed generator is mult * f where f is the
// O_V-gcd (monic, f(0) != 0) and mult = b u^beta.
template <class F>
struct PrincipalData {
  Poly<QuadExt<F>, 'u'> f;
  KRat<F> mult;
};

template <class F>
PrincipalData<F> principal_from_gcd(const Poly<QuadExt<F>, 'u'>& f, const ChartPtr<F>& ch) {
  using K = QuadExt<F>;
  const K one = K::embed(ch->qr.one(), ch->kparams);
  KRat<F> fr(f);
  KRat<F> ratio = iota(fr, ch) / fr;
  if (!is_unit_OV(ratio)) throw Error(Errc::InternalMismatch, "iota(f)/f is not a unit of O_V");
  int alpha = ratio.val0();
  if (alpha % 2 != 0)
    throw Error(Errc::NotDivision, "odd exponent in iota(f)/f: the conic has a rational point");
  int beta = alpha / 2;
  K a = ratio.num().lc() * ratio.den().lc().inv();
  K kappa = a;
  K cb = K::embed(ch->c, ch->kparams);
  for (int k = 0; k < std::abs(beta); ++k) kappa = beta > 0 ? kappa * cb : kappa / cb;
  if (!kappa.norm().is_one()) throw Error(Errc::InternalMismatch, "Hilbert 90 input does not have norm one");
  K b = one + kappa;
  if (b.is_zero()) {
    K w = K::gen(ch->kparams);
    b = w - w.conj();
  }
  return {f, KRat<F>::monomial(b, beta)};
}

}  // namespace detail

// Generator of the O_U-ideal spanned by the given elements of O_U.
template <class F>
LElem<F> ou_principal_generator(const std::vector<LElem<F>>& gens) {
  if (gens.empty()) throw Error(Errc::ZeroIdeal, "empty generator list");
  ChartPtr<F> ch;
  Poly<QuadExt<F>, 'u'> f;
  bool any = false;
  for (const auto& x : gens) {
    if (x.is_zero()) continue;
    if (!in_OU(x)) throw Error(Errc::InvalidArgument, "ou_principal_generator: input not in O_U");
    ch = x.chart();
    auto core = detail::laurent_core<F>(embed_L(x));
    f = any ? gcd(f, core.p) : core.p.monic();
    any = true;
  }
  if (!any) throw Error(Errc::ZeroIdeal, "all generators are zero");
  auto d = detail::principal_from_gcd<F>(f, ch);
  return descend<F>(d.mult * KRat<F>(d.f), ch);
}

template <class F>
struct OUBezout {
  LElem<F> gamma, c1, c2;  // c1 a + c2 b = gamma generates (a, b)
};

// Bezout relation over O_U: extended Euclid over K[u], multiplied into the
// iota-fixed generator, then averaged down with a trace-one weight.
template <class F>
OUBezout<F> ou_bezout(const LElem<F>& a, const LElem<F>& b) {
  if (a.is_zero() && b.is_zero()) throw Error(Errc::ZeroIdeal, "bezout of two zeros");
  const auto& ch = a.is_zero() ? b.chart() : a.chart();
  LElem<F> zero = LElem<F>::constant(ch->qr.zero(), ch), one = zero.one();
  if (a.is_zero()) return {b, zero, one};
  if (b.is_zero()) return {a, one, zero};
  if (!in_OU(a) || !in_OU(b)) throw Error(Errc::InvalidArgument, "ou_bezout: input not in O_U");
  auto ca = detail::laurent_core<F>(embed_L(a)), cb = detail::laurent_core<F>(embed_L(b));
  auto [g, s, t] = ext_gcd(ca.p, cb.p);
  auto d = detail::principal_from_gcd<F>(g, ch);
  const auto one_k = QuadExt<F>::embed(ch->qr.one(), ch->kparams);
  KRat<F> lam(trace_one(ch));
  KRat<F> c1 = lam * d.mult * KRat<F>(s) * KRat<F>::monomial(one_k, -ca.shift);
  KRat<F> c2 = lam * d.mult * KRat<F>(t) * KRat<F>::monomial(one_k, -cb.shift);
  OUBezout<F> out{descend<F>(d.mult * KRat<F>(g), ch), descend<F>(trace_to_L(c1, ch), ch),
                  descend<F>(trace_to_L(c2, ch), ch)};
  if (!(out.c1 * a + out.c2 * b == out.gamma)) throw Error(Errc::InternalMismatch, "O_U bezout relation fails");
  return out;
}

// O_U-basis of the O_U-span of the columns of gens (entries in O_U), by
// row-wise Bezout pivoting with unimodular 2x2 column operations.
template <class F>
Matrix<LElem<F>> ou_span_basis(const Matrix<LElem<F>>& gens) {
  using L = LElem<F>;
  const int d = gens.rows();
  std::vector<std::vector<L>> cols;
  for (int j = 0; j < gens.cols(); ++j) {
    std::vector<L> c(d);
    bool nz = false;
    for (int i = 0; i < d; ++i) {
      c[i] = gens(i, j);
      if (!in_OU(c[i])) throw Error(Errc::InvalidArgument, "ou_span_basis: entry not in O_U");
      nz = nz || !c[i].is_zero();
    }
    if (nz) cols.push_back(std::move(c));
  }
  std::vector<std::vector<L>> done;
  for (int i = 0; i < d && !cols.empty(); ++i) {
    int p = -1;
    for (size_t k = 0; k < cols.size(); ++k)
      if (!cols[k][i].is_zero() && (p < 0 || v_infinity(cols[k][i]) > v_infinity(cols[p][i]))) p = static_cast<int>(k);
    if (p < 0) continue;
    std::swap(cols[0], cols[p]);
    for (size_t k = 1; k < cols.size(); ++k) {
      if (cols[k][i].is_zero()) continue;
      const L a = cols[0][i], b = cols[k][i];
      auto bz = ou_bezout(a, b);
      L ma = a / bz.gamma, mb = b / bz.gamma;
      if (!in_OU(ma) || !in_OU(mb)) throw Error(Errc::InternalMismatch, "bezout generator does not divide");
      for (int r = 0; r < d; ++r) {
        L x = cols[0][r], y = cols[k][r];
        cols[0][r] = bz.c1 * x + bz.c2 * y;
        cols[k][r] = ma * y - mb * x;
      }
    }
    done.push_back(std::move(cols[0]));
    cols.erase(cols.begin());
    std::vector<std::vector<L>> keep;
    for (auto& c : cols) {
      bool nz = false;
      for (auto& x : c) nz = nz || !x.is_zero();
      if (nz) keep.push_back(std::move(c));
    }
    cols = std::move(keep);
  }
  Matrix<L> out = Matrix<L>::zeros(d, static_cast<int>(done.size()), gens.sample());
  for (size_t j = 0; j < done.size(); ++j)
    for (int i = 0; i < d; ++i) out(i, static_cast<int>(j)) = done[j][i];
  return out;
}

namespace detail {

// Given Z (d x r, full column rank) over K[x], a K[x]-basis of
// (Z K(x)^r) intersected with K[x]^d. Unimodular row operations bring Z to
// U Z = [H; 0]; then Z H^{-1} is the first r columns of U^{-1}, which is
// tracked alongside as inverse column operations.
template <class K, char V>
Matrix<Poly<K, V>> poly_saturate(Matrix<Poly<K, V>> w, const K& z) {
  using P = Poly<K, V>;
  const int d = w.rows(), r = w.cols();
  Matrix<P> uinv = Matrix<P>::zeros(d, d, P(z));
  for (int i = 0; i < d; ++i) uinv(i, i) = P(z.one());
  for (int c = 0; c < r; ++c) {
    for (;;) {
      int p = -1;
      for (int i = c; i < d; ++i)
        if (!w(i, c).is_zero() && (p < 0 || w(i, c).deg() < w(p, c).deg())) p = i;
      if (p < 0) throw Error(Errc::RankDeficient, "poly_saturate: columns are dependent");
      // a monic pivot keeps the remainder sequence from inflating coefficients
      const K lc = w(p, c).lc(), inv = lc.inv();
      for (int j = 0; j < r; ++j) w(p, j) = w(p, j).scaled(inv);
      for (int i = 0; i < d; ++i) uinv(i, p) = uinv(i, p).scaled(lc);
      bool clean = true;
      for (int i = c; i < d; ++i) {
        if (i == p || w(i, c).is_zero()) continue;
        P q = w(i, c) / w(p, c);
        for (int j = 0; j < r; ++j) w(i, j) -= q * w(p, j);
        for (int k = 0; k < d; ++k) uinv(k, p) += q * uinv(k, i);
        clean = clean && w(i, c).is_zero();
      }
      if (clean) {
        w.swap_rows(c, p);
        uinv.swap_cols(c, p);
        break;
      }
    }
  }
  return uinv.block(0, 0, d, r);
}

// Column weak Popov form by unimodular column operations: the pivot of a
// column is its last entry of maximal degree, and pivots end up in distinct
// rows. Column degrees are then minimal among bases of the same module.
template <class K, char V>
void weak_popov_cols(Matrix<Poly<K, V>>& m) {
  using P = Poly<K, V>;
  const int d = m.rows(), r = m.cols();
  auto pivot = [&](int j) {
    int best = -1;
    for (int i = 0; i < d; ++i)
      if (!m(i, j).is_zero() && (best < 0 || m(i, j).deg() >= m(best, j).deg())) best = i;
    return best;
  };
  for (bool changed = true; changed;) {
    changed = false;
    for (int j = 0; j < r && !changed; ++j)
      for (int k = 0; k < r && !changed; ++k) {
        if (j == k) continue;
        int pj = pivot(j), pk = pivot(k);
        if (pj < 0 || pj != pk || m(pj, j).deg() < m(pk, k).deg()) continue;
        const int shift = m(pj, j).deg() - m(pk, k).deg();
        P q = P::monomial(m(pj, j).lc() * m(pk, k).lc().inv(), shift);
        for (int i = 0; i < d; ++i) m(i, j) -= q * m(i, k);
        changed = true;
      }
  }
}

// A scalar that makes the given coefficients small: the leading one becomes 1,
// or over QQ they become coprime integers.
template <class F>
F normalizing_scalar(const std::vector<F>& cs) {
  for (const auto& c : cs)
    if (!c.is_zero()) return c.inv();
  throw Error(Errc::ZeroInput, "normalizing_scalar: all zero");
}

inline Rational normalizing_scalar(const std::vector<Rational>& cs) {
  mpz_class l = 1, g = 0;
  for (const auto& c : cs) {
    if (c.is_zero()) continue;
    l = lcm(l, c.den());
    g = gcd(g, c.num());
  }
  if (g == 0) throw Error(Errc::ZeroInput, "normalizing_scalar: all zero");
  return Rational(mpq_class(l, g));
}

// Scales a column over L into O_U with trivial F[X]-content.
template <class F>
std::vector<LElem<F>> primitive_OU(std::vector<LElem<F>> col, const ChartPtr<F>& ch) {
  Poly<F, 'X'> den(ch->qr.one()), content(ch->qr.zero());
  for (const auto& x : col)
    for (const auto* part : {&x.f(), &x.g()}) den = (den * part->den()) / gcd(den, part->den());
  for (auto& x : col) {
    x *= LElem<F>::from_x(XRat<F>(den), ch);
    content = gcd(gcd(content, x.f().num()), x.g().num());
  }
  if (content.is_zero()) return col;
  std::vector<F> cs;
  for (auto& x : col) {
    x /= LElem<F>::from_x(XRat<F>(content), ch);
    for (const auto* part : {&x.f(), &x.g()})
      for (const auto& c : part->num().coeffs()) cs.push_back(c);
  }
  const LElem<F> scale = LElem<F>::constant(normalizing_scalar(cs), ch);
  for (auto& x : col) x *= scale;
  return col;
}

}  // namespace detail

// O_U-basis of the span of the columns of b intersected with O_U^d.
// O_U = F[X] + F[X] Y is free of rank 2 over F[X], so the intersection is
// the F[X]-saturation of {b_j, Y b_j} in F[X]^(2d); Bezout pivoting then
// cuts the 2r resulting generators down to an O_U-basis.
template <class F>
Matrix<LElem<F>> saturate_U(const Matrix<LElem<F>>& b, const ChartPtr<F>& ch) {
  using L = LElem<F>;
  using P = Poly<F, 'X'>;
  const int d = b.rows(), r = b.cols();
  const F fz = ch->qr.zero();
  const L zero = L::constant(fz, ch), y = L::var_y(ch);
  if (b.rank() != r) throw Error(Errc::RankDeficient, "saturate_U: basis columns are dependent");
  if (r == d) return Matrix<L>::identity(d, zero);
  if (r == 0) return Matrix<L>::zeros(d, 0, zero);
  Matrix<P> z = Matrix<P>::zeros(2 * d, 2 * r, P(fz));
  for (int j = 0; j < r; ++j) {
    std::vector<L> col(d);
    for (int i = 0; i < d; ++i) col[i] = b(i, j);
    for (int twist = 0; twist < 2; ++twist) {
      if (twist == 1)
        for (auto& x : col) x *= y;
      auto prim = detail::primitive_OU(col, ch);
      for (int i = 0; i < d; ++i) {
        z(2 * i, 2 * j + twist) = prim[i].f().num();
        z(2 * i + 1, 2 * j + twist) = prim[i].g().num();
      }
    }
  }
  Matrix<P> sat = detail::poly_saturate(z, fz);
  detail::weak_popov_cols(sat);
  Matrix<L> gens = Matrix<L>::zeros(d, 2 * r, zero);
  for (int j = 0; j < 2 * r; ++j) {
    std::vector<L> col(d);
    for (int i = 0; i < d; ++i) col[i] = L(XRat<F>(sat(2 * i, j)), XRat<F>(sat(2 * i + 1, j)), ch);
    col = detail::primitive_OU(col, ch);
    for (int i = 0; i < d; ++i) gens(i, j) = col[i];
  }
  Matrix<L> out = ou_span_basis(gens);
  if (out.cols() != r) throw Error(Errc::InternalMismatch, "saturate_U: lattice has wrong rank");
  return out;
}

// O_infinity-basis of the span of the columns of b intersected with
// O_infinity^d. Gauss-Jordan with a globally minimal-valuation pivot keeps
// every column integral and the pivot rows an identity block.
template <class F>
Matrix<LElem<F>> saturate_inf(const Matrix<LElem<F>>& b) {
  using L = LElem<F>;
  Matrix<L> m = b;
  const int d = m.rows(), r = m.cols();
  if (m.rank() != r) throw Error(Errc::RankDeficient, "saturate_inf: basis columns are dependent");
  for (int k = 0; k < r; ++k) {
    int pi = -1, pj = -1, best = 0;
    for (int j = k; j < r; ++j)
      for (int i = 0; i < d; ++i) {
        if (m(i, j).is_zero()) continue;
        int v = v_infinity(m(i, j));
        if (pi < 0 || v < best) {
          pi = i;
          pj = j;
          best = v;
        }
      }
    m.swap_cols(k, pj);
    m.scale_col(k, m(pi, k).inv());
    for (int j = 0; j < r; ++j)
      if (j != k && !m(pi, j).is_zero()) m.add_col(j, k, -m(pi, j));
  }
  return m;
}

// O_infinity-basis of the O_infinity-span of arbitrary generator columns.
template <class F>
Matrix<LElem<F>> span_basis_inf(const Matrix<LElem<F>>& gens) {
  using L = LElem<F>;
  Matrix<L> m = gens;
  const int d = m.rows();
  int k = 0;
  for (; k < m.cols(); ++k) {
    int pi = -1, pj = -1, best = 0;
    for (int j = k; j < m.cols(); ++j)
      for (int i = 0; i < d; ++i) {
        if (m(i, j).is_zero()) continue;
        int v = v_infinity(m(i, j));
        if (pi < 0 || v < best) {
          pi = i;
          pj = j;
          best = v;
        }
      }
    if (pi < 0) break;
    m.swap_cols(k, pj);
    L inv = m(pi, k).inv();
    for (int j = k + 1; j < m.cols(); ++j)
      if (!m(pi, j).is_zero()) m.add_col(j, k, -(m(pi, j) * inv));
  }
  return m.block(0, 0, d, k);
}

}  // namespace conex
