// Copyright 2026 The conex authors.
// Licensed under the Apache License, Version 2.0.
#pragma once

// Anisotropic kernels over the function field L of a conic, descended to
// the base field. A search-maximal totally isotropic N in A_L^n is
// saturated into lattices over O_U and O_infinity; the quotient bundle
// N^perp / N must be trivial of degree 0, and its global sections carry
// the kernel over F.

#include <optional>
#include <string>
#include <vector>

#include "conex/conic_bundle.hpp"
#include "conex/forms.hpp"

namespace conex {

// Scalar extension A -> A_L = A (x)_F L.
template <class A>
struct Extension {
  using F = A;
  using AL = LElem<F>;
  static AL sample(const A& sample_a, const ChartPtr<F>& ch) { return LElem<F>::constant(sample_a.zero(), ch); }
  static AL lift(const A& x, const AL& sample_l) { return LElem<F>::constant(x, sample_l.chart()); }
  static std::optional<A> descend(const AL& x, const A&) {
    if (!x.is_constant()) return std::nullopt;
    return x.constant_value();
  }
  static Involution<AL> involution(const Involution<A>&, const AL& sample_l) { return identity_involution(sample_l); }
  static LElem<F> reduced_trace(const AL& x) { return x; }
  static int degree() { return 1; }
};

template <class Z>
struct Extension<Quat<Z>> {
  using F = Z;
  using AL = Quat<LElem<Z>>;
  static AL sample(const Quat<Z>& sample_a, const ChartPtr<F>& ch) {
    const auto& p = sample_a.params();
    auto pl = make_quaternion(LElem<Z>::constant(p->a, ch), LElem<Z>::constant(p->b, ch));
    return AL::scalar(LElem<Z>::constant(p->a.zero(), ch), pl);
  }
  static AL lift(const Quat<Z>& x, const AL& sample_l) {
    const auto& ch = sample_l.coeff(0).chart();
    return AL({LElem<Z>::constant(x.coeff(0), ch), LElem<Z>::constant(x.coeff(1), ch),
               LElem<Z>::constant(x.coeff(2), ch), LElem<Z>::constant(x.coeff(3), ch)},
              sample_l.params());
  }
  static std::optional<Quat<Z>> descend(const AL& x, const Quat<Z>& sample_a) {
    std::array<Z, 4> c;
    for (int k = 0; k < 4; ++k) {
      if (!x.coeff(k).is_constant()) return std::nullopt;
      c[k] = x.coeff(k).constant_value();
    }
    return Quat<Z>(c, sample_a.params());
  }
  static Involution<AL> involution(const Involution<Quat<Z>>& inv, const AL& sample_l) {
    if (inv.kind == InvolutionKind::Conjugation) return conjugation(sample_l);
    return orthogonal_involution(lift(inv.v, sample_l));
  }
  static LElem<Z> reduced_trace(const AL& x) { return x.trd(); }
  static int degree() { return 2; }
};

template <class A>
using ExtensionOf = typename Extension<A>::AL;

template <class A>
Form<ExtensionOf<A>> extend_to_L(const Form<A>& f, const ChartPtr<CenterOf<A>>& ch) {
  using E = Extension<A>;
  const auto sl = E::sample(f.gram.sample(), ch);
  Matrix<ExtensionOf<A>> g = Matrix<ExtensionOf<A>>::zeros(f.rank(), f.rank(), sl);
  for (int i = 0; i < f.rank(); ++i)
    for (int j = 0; j < f.rank(); ++j) g(i, j) = E::lift(f.gram(i, j), sl);
  auto inv = E::involution(f.inv, sl);
  if (f.is_quadratic()) return Form<ExtensionOf<A>>::quadratic(g, inv);
  return Form<ExtensionOf<A>>::hermitian(g, inv, f.delta);
}

template <class A>
std::optional<Matrix<A>> descend_matrix(const Matrix<ExtensionOf<A>>& m, const A& sample) {
  Matrix<A> out = Matrix<A>::zeros(m.rows(), m.cols(), sample);
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      auto d = Extension<A>::descend(m(i, j), sample);
      if (!d) return std::nullopt;
      out(i, j) = *d;
    }
  return out;
}

namespace detail {

// L-basis of the span of the given coordinate vectors, as columns.
template <class Z>
Matrix<Z> basis_columns(const std::vector<std::vector<Z>>& vecs, int m, const Z& zero) {
  ZSpace<Z> span(m, zero);
  std::vector<const std::vector<Z>*> kept;
  for (const auto& v : vecs)
    if (span.add(v)) kept.push_back(&v);
  Matrix<Z> out = Matrix<Z>::zeros(m, static_cast<int>(kept.size()), zero);
  for (size_t j = 0; j < kept.size(); ++j)
    for (int i = 0; i < m; ++i) out(i, static_cast<int>(j)) = (*kept[j])[i];
  return out;
}

template <class Z>
std::vector<Z> column_vector(const Matrix<Z>& m, int j) {
  std::vector<Z> v;
  for (int i = 0; i < m.rows(); ++i) v.push_back(m(i, j));
  return v;
}

// A_L-vectors of the L-basis columns.
template <class AL>
Matrix<AL> unflatten_columns(const Matrix<CenterOf<AL>>& flat, int n, const AL& sample) {
  Matrix<AL> out = Matrix<AL>::zeros(n, flat.cols(), sample);
  for (int j = 0; j < flat.cols(); ++j) out.set_block(0, j, unflatten_col(column_vector(flat, j), n, sample));
  return out;
}

}  // namespace detail

// L-basis of the flattened right A_L-span of the columns.
template <class AL>
Matrix<CenterOf<AL>> flat_span(const Matrix<AL>& cols) {
  const int m = cols.rows() * AlgebraTraits<AL>::dim;
  return detail::basis_columns(detail::right_span_vectors(cols), m, detail::center_zero(cols.sample()));
}

// Entries of the unimodular row reduction over O_U: U C = [H; 0] with H
// square, and U^-1 tracked alongside.
template <class F>
struct OURowReduction {
  Matrix<LElem<F>> u, u_inv, reduced;
};

template <class F>
OURowReduction<F> ou_row_reduce(const Matrix<LElem<F>>& c) {
  using L = LElem<F>;
  const int rows = c.rows(), cols = c.cols();
  OURowReduction<F> out{Matrix<L>::identity(rows, c.sample()), Matrix<L>::identity(rows, c.sample()), c};
  auto& m = out.reduced;
  for (int j = 0; j < cols; ++j) {
    for (int i = j + 1; i < rows; ++i) {
      if (m(i, j).is_zero()) continue;
      if (m(j, j).is_zero()) {
        m.swap_rows(i, j);
        out.u.swap_rows(i, j);
        out.u_inv.swap_cols(i, j);
        continue;
      }
      const L a = m(j, j), b = m(i, j);
      auto bz = ou_bezout(a, b);
      const L ma = a / bz.gamma, mb = b / bz.gamma;
      // rows (j, i) <- [[c1, c2], [-mb, ma]] (j, i); determinant 1
      auto mix_rows = [&](Matrix<L>& t) {
        for (int k = 0; k < t.cols(); ++k) {
          L x = t(j, k), y = t(i, k);
          t(j, k) = bz.c1 * x + bz.c2 * y;
          t(i, k) = ma * y - mb * x;
        }
      };
      mix_rows(m);
      mix_rows(out.u);
      for (int k = 0; k < rows; ++k) {
        L x = out.u_inv(k, j), y = out.u_inv(k, i);
        out.u_inv(k, j) = ma * x + mb * y;
        out.u_inv(k, i) = bz.c1 * y - bz.c2 * x;
      }
    }
    if (m(j, j).is_zero()) throw Error(Errc::RankDeficient, "ou_row_reduce: column is not independent");
  }
  return out;
}

// Lattices of N and N^perp (L-bases of the flattened spaces, columns).
template <class F>
struct SaturatedPair {
  Matrix<LElem<F>> n, perp;
  Matrix<LElem<F>> n_u, n_inf, perp_u, perp_inf;
};

template <class F>
SaturatedPair<F> saturate_pair(const Matrix<LElem<F>>& n, const Matrix<LElem<F>>& perp, const ChartPtr<F>& ch) {
  SaturatedPair<F> s{n, perp, n, n, perp, perp};
  if (n.cols() > 0) {
    s.n_u = saturate_U(n, ch);
    s.n_inf = saturate_inf(n);
  }
  s.perp_u = saturate_U(perp, ch);
  s.perp_inf = saturate_inf(perp);
  return s;
}

// The quotient N^perp / N as a bundle, with its lattice bases lifted to
// N^perp: the U-basis lifts are lift_u, the infinity-basis lifts lift_inf.
template <class F>
struct QuotientBundle {
  BundleC<F> bundle;
  Matrix<LElem<F>> lift_u, lift_inf;
};

template <class F>
QuotientBundle<F> quotient_bundle(const SaturatedPair<F>& sp, const ChartPtr<F>& ch) {
  using L = LElem<F>;
  const L zero = l_const(ch->qr.zero(), ch);
  const int r = sp.n.cols(), rp = sp.perp.cols(), q = rp - r;
  const int m = sp.perp.rows();
  if (q < 0) throw Error(Errc::InternalMismatch, "N is larger than its orthogonal");
  Matrix<L> basis_u = sp.perp_u, u = Matrix<L>::identity(rp, zero);
  if (r > 0) {
    auto c = sp.perp_u.solve(sp.n_u);
    if (!c) throw Error(Errc::NotIsotropic, "N is not contained in its orthogonal");
    for (int i = 0; i < rp; ++i)
      for (int j = 0; j < r; ++j)
        if (!in_OU((*c)(i, j))) throw Error(Errc::InternalMismatch, "N_U is not inside the lattice of N^perp");
    auto red = ou_row_reduce(*c);
    L h = red.reduced.block(0, 0, r, r).det();
    if (!in_OU(h) || !in_OU(h.inv())) throw Error(Errc::InternalMismatch, "N_U is not saturated in N^perp_U");
    basis_u = sp.perp_u * red.u_inv;
    u = red.u;
  }
  auto t = sp.perp_u.solve(sp.perp_inf);
  if (!t) throw Error(Errc::InternalMismatch, "lattices of N^perp span different spaces");
  Matrix<L> coords = u * *t;
  Matrix<L> gens = coords.block(r, 0, q, rp);
  Matrix<L> qinf = q > 0 ? span_basis_inf(gens) : Matrix<L>::zeros(0, 0, zero);
  if (qinf.cols() != q) throw Error(Errc::InternalMismatch, "quotient lattice at infinity has the wrong rank");
  QuotientBundle<F> out;
  out.bundle = {q > 0 ? qinf.inverse() : qinf, ch};
  out.lift_u = basis_u.block(0, r, m, q);
  out.lift_inf = out.lift_u * qinf;
  return out;
}

namespace detail {

// T with polar = T + eps T*: the Gram matrix itself for a quadratic class,
// half the form for a hermitian one.
template <class AL>
Matrix<AL> sesquilinear_part(const Form<AL>& f) {
  if (f.is_quadratic()) return f.gram;
  const auto two = detail::center_zero(f.gram.sample()).from_int(2);
  if (two.is_zero()) throw Error(Errc::InvalidArgument, "hermitian descent checks need characteristic != 2");
  Matrix<AL> half = f.gram;
  const auto h = AlgebraTraits<AL>::lift(two.inv(), f.gram.sample());
  for (int i = 0; i < half.rows(); ++i)
    for (int j = 0; j < half.cols(); ++j) half(i, j) = h * half(i, j);
  return half;
}

// L-valued trace pairing of the polar form on flattened vectors.
template <class A>
Matrix<LElem<CenterOf<A>>> trace_gram(const Form<ExtensionOf<A>>& f, const Matrix<ExtensionOf<A>>& left,
                                      const Matrix<ExtensionOf<A>>& right) {
  Matrix<ExtensionOf<A>> b = sw(left, f.inv) * f.polar() * right;
  return b.map([](const ExtensionOf<A>& x) { return Extension<A>::reduced_trace(x); });
}

}  // namespace detail

template <class A>
struct DescentResult {
  using AL = ExtensionOf<A>;
  Form<A> kernel;
  int index = 0;      // reduced dimension of N: dim_L N / deg A
  int n_l_dim = 0;    // dim_L N
  bool certified = false;
  bool search_capped = false;
  int bound = 0;
  std::string quotient_classification;
  int quotient_degree = 0;
  Matrix<AL> isotropic;  // A_L-generators of N
  std::vector<std::string> transcript;
};

// Certificate that the kernel stays anisotropic over L. F is algebraically
// closed in L, so a binary form <a, b> with -ab not a square in F stays
// anisotropic.
inline std::optional<bool> is_square_in(const Rational& x) { return is_rational_square(x); }
inline std::optional<bool> is_square_in(const Fp& x) {
  if (x.is_zero() || x.modulus() == 2) return true;
  Fp acc = x.one(), base = x;
  for (uint64_t e = (x.modulus() - 1) / 2; e; e >>= 1, base *= base)
    if (e & 1) acc *= base;
  return acc.is_one();
}
template <class Z>
std::optional<bool> is_square_in(const Z&) {
  return std::nullopt;
}

template <class A>
std::optional<std::string> anisotropy_over_L(const Form<A>& k) {
  if (k.rank() == 0) return "kernel is zero";
  if constexpr (AlgebraTraits<A>::dim == 1) {
    if (k.gram(0, 0).characteristic() == 2) return std::nullopt;
    if (k.rank() == 1) return "rank 1 with nonzero value";
    if (k.rank() == 2) {
      Matrix<A> s = k.polar();
      auto sq = is_square_in(-s.det());
      if (sq && !*sq) return "binary form with -det not a square in the base field";
    }
  }
  return std::nullopt;
}

// The kernel extended to L plus hyperbolic planes on N and a dual
// isotropic N'' recovers the form on L^n: checks blocks of the Gram
// matrix in the basis (N, N'', K) and that this basis spans.
template <class A>
void verify_reconstruction(const Form<ExtensionOf<A>>& fl, const Matrix<LElem<CenterOf<A>>>& n_flat,
                           const Matrix<ExtensionOf<A>>& kernel_cols, const Form<ExtensionOf<A>>& kernel_l) {
  using AL = ExtensionOf<A>;
  using L = LElem<CenterOf<A>>;
  const int n = fl.rank(), m = n * AlgebraTraits<AL>::dim;
  const AL sample = fl.gram.sample();
  const L lz = detail::center_zero(sample);
  const Matrix<AL> pol = fl.polar();
  auto fail = [](const std::string& what) { throw Error(Errc::InternalMismatch, "reconstruction: " + what); };

  Matrix<AL> h_cols = orthogonal_submodule(pol, kernel_cols, fl.inv);
  Matrix<L> h_flat = flat_span(h_cols);
  const int k = n_flat.cols();
  if (h_flat.cols() != 2 * k) fail("orthogonal of the kernel is not twice N");
  // L-complement of N in H, made A-linear with the Goldman element
  ZSpace<L> span(m, lz);
  for (int j = 0; j < k; ++j) span.add(detail::column_vector(n_flat, j));
  std::vector<std::vector<L>> c0;
  for (int j = 0; j < h_flat.cols(); ++j) {
    auto v = detail::column_vector(h_flat, j);
    if (span.add(v)) c0.push_back(v);
  }
  Matrix<L> c0m = detail::basis_columns(c0, m, lz);
  Matrix<L> nc = hcat(n_flat, c0m);
  auto project = [&](const Matrix<AL>& x) {  // L-linear projection onto N along c0
    Matrix<L> col = Matrix<L>::zeros(m, 1, lz);
    auto v = detail::flatten_col(x);
    for (int i = 0; i < m; ++i) col(i, 0) = v[i];
    auto sol = nc.solve(col);
    if (!sol) fail("vector outside the orthogonal of the kernel");
    Matrix<L> image = n_flat * sol->block(0, 0, k, 1);
    return detail::unflatten_col(detail::column_vector(image, 0), n, sample);
  };
  Matrix<AL> c_cols = detail::unflatten_columns(c0m, n, sample);
  if constexpr (AlgebraTraits<AL>::dim > 1) {
    auto g = goldman_element(sample.params());
    for (int j = 0; j < c_cols.cols(); ++j) {
      Matrix<AL> x = c_cols.col(j), acc = Matrix<AL>::zeros(n, 1, sample);
      for (size_t i = 0; i < g.left.size(); ++i) {
        Matrix<AL> p = project(x * Matrix<AL>::from_rows({{g.left[i]}}));
        acc = acc + p * Matrix<AL>::from_rows({{g.trace_one * g.right[i]}});
      }
      c_cols.set_block(0, j, x - acc);
    }
  } else {
    for (int j = 0; j < c_cols.cols(); ++j) c_cols.set_block(0, j, c_cols.col(j) - project(c_cols.col(j)));
  }
  // s : C -> N with beta(s c, c') = -T(c, c') makes c + s c totally isotropic
  Matrix<AL> n_cols = detail::unflatten_columns(n_flat, n, sample);
  const Matrix<AL> tmat = detail::sesquilinear_part(fl);
  constexpr int d = AlgebraTraits<AL>::dim;
  Matrix<AL> pair = sw(n_cols, fl.inv) * pol * c_cols;  // k x k
  Matrix<AL> tcc = sw(c_cols, fl.inv) * tmat * c_cols;
  Matrix<L> sys = Matrix<L>::zeros(k * d, k, lz);
  for (int r = 0; r < k; ++r)
    for (int q = 0; q < k; ++q) {
      auto co = AlgebraTraits<AL>::coords(pair(q, r));
      for (int e = 0; e < d; ++e) sys(r * d + e, q) = co[e];
    }
  Matrix<AL> dual = c_cols;
  for (int p = 0; p < k; ++p) {
    Matrix<L> rhs = Matrix<L>::zeros(k * d, 1, lz);
    for (int r = 0; r < k; ++r) {
      auto co = AlgebraTraits<AL>::coords(-tcc(p, r));
      for (int e = 0; e < d; ++e) rhs(r * d + e, 0) = co[e];
    }
    auto sol = sys.solve(rhs);
    if (!sol) fail("N and its complement are not in perfect pairing");
    Matrix<AL> shift = Matrix<AL>::zeros(n, 1, sample);
    for (int q = 0; q < k; ++q) shift = shift + n_cols.col(q) * Matrix<AL>::from_rows({{AlgebraTraits<AL>::lift((*sol)(q, 0), sample)}});
    dual.set_block(0, p, c_cols.col(p) + shift);
  }
  if constexpr (d == 1) {
    // normalize to beta(n_i, n''_j) = [i == j]
    if (k > 0) {
      Matrix<AL> pm = sw(n_cols, fl.inv) * pol * dual;
      dual = dual * pm.inverse();
    }
  }
  Matrix<AL> s = hcat(hcat(n_cols, dual), kernel_cols);
  if (flat_span(s).cols() != m) fail("basis (N, N'', K) does not span");
  Matrix<AL> gs = sw(s, fl.inv) * fl.gram * s, ps = sw(s, fl.inv) * pol * s;
  const int kk = kernel_cols.cols();
  auto zero_block = [&](int r0, int c0, int rows, int cols) { return ps.block(r0, c0, rows, cols).is_zero(); };
  if (!zero_block(0, 0, k, k) || !zero_block(k, k, k, k)) fail("N or N'' is not totally isotropic");
  if (!zero_block(0, 2 * k, 2 * k, kk) || !zero_block(2 * k, 0, kk, 2 * k)) fail("hyperbolic part is not orthogonal to K");
  if (fl.is_quadratic()) {
    if (!QuadClass<AL>(gs.block(0, 0, k, k), fl.inv).is_zero() || !QuadClass<AL>(gs.block(k, k, k, k), fl.inv).is_zero())
      fail("N or N'' is not totally isotropic for the quadratic class");
    if (!(QuadClass<AL>(gs.block(2 * k, 2 * k, kk, kk), fl.inv) == QuadClass<AL>(kernel_l.gram, fl.inv)))
      fail("form on K differs from the extended kernel");
  } else if (!(gs.block(2 * k, 2 * k, kk, kk) == kernel_l.gram)) {
    fail("form on K differs from the extended kernel");
  }
  Matrix<L> tr = detail::trace_gram<A>(fl, n_cols, dual);
  if (k > 0 && tr.rank() != k) fail("pairing between N and N'' is degenerate");
  if constexpr (d == 1) {
    // full Gram matrix: hyperbolic planes then the kernel
    Matrix<AL> hyp = Matrix<AL>::zeros(2 * k, 2 * k, sample);
    for (int i = 0; i < k; ++i) {
      hyp(i, k + i) = sample.one();
      if (!fl.is_quadratic()) hyp(k + i, i) = fl.delta > 0 ? sample.one() : -sample.one();
    }
    Matrix<AL> expect = block_diag(hyp, kernel_l.gram);
    bool ok = fl.is_quadratic() ? QuadClass<AL>(gs, fl.inv) == QuadClass<AL>(expect, fl.inv) : gs == expect;
    if (!ok) fail("Gram matrix in the new basis is not hyperbolic plus kernel");
  }
}

template <class A>
struct ExcellenceProblem {
  Form<A> form;
  ChartPtr<CenterOf<A>> chart;
  int bound = 1;
};

// Runs saturation, quotient bundle and descent for a given totally
// isotropic N (A_L-generators) of the extended form.
template <class A>
DescentResult<A> descend_from(const ExcellenceProblem<A>& prob, const Form<ExtensionOf<A>>& fl,
                              const Matrix<ExtensionOf<A>>& gens, std::vector<std::string> transcript = {}) {
  using AL = ExtensionOf<A>;
  using F = CenterOf<A>;
  using L = LElem<F>;
  const auto& ch = prob.chart;
  const int n = fl.rank();
  const AL sample = fl.gram.sample();
  const A sample_a = prob.form.gram.sample();
  const int deg = Extension<A>::degree();
  DescentResult<A> res;
  res.bound = prob.bound;
  res.isotropic = gens;

  Matrix<AL> polar = fl.polar();
  Matrix<L> n_flat = flat_span(gens);
  if (!(sw(gens, fl.inv) * polar * gens).is_zero() ||
      (fl.is_quadratic() && !QuadClass<AL>(sw(gens, fl.inv) * fl.gram * gens, fl.inv).is_zero()))
    throw Error(Errc::NotIsotropic, "N is not totally isotropic over L");
  Matrix<L> perp_flat = flat_span(orthogonal_submodule(polar, gens, fl.inv));
  res.n_l_dim = n_flat.cols();
  if (res.n_l_dim % deg) throw Error(Errc::InternalMismatch, "L-dimension of N is not a multiple of the degree");
  res.index = res.n_l_dim / deg;
  transcript.push_back("N: L-dimension " + std::to_string(n_flat.cols()) + ", N^perp: L-dimension " +
                       std::to_string(perp_flat.cols()));

  SaturatedPair<F> sp = saturate_pair(n_flat, perp_flat, ch);
  QuotientBundle<F> qb = quotient_bundle(sp, ch);
  const int q = qb.bundle.rank();
  // induced form on both lattice bases: integral with unit discriminant
  auto lifted = [&](const Matrix<L>& flat) { return detail::unflatten_columns(flat, n, sample); };
  for (int side = 0; side < 2; ++side) {
    const Matrix<L>& lifts = side == 0 ? qb.lift_u : qb.lift_inf;
    if (q == 0) break;
    Matrix<L> tg = detail::trace_gram<A>(fl, lifted(lifts), lifted(lifts));
    bool integral = true;
    for (int i = 0; i < q; ++i)
      for (int j = 0; j < q; ++j) integral = integral && (side == 0 ? in_OU(tg(i, j)) : in_Oinf(tg(i, j)));
    L det = tg.det();
    bool unit = !det.is_zero() && (side == 0 ? in_OU(det) && in_OU(det.inv()) : v_infinity(det) == 0);
    if (!integral || !unit)
      throw Error(Errc::SingularInducedForm,
                  std::string("induced form is not integral and nonsingular on the ") + (side == 0 ? "U" : "infinity") +
                      " lattice");
  }
  transcript.push_back("induced form integral and nonsingular on both lattices");
  res.quotient_degree = degree_c(qb.bundle);
  if (res.quotient_degree != 0)
    throw Error(Errc::NonzeroDegree, "quotient bundle has degree " + std::to_string(res.quotient_degree));
  ConicClassification cl = q > 0 ? classify(qb.bundle) : ConicClassification{};
  res.quotient_classification = cl.str();
  for (const auto& s : cl.summands)
    if (s.rank_two || s.degree != 0) throw Error(Errc::NontrivialClassification, "quotient bundle is " + cl.str());
  transcript.push_back("quotient bundle: rank " + std::to_string(q) + ", degree 0, " + cl.str());

  // global sections, lifted to N^perp; an A-basis of them spans the kernel
  Matrix<L> sections = q > 0 ? global_sections_c(qb.bundle) : Matrix<L>::zeros(0, 0, l_const(ch->qr.zero(), ch));
  if (sections.cols() != q) throw Error(Errc::InternalMismatch, "quotient sections do not match its rank");
  Matrix<L> lifts_flat =
      q > 0 ? Matrix<L>(qb.lift_u * sections) : Matrix<L>::zeros(n * AlgebraTraits<AL>::dim, 0, detail::center_zero(sample));
  ZSpace<L> span(n * AlgebraTraits<AL>::dim, detail::center_zero(sample));
  for (int j = 0; j < n_flat.cols(); ++j) span.add(detail::column_vector(n_flat, j));
  Matrix<AL> kernel_cols = Matrix<AL>::zeros(n, 0, sample);
  for (int j = 0; j < lifts_flat.cols(); ++j) {
    Matrix<AL> v = detail::unflatten_col(detail::column_vector(lifts_flat, j), n, sample);
    bool fresh = false;
    for (auto& w : detail::right_span_vectors(v)) fresh = span.add(w) || fresh;
    if (fresh) kernel_cols = hcat(kernel_cols, v);
  }
  if (span.dim() != perp_flat.cols()) throw Error(Errc::InternalMismatch, "sections do not span N^perp / N");
  Form<AL> kernel_l = fl.restrict_to(kernel_cols);
  if (kernel_l.rank() * AlgebraTraits<AL>::dim != q)
    throw Error(Errc::InternalMismatch, "sections do not form a free module over the algebra");
  auto g0 = descend_matrix<A>(kernel_l.gram, sample_a);
  if (!g0) throw Error(Errc::InternalMismatch, "form on global sections is not constant");
  res.kernel = fl.is_quadratic() ? Form<A>::quadratic(*g0, prob.form.inv)
                                 : Form<A>::hermitian(*g0, prob.form.inv, prob.form.delta);
  if (!is_nonsingular(res.kernel)) throw Error(Errc::SingularInducedForm, "descended kernel is singular");
  if (deg * res.kernel.rank() + 2 * res.index != deg * n)
    throw Error(Errc::InternalMismatch, "rank bookkeeping fails");
  transcript.push_back("kernel over the base field: rank " + std::to_string(res.kernel.rank()));

  verify_reconstruction<A>(fl, n_flat, kernel_cols, kernel_l);
  transcript.push_back("reconstruction verified: kernel plus " + std::to_string(res.index) +
                       " hyperbolic plane(s) is isometric to the input over L");

  if (auto why = anisotropy_over_L(res.kernel)) {
    res.certified = true;
    transcript.push_back("kernel anisotropic over L: " + *why);
  } else {
    transcript.push_back("anisotropy over L not certified at bound " + std::to_string(prob.bound));
  }
  if constexpr (std::is_same_v<A, Rational>) {
    if (res.kernel.rank() > 0 && res.kernel.is_quadratic()) {
      Matrix<Rational> s = res.kernel.polar();
      int sg = definiteness(s);
      if (sg != 0) transcript.push_back(std::string("kernel is ") + (sg > 0 ? "positive" : "negative") + " definite over QQ");
    }
  }
  res.transcript = std::move(transcript);
  return res;
}

// Greedy search for a totally isotropic N over L, then descent.
template <class A>
DescentResult<A> anisotropic_kernel(const ExcellenceProblem<A>& prob) {
  using AL = ExtensionOf<A>;
  if (!is_nonsingular(prob.form)) throw Error(Errc::SingularInput, "anisotropic_kernel needs a nonsingular form");
  Form<AL> fl = extend_to_L(prob.form, prob.chart);
  std::vector<std::string> transcript;
  transcript.push_back("extended to L over chart " + prob.chart->name);
  Matrix<AL> gens = Matrix<AL>::zeros(fl.rank(), 0, fl.gram.sample());
  bool capped = false;
  for (;;) {
    auto found = find_isotropic(fl, gens, prob.bound);
    capped = capped || found.capped;
    if (!found.vector) {
      transcript.push_back("search at bound " + std::to_string(prob.bound) + " over " +
                           std::to_string(found.candidates) + " candidates: no further isotropic vector" +
                           (found.capped ? " (capped)" : ""));
      break;
    }
    std::string vec;
    for (int i = 0; i < found.vector->rows(); ++i) vec += (i ? ", " : "") + (*found.vector)(i, 0).str();
    transcript.push_back("isotropic vector (" + vec + ")");
    gens = hcat(gens, *found.vector);
  }
  auto res = descend_from(prob, fl, gens, std::move(transcript));
  res.search_capped = capped;
  return res;
}

}  // namespace conex
