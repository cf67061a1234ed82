// Copyright 2026 The conex authors.
// Licensed under the Apache License, Version 2.0.
#include <gtest/gtest.h>

#include "conex/excellence.hpp"
#include "conex/random.hpp"

namespace conex {
namespace {

using L = LElem<Rational>;
using Q = Quat<Rational>;
using QL = Quat<L>;

ChartPtr<Rational> chart() {
  static ChartPtr<Rational> ch = default_chart(make_quaternion(Rational(-1), Rational(-1)), DivisionStatus::Division);
  return ch;
}
L c(long v) { return L::constant(Rational(v), chart()); }

Form<Rational> diag_form(std::vector<long> d) {
  std::vector<Rational> r;
  for (long x : d) r.emplace_back(x);
  return Form<Rational>::quadratic(Matrix<Rational>::diag(r), identity_involution(Rational(0)));
}

// O_U-span membership of the columns of v in the lattice spanned by basis.
bool in_lattice(const Matrix<L>& basis, const Matrix<L>& v, bool at_u) {
  auto sol = basis.solve(v);
  if (!sol) return false;
  for (int i = 0; i < sol->rows(); ++i)
    for (int j = 0; j < sol->cols(); ++j)
      if (!(at_u ? in_OU((*sol)(i, j)) : in_Oinf((*sol)(i, j)))) return false;
  return true;
}

TEST(Excellence, RowReductionOverOU) {
  Sampler s(3);
  L x = L::var_x(chart()), y = L::var_y(chart());
  for (int it = 0; it < 5; ++it) {
    Matrix<L> m = Matrix<L>::zeros(3, 2, c(0));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 2; ++j) m(i, j) = c(s.uniform(-2, 2)) + c(s.uniform(-2, 2)) * x + c(s.uniform(-1, 1)) * y;
    if (m.rank() < 2) continue;
    auto red = ou_row_reduce(m);
    EXPECT_EQ(red.u * m, red.reduced);
    EXPECT_EQ(red.u * red.u_inv, Matrix<L>::identity(3, c(0)));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) EXPECT_TRUE(in_OU(red.u(i, j)) && in_OU(red.u_inv(i, j)));
    EXPECT_TRUE(red.reduced(1, 0).is_zero() && red.reduced(2, 0).is_zero() && red.reduced(2, 1).is_zero());
  }
}

struct Tautological {
  Form<Q> form;
  Form<QL> fl;
  QL e, r, s, t;
};

Tautological tautological_setup() {
  auto ch = chart();
  auto p = ch->algebra;
  const Q zq = Q::scalar(Rational(0), p);
  Tautological tt{Form<Q>::hermitian(Matrix<Q>::from_rows({{zq.one()}}), conjugation(zq), 1), {}, {}, {}, {}, {}};
  tt.fl = extend_to_L(tt.form, ch);
  const QL sl = tt.fl.gram.sample();
  tt.r = Extension<Q>::lift(ch->r, sl);
  tt.s = Extension<Q>::lift(ch->s, sl);
  tt.t = Extension<Q>::lift(ch->t, sl);
  L x = L::var_x(ch), y = L::var_y(ch);
  tt.e = tt.r.scaled(x) + tt.s.scaled(y) + tt.t;
  return tt;
}

Matrix<L> flat(const QL& v) {
  Matrix<L> m = Matrix<L>::zeros(4, 1, c(0));
  for (int k = 0; k < 4; ++k) m(k, 0) = v.coeff(k);
  return m;
}

TEST(Excellence, TautologicalLattices) {
  auto tt = tautological_setup();
  auto ch = chart();
  EXPECT_TRUE(tt.e.nrd().is_zero());
  Matrix<QL> gens = Matrix<QL>::from_rows({{tt.e}});
  Matrix<L> n = flat_span(gens);
  ASSERT_EQ(n.cols(), 2);
  // N^perp = N for the hermitian form <1>
  Matrix<L> perp = flat_span(orthogonal_submodule(tt.fl.polar(), gens, tt.fl.inv));
  EXPECT_EQ(hcat(n, perp).rank(), 2);
  auto sp = saturate_pair(n, perp, ch);
  Matrix<L> expect_u = hcat(flat(tt.e * tt.r), flat(tt.e * tt.s));
  EXPECT_TRUE(in_lattice(sp.n_u, expect_u, true));
  EXPECT_TRUE(in_lattice(expect_u, sp.n_u, true));
  L yinv = L::var_y(ch).inv();
  Matrix<L> expect_inf = hcat(flat(tt.e.scaled(yinv) * tt.r), flat(tt.e.scaled(yinv) * tt.t));
  EXPECT_TRUE(in_lattice(sp.n_inf, expect_inf, false));
  EXPECT_TRUE(in_lattice(expect_inf, sp.n_inf, false));
  // as a bundle: N_U basis written in the N_infinity basis
  BundleC<Rational> b{*sp.n_inf.solve(sp.n_u), ch};
  EXPECT_EQ(classify(b).str(), "I(-2)");
  EXPECT_EQ(global_sections_dim_c(b), 0);
  EXPECT_EQ(end_algebra(b).dim(), 4);

  ExcellenceProblem<Q> prob{tt.form, ch, 1};
  auto res = descend_from(prob, tt.fl, gens);
  EXPECT_EQ(res.kernel.rank(), 0);
  EXPECT_EQ(res.index, 1);
  EXPECT_TRUE(res.certified);
}

TEST(Excellence, ConstantIsotropicVector) {
  // <1, -1, 1> with N spanned by (1, 1, 0) over F: everything is constant
  auto f = diag_form({1, -1, 1});
  auto fl = extend_to_L(f, chart());
  Matrix<L> gens = Matrix<L>::from_rows({{c(1)}, {c(1)}, {c(0)}});
  auto res = descend_from(ExcellenceProblem<Rational>{f, chart(), 1}, fl, gens);
  EXPECT_EQ(res.index, 1);
  ASSERT_EQ(res.kernel.rank(), 1);
  EXPECT_TRUE(is_rational_square(res.kernel.gram(0, 0)));
  EXPECT_EQ(res.quotient_classification, "O(0)");
}

TEST(Excellence, SumsOfSquares) {
  auto run = [](std::vector<long> d) { return anisotropic_kernel(ExcellenceProblem<Rational>{diag_form(d), chart(), 1}); };
  auto r3 = run({1, 1, 1});
  EXPECT_EQ(r3.index, 1);
  ASSERT_EQ(r3.kernel.rank(), 1);
  EXPECT_TRUE(is_rational_square(-r3.kernel.gram(0, 0)));
  EXPECT_TRUE(r3.certified);
  auto r4 = run({1, 1, 1, 1});
  EXPECT_EQ(r4.index, 2);
  EXPECT_EQ(r4.kernel.rank(), 0);
  EXPECT_TRUE(r4.certified);
  auto r5 = run({1, 1, 1, 1, 1});
  EXPECT_EQ(r5.index, 2);
  ASSERT_EQ(r5.kernel.rank(), 1);
  EXPECT_TRUE(is_rational_square(r5.kernel.gram(0, 0)));
  EXPECT_TRUE(r5.certified);
  // deterministic witness and transcript
  EXPECT_EQ(run({1, 1, 1}).transcript, r3.transcript);
}

TEST(Excellence, HermitianOneBySearch) {
  auto tt = tautological_setup();
  auto res = anisotropic_kernel(ExcellenceProblem<Q>{tt.form, chart(), 1});
  EXPECT_EQ(res.kernel.rank(), 0);
  EXPECT_EQ(res.index, 1);
  EXPECT_EQ(res.n_l_dim, 2);
  EXPECT_TRUE(res.certified);
}

TEST(Excellence, HermitianRankTwo) {
  // <1, 1> over (-1,-1) is hyperbolic over L with N = eQ_L + eQ_L; the
  // search over 8 coordinates is out of reach, so N is given
  auto tt = tautological_setup();
  auto p = chart()->algebra;
  const Q zq = Q::scalar(Rational(0), p), one = zq.one();
  auto f = Form<Q>::hermitian(Matrix<Q>::from_rows({{one, zq}, {zq, one}}), conjugation(zq), 1);
  auto fl = extend_to_L(f, chart());
  const QL zl = fl.gram.sample();
  Matrix<QL> gens = Matrix<QL>::from_rows({{tt.e, zl}, {zl, tt.e}});
  auto res = descend_from(ExcellenceProblem<Q>{f, chart(), 1}, fl, gens);
  EXPECT_EQ(res.kernel.rank(), 0);
  EXPECT_EQ(res.index, 2);
  EXPECT_TRUE(res.certified);
  // <1, -1> keeps nothing either, through a constant isotropic vector
  auto g = Form<Q>::hermitian(Matrix<Q>::from_rows({{one, zq}, {zq, -one}}), conjugation(zq), 1);
  auto gl = extend_to_L(g, chart());
  Matrix<QL> v = Matrix<QL>::from_rows({{zl.one()}, {zl.one()}});
  auto r2 = descend_from(ExcellenceProblem<Q>{g, chart(), 1}, gl, v);
  EXPECT_EQ(r2.kernel.rank(), 0);
  EXPECT_EQ(r2.index, 2);
}

TEST(Excellence, QuaternionKernelBasis) {
  // <1, 1, 1> with N = eQ_L in the first slot leaves the constant <1, 1>
  auto tt = tautological_setup();
  auto p = chart()->algebra;
  const Q zq = Q::scalar(Rational(0), p), one = zq.one();
  auto f = Form<Q>::hermitian(Matrix<Q>::diag({one, one, one}), conjugation(zq), 1);
  auto fl = extend_to_L(f, chart());
  const QL zl = fl.gram.sample();
  auto res = descend_from(ExcellenceProblem<Q>{f, chart(), 1}, fl, Matrix<QL>::from_rows({{tt.e}, {zl}, {zl}}));
  EXPECT_EQ(res.index, 1);
  ASSERT_EQ(res.kernel.rank(), 2);
  EXPECT_TRUE(is_nonsingular(res.kernel));
  EXPECT_FALSE(res.certified);
  EXPECT_EQ(res.quotient_classification, "O(0) + O(0) + O(0) + O(0) + O(0) + O(0) + O(0) + O(0)");
}

TEST(Excellence, CharacteristicTwoSmoke) {
  using RT = RatFunc<Fp, 't'>;
  const RT z(Fp(0, 2)), one = z.one(), tv = RT::var(Fp(0, 2));
  auto ch = default_chart(make_quaternion(one, tv), DivisionStatus::Division);
  Matrix<RT> g = Matrix<RT>::zeros(4, 4, z);
  g(0, 0) = one;
  g(0, 1) = one;
  g(1, 1) = one;
  g(2, 2) = tv;
  g(2, 3) = tv;
  g(3, 3) = tv;
  auto f = Form<RT>::quadratic(g, identity_involution(z));
  ASSERT_TRUE(is_nonsingular(f));
  auto res = anisotropic_kernel(ExcellenceProblem<RT>{f, ch, 1});
  EXPECT_EQ(res.index, 2);
  EXPECT_EQ(res.kernel.rank(), 0);
  EXPECT_TRUE(res.certified);
}

}  // namespace
}  // namespace conex
