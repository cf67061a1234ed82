// Copyright 2026 The conex authors.
// Licensed under the Apache License, Version 2.0.
#include <gtest/gtest.h>

#include "conex/conic_bundle.hpp"
#include "conex/random.hpp"

namespace conex {
namespace {

using L = LElem<Rational>;
using K = QuadExt<Rational>;
using B = BundleC<Rational>;

ChartPtr<Rational> chart() {
  static ChartPtr<Rational> ch =
      default_chart(make_quaternion(Rational(-1), Rational(-1)), DivisionStatus::Division);
  return ch;
}
L c(long v) { return L::constant(Rational(v), chart()); }
K kz() { return K::embed(Rational(0), chart()->kparams); }

ConicClassification labels(std::vector<ConicSummand> s) { return {std::move(s)}; }

TEST(ConicBundles, LineBundles) {
  for (int n = -3; n <= 3; ++n) {
    B o = line_c(n, chart());
    EXPECT_EQ(degree_c(o), 2 * n);
    EXPECT_EQ(splitting_type(pullback(o)), std::vector<int>{2 * n});
    EXPECT_EQ(classify(o).str(), "O(" + std::to_string(2 * n) + ")");
    EXPECT_EQ(degree_c(dual_c(o)), -2 * n);
  }
}

TEST(ConicBundles, SectionCounts) {
  for (int n = -3; n <= 4; ++n) {
    B o = line_c(n, chart());
    EXPECT_EQ(global_sections_dim_c(o), n >= 0 ? 2 * n + 1 : 0) << n;
  }
  // O(0) + O(2): constants and the three sections 1, X, Y of O(2)
  EXPECT_EQ(global_sections_dim_c(direct_sum_c(line_c(0, chart()), line_c(1, chart()))), 4);
}

TEST(ConicBundles, PushforwardOfLines) {
  for (int n = -2; n <= 2; ++n) {
    B even = pushforward(twist_line(2 * n, kz()), chart());
    EXPECT_EQ(classify(even), labels({{false, 2 * n}, {false, 2 * n}}));
    B odd = pushforward(twist_line(2 * n + 1, kz()), chart());
    EXPECT_EQ(classify(odd), labels({{true, 4 * n + 2}}));
    EXPECT_EQ(degree_c(odd), 4 * n + 2);
  }
}

TEST(ConicBundles, TensorAndDualIdentities) {
  auto ind = [](int d) { return pushforward(twist_line(d / 2, kz()), chart()); };
  EXPECT_EQ(classify(dual_c(ind(2))), labels({{true, -2}}));
  EXPECT_EQ(classify(dual_c(ind(-6))), labels({{true, 6}}));
  EXPECT_EQ(classify(tensor_c(ind(2), ind(-2))), labels({{false, 0}, {false, 0}, {false, 0}, {false, 0}}));
  EXPECT_EQ(classify(tensor_c(ind(2), line_c(1, chart()))), labels({{true, 4 + 2}}));
}

TEST(ConicBundles, Tautological) {
  auto ch = chart();
  auto t = tautological_bundle(ch);
  EXPECT_EQ(degree_c(t.bundle), -2);
  EXPECT_EQ(splitting_type(pullback(t.bundle)), (std::vector<int>{-1, -1}));
  EXPECT_EQ(classify(t.bundle), labels({{true, -2}}));
  EXPECT_EQ(global_sections_dim_c(t.bundle), 0);
  auto end = end_algebra(t.bundle);
  EXPECT_EQ(end.dim(), 4);
  EXPECT_EQ(center_dim(end, Rational(0)), 1);
  EXPECT_TRUE(verify_action(t, ch->algebra));

  QuatOverL<Rational> ql(ch->algebra, ch);
  auto e = ql.generic_nilpotent();
  auto e2 = ql.mul(e, e);
  for (const auto& x : e2) EXPECT_TRUE(x.is_zero());
  // e s = -(X/Y) e r - (1/Y) e t
  auto es = ql.mul(e, ql.lift(ch->s)), er = ql.mul(e, ql.lift(ch->r)), et = ql.mul(e, ql.lift(ch->t));
  L x = L::var_x(ch), y = L::var_y(ch);
  for (int k = 0; k < 4; ++k) EXPECT_EQ(es[k], -(x / y) * er[k] - et[k] / y);
}

TEST(ConicBundles, EndomorphismsOfSums) {
  B s = direct_sum_c(line_c(0, chart()), line_c(1, chart()));
  auto end = end_algebra(s);
  EXPECT_EQ(end.dim(), 5);
  EXPECT_EQ(end_algebra(line_c(0, chart())).dim(), 1);
}

// Elementary changes of basis on both lattices.
Matrix<L> random_ou_unimodular(Sampler& s, int n) {
  L x = L::var_x(chart()), y = L::var_y(chart());
  Matrix<L> m = Matrix<L>::identity(n, c(0));
  for (int k = 0; k < 2 * n; ++k) {
    int i = static_cast<int>(s.uniform(0, n - 1)), j = static_cast<int>(s.uniform(0, n - 1));
    if (i == j) {
      m.scale_row(i, c(s.coin() ? 2 : -3));
      continue;
    }
    L f = c(s.uniform(-2, 2)) + c(s.uniform(-2, 2)) * x + c(s.uniform(-1, 1)) * y;
    m.add_row(i, j, f);
  }
  return m;
}
Matrix<L> random_oinf_unimodular(Sampler& s, int n) {
  L x = L::var_x(chart()), y = L::var_y(chart());
  Matrix<L> m = Matrix<L>::identity(n, c(0));
  for (int k = 0; k < 2 * n; ++k) {
    int i = static_cast<int>(s.uniform(0, n - 1)), j = static_cast<int>(s.uniform(0, n - 1));
    if (i == j) continue;
    L f = (c(s.uniform(-2, 2)) * x + c(s.uniform(-2, 2)) * y + c(s.uniform(-2, 2))) / (x * x + c(s.uniform(1, 3)));
    m.add_row(i, j, f);
  }
  return m;
}

TEST(ConicBundles, ClassificationInvariantUnderBaseChange) {
  Sampler s(5);
  auto ind = pushforward(twist_line(1, kz()), chart());
  B e = direct_sum_c(ind, line_c(-1, chart()));
  auto base = classify(e);
  EXPECT_EQ(base, labels({{false, -2}, {true, 2}}));
  for (int it = 0; it < 3; ++it) {
    Matrix<L> p = random_ou_unimodular(s, 3), r = random_oinf_unimodular(s, 3);
    B e2{r.inverse() * e.transition * p, chart()};
    EXPECT_EQ(degree_c(e2), degree_c(e));
    EXPECT_EQ(classify(e2), base);
  }
}

TEST(ConicBundles, ModelBundlesAndPushPull) {
  ConicClassification cl = labels({{false, 2}, {false, -4}, {true, -2}});
  EXPECT_EQ(classify(model_bundle(cl, chart())), classification_from_type({2, -4, -1, -1}));
  B t = tautological_bundle(chart()).bundle;
  B ff = pushforward(pullback(t), chart());
  EXPECT_EQ(classify(ff), classify(direct_sum_c(t, t)));
  EXPECT_EQ(degree_c(ff), 2 * degree(pullback(t)));
}

}  // namespace
}  // namespace conex
