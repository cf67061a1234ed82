// Copyright 2026 The conex authors.
// Licensed under the Apache License, Version 2.0.
#include <gtest/gtest.h>

#include "conex/parse.hpp"
#include "conex/random.hpp"

namespace conex {
namespace {

TEST(Parse, Fields) {
  EXPECT_EQ(parse_field("QQ").kind, FieldKind::Rationals);
  auto f = parse_field("GF(7)");
  EXPECT_EQ(f.kind, FieldKind::Prime);
  EXPECT_EQ(f.p, 7u);
  EXPECT_EQ(parse_field("GF(2)(t)").str(), "GF(2)(t)");
  EXPECT_THROW(parse_field("GF(8)"), Error);
  EXPECT_THROW(parse_field("RR"), Error);
}

TEST(Parse, ScalarsAndPrecedence) {
  const Rational z(0);
  EXPECT_EQ(parse_scalar("1 + 2*3^2 - 4/8", z), Rational(37) / Rational(2));
  EXPECT_EQ(parse_scalar("-(2 - 5)^3", z), Rational(27));
  EXPECT_EQ(parse_scalar("2^-2", z), Rational(1) / Rational(4));
  EXPECT_EQ(parse_scalar("123456789012345678901234567890", z).str(), "123456789012345678901234567890");
  EXPECT_EQ(parse_scalar("3/4", Fp(0, 7)), Fp(6, 7));
  EXPECT_THROW(parse_scalar("1/0", z), Error);
  EXPECT_THROW(parse_scalar("2u", z), Error);
  EXPECT_THROW(parse_scalar("u", z), Error);
  EXPECT_THROW(parse_scalar("(1", z), Error);
  const FpT zt(Fp(0, 2));
  EXPECT_EQ(parse_scalar("t^2 + 1", zt), FpT::var(Fp(0, 2)) * FpT::var(Fp(0, 2)) + zt.one());
}

TEST(Parse, PolynomialRoundTrip) {
  const Rational z(0);
  auto f = parse_ku("3*u^2 - 1/2*u + 4", z);
  EXPECT_EQ(f.str(), "3*u^2 - 1/2*u + 4");
  Sampler s(4);
  for (int it = 0; it < 30; ++it) {
    auto g = s.ratfunc(z, 3);
    EXPECT_EQ(parse_ku(g.str(), z), g) << g.str();
    auto h = s.ratfunc(Fp(0, 7), 3);
    EXPECT_EQ(parse_ku(h.str(), Fp(0, 7)), h) << h.str();
  }
}

TEST(Parse, ConicFunctionField) {
  auto ch = make_chart_from(parse_chart("quaternion(-1,-1; QQ)"), Rational(0));
  auto x = LElem<Rational>::var_x(ch), y = LElem<Rational>::var_y(ch);
  auto v = parse_l("X^2 - 1 + Y*(X + 2)", ch);
  EXPECT_EQ(v, x * x - x.one() + y * (x + x.from_int(2)));
  // Y^2 reduces through the conic equation
  EXPECT_EQ(parse_l("Y^2", ch), y * y);
  for (auto e : {v, y, -y, x - y, (x + y).inv()}) EXPECT_EQ(parse_l(e.str(), ch), e) << e.str();
}

TEST(Parse, Charts) {
  auto semi = parse_chart("quaternion(-1,-1; QQ)");
  auto comma = parse_chart("quaternion(-1, -1, QQ)");
  EXPECT_EQ(semi.a, comma.a);
  EXPECT_EQ(semi.b, comma.b);
  EXPECT_EQ(semi.field.kind, comma.field.kind);
  EXPECT_FALSE(semi.force_division);
  EXPECT_TRUE(parse_chart("quaternion(1, t; GF(2)(t); division)").force_division);
  // split algebras have rational points
  EXPECT_THROW(make_chart_from(parse_chart("quaternion(1,-1; QQ)"), Rational(0)), Error);
  EXPECT_THROW(make_chart_from(parse_chart("quaternion(-1,-1; GF(3))"), Fp(0, 3)), Error);
  // undecided without the flag
  EXPECT_THROW(make_chart_from(parse_chart("quaternion(1, t; GF(2)(t))"), FpT(Fp(0, 2))), Error);
  auto ch = make_chart_from(parse_chart("quaternion(1, t; GF(2)(t); division)"), FpT(Fp(0, 2)));
  EXPECT_EQ(ch->qr.characteristic(), 2);
  EXPECT_THROW(parse_chart("quaternion(-1; QQ)"), Error);
}

TEST(Parse, Matrices) {
  auto lit = parse_matrix_text("[[1, u], [u^2, (u+1)/2]]");
  auto rows = parse_matrix_text("# comment\n1, u  # trailing\n\nu^2, (u+1)/2\n");
  EXPECT_EQ(lit, rows);
  ASSERT_EQ(lit.size(), 2u);
  EXPECT_EQ(lit[1][1], "(u+1)/2");
  EXPECT_THROW(parse_matrix_text("1, 2\n3"), Error);
  const Rational z(0);
  auto m = build_matrix(lit, RatFunc<Rational>(z), [&](const std::string& s) { return parse_ku(s, z); });
  EXPECT_EQ(m(0, 1), RatFunc<Rational>::var(z));
}

TEST(Parse, FormDescriptors) {
  auto d = parse_form("quad diag(1,1,1) over QQ");
  EXPECT_FALSE(d.hermitian);
  EXPECT_EQ(d.shape, "diag");
  EXPECT_EQ(d.entries.size(), 3u);
  EXPECT_FALSE(d.algebra.quaternion);

  auto h = parse_form("herm [[1,0],[0,1]] over quat(-1,-1;QQ) conj");
  EXPECT_TRUE(h.hermitian);
  EXPECT_EQ(h.shape, "full");
  EXPECT_TRUE(h.algebra.quaternion);
  EXPECT_EQ(h.algebra.a, "-1");
  EXPECT_EQ(h.involution, "conj");

  auto u = parse_form("quad upper [[1,1],[0,1]] over GF(2)");
  EXPECT_EQ(u.shape, "upper");
  EXPECT_EQ(u.algebra.field.p, 2u);
  std::function<Fp(const std::string&)> elem = element_parser(Fp(0, 2));
  auto m = form_matrix<Fp>(u, Fp(0, 2), elem);
  EXPECT_EQ(m(0, 1), Fp(1, 2));

  auto o = parse_form("quad [[1]] over quat(1, t; GF(3)(t)) orth(i)");
  EXPECT_EQ(o.involution, "i");
  EXPECT_EQ(o.algebra.field.kind, FieldKind::PrimeFunctions);

  EXPECT_THROW(parse_form("quad [[1]] over quat(-1,-1;QQ)"), Error);  // needs an involution
  EXPECT_THROW(parse_form("quad diag(1) over QQ conj"), Error);
  EXPECT_THROW(parse_form("cubic diag(1) over QQ"), Error);
  EXPECT_THROW(parse_form("quad diag(1)"), Error);
  EXPECT_THROW(parse_form("quad [[1,2]] over QQ"), Error);
}

TEST(Parse, UpperShapeRejectsLowerEntries) {
  auto d = parse_form("quad upper [[1,0],[1,1]] over QQ");
  std::function<Rational(const std::string&)> elem = element_parser(Rational(0));
  EXPECT_THROW(form_matrix<Rational>(d, Rational(0), elem), Error);
}

TEST(Parse, QuaternionElements) {
  auto q = make_quaternion(Rational(-1), Rational(-1));
  using Q = Quat<Rational>;
  auto x = parse_quat("1 + 2*i - j/2 + 3*ij", q);
  EXPECT_EQ(x, Q({Rational(1), Rational(2), Rational(-1) / Rational(2), Rational(3)}, q));
  EXPECT_EQ(parse_quat("i*j", q), parse_quat("k", q));
  EXPECT_EQ(parse_quat("i^2", q), Q::scalar(Rational(-1), q));
  EXPECT_EQ(parse_quat(x.str(), q), x);
  EXPECT_EQ(parse_quat("1/(1 + i)", q) * parse_quat("1 + i", q), Q::scalar(Rational(1), q));
}

}  // namespace
}  // namespace conex
