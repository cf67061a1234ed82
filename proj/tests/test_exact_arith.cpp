// Copyright 2026 The conex authors.
// Licensed under the Apache License, Version 2.0.
#include <gtest/gtest.h>

#include "conex/quadext.hpp"
#include "conex/random.hpp"
#include "conex/ratfunc.hpp"

namespace conex {
namespace {

using RQ = RatFunc<Rational>;
using R7 = RatFunc<Fp>;
using PQ = Poly<Rational>;

const Rational kQ(0);
const Fp k7(0, 7);

template <class K>
RatFunc<K> u_of(const K& z) {
  return RatFunc<K>::var(z);
}

template <class K>
RatFunc<K> c_of(const K& z, long n) {
  return RatFunc<K>(z.from_int(n));
}

// Oracle valuation at 0: strip factors of u from explicit coefficient lists.
template <class K>
int oracle_w0(const RatFunc<K>& f) {
  auto mult = [](const Poly<K>& p) {
    int k = 0;
    while (p.coeff(k).is_zero()) ++k;
    return k;
  };
  return mult(f.num()) - mult(f.den());
}

// Oracle valuation at infinity through the substitution u -> 1/u.
template <class K>
int oracle_winf(const RatFunc<K>& f) {
  auto rev = [](const Poly<K>& p, int d) {
    std::vector<K> c;
    for (int i = d; i >= 0; --i) c.push_back(p.coeff(i));
    return Poly<K>(c, p.zero_elem());
  };
  int d = std::max(f.num().deg(), f.den().deg());
  RatFunc<K> g(rev(f.num(), d), rev(f.den(), d));
  return oracle_w0(g);
}

TEST(ExactArith, ValuationExamples) {
  RQ u = u_of(kQ), one = c_of(kQ, 1);
  EXPECT_EQ(u.val0(), 1);
  EXPECT_EQ((u - one).val0(), 0);
  EXPECT_EQ((u - one).valinf(), -1);
  EXPECT_EQ(u.inv().valinf(), 1);
  RQ f = (u * u - one) / u;
  EXPECT_EQ(f.val0(), -1);
  EXPECT_EQ(f.valinf(), -1);
  EXPECT_THROW(RQ(kQ).val0(), Error);
}

TEST(ExactArith, UnitTest) {
  RQ u = u_of(kQ), one = c_of(kQ, 1);
  EXPECT_TRUE(is_unit_OS((u + one) / (u - one)));
  EXPECT_FALSE(is_unit_OS(u));
  EXPECT_FALSE(is_unit_OS(RQ(kQ)));
}

TEST(ExactArith, FactorRank1Examples) {
  RQ u = u_of(kQ), one = c_of(kQ, 1);
  auto a = factor_rank1(u - one);
  EXPECT_TRUE(a.unit.is_one());
  EXPECT_EQ(a.k, 1);
  EXPECT_EQ(a.alpha, 0);
  auto b = factor_rank1(u);
  EXPECT_TRUE(b.unit.is_one());
  EXPECT_EQ(b.k, 0);
  EXPECT_EQ(b.alpha, 1);
  auto c = factor_rank1((u * u - one) / u);
  EXPECT_EQ(c.unit, (u + one) / (u - one));
  EXPECT_EQ(c.k, 2);
  EXPECT_EQ(c.alpha, -1);
}

TEST(ExactArith, ApproximateExamples) {
  RQ u = u_of(kQ), one = c_of(kQ, 1);
  EXPECT_TRUE(approximate((u + one) / (u * u + u + one)).is_zero());
  EXPECT_EQ(approximate(u.inv()), u.inv());
  RQ lam = approximate(u / (u - one));
  EXPECT_EQ(lam, one);
  RQ rest = u / (u - one) - lam;
  EXPECT_EQ(rest.val0(), 0);
  EXPECT_EQ(rest.valinf(), 1);
}

template <class K>
void random_properties(const K& ctx, uint64_t seed) {
  Sampler s(seed);
  RatFunc<K> u = u_of(ctx), one = c_of(ctx, 1);
  for (int it = 0; it < 200; ++it) {
    RatFunc<K> f = s.nonzero_ratfunc(ctx), g = s.nonzero_ratfunc(ctx);
    // Shift valuations around so that both signs occur.
    f *= pow(u, static_cast<int>(s.uniform(-2, 2)));
    ASSERT_EQ(f.val0(), oracle_w0(f));
    ASSERT_EQ(f.valinf(), oracle_winf(f));
    ASSERT_EQ((f * g).val0(), f.val0() + g.val0());
    ASSERT_EQ((f * g).valinf(), f.valinf() + g.valinf());
    RatFunc<K> h = f + g;
    if (!h.is_zero()) {
      ASSERT_GE(h.val0(), std::min(f.val0(), g.val0()));
      ASSERT_GE(h.valinf(), std::min(f.valinf(), g.valinf()));
      if (f.val0() != g.val0()) {
        ASSERT_EQ(h.val0(), std::min(f.val0(), g.val0()));
      }
      if (f.valinf() != g.valinf()) {
        ASSERT_EQ(h.valinf(), std::min(f.valinf(), g.valinf()));
      }
    }
    auto fac = factor_rank1(f);
    ASSERT_TRUE(is_unit_OS(fac.unit));
    ASSERT_EQ(fac.unit * pow(u - one, fac.k) * pow(u, fac.alpha), f);
    RatFunc<K> lam = approximate(f);
    ASSERT_TRUE(lam.is_laurent());
    RatFunc<K> rest = f - lam;
    if (!rest.is_zero()) {
      ASSERT_GE(rest.val0(), 0);
      ASSERT_GT(rest.valinf(), 0);
    }
    // Field axioms spot checks.
    ASSERT_EQ(f * f.inv(), one);
    ASSERT_EQ((f + g) - g, f);
    ASSERT_EQ((f * g) / g, f);
  }
}

TEST(ExactArith, RandomPropertiesGF7) { random_properties(k7, 7); }
TEST(ExactArith, RandomPropertiesQQ) { random_properties(kQ, 11); }

TEST(ExactArith, CanonicalForm) {
  RQ u = u_of(kQ), one = c_of(kQ, 1), two = c_of(kQ, 2);
  RQ f = (two * u * u - two) / (two * u - two);
  EXPECT_EQ(f, u + one);
  EXPECT_TRUE(f.den().is_one());
  RQ g = RQ(PQ({Rational(1), Rational(3)}, kQ), PQ({Rational(2), Rational(4)}, kQ));
  EXPECT_TRUE(g.den().lc().is_one());
}

TEST(ExactArith, Printing) {
  RQ u = u_of(kQ), one = c_of(kQ, 1);
  RQ f = c_of(kQ, 3) * u * u - RQ(Rational(1, 2)) * u + c_of(kQ, 4);
  EXPECT_EQ(f.str(), "3*u^2 - 1/2*u + 4");
  EXPECT_EQ(((u * u - one) / u).str(), "(u^2 - 1)/u");
}

TEST(ExactArith, PolynomialGcd) {
  Sampler s(3);
  for (int it = 0; it < 100; ++it) {
    auto a = s.poly<Fp, 'u'>(k7), b = s.poly<Fp, 'u'>(k7);
    auto [g, x, y] = ext_gcd(a, b);
    ASSERT_EQ(x * a + y * b, g);
    if (!g.is_zero()) {
      ASSERT_TRUE((a % g).is_zero());
      ASSERT_TRUE((b % g).is_zero());
    }
  }
}

// The integer remainder sequence used over QQ must agree with the plain
// rational Euclid that ext_gcd runs.
TEST(ExactArith, RationalGcdMatchesEuclid) {
  Sampler s(17);
  for (int it = 0; it < 200; ++it) {
    PQ common = s.poly<Rational, 'u'>(kQ, 2);
    if (common.is_zero()) continue;
    PQ a = common * s.poly<Rational, 'u'>(kQ, 3), b = common * s.poly<Rational, 'u'>(kQ, 3);
    PQ g = gcd(a, b);
    ASSERT_EQ(g, std::get<0>(ext_gcd(a, b)));
  }
}

TEST(ExactArith, QuadExtGaussian) {
  auto p = QuadExt<Rational>::make_params(Rational(0), Rational(1), "i");
  auto i = QuadExt<Rational>::gen(p);
  auto one = i.one();
  EXPECT_EQ(i * i, -one);
  EXPECT_EQ(i.conj(), -i);
  EXPECT_EQ(i.norm(), Rational(1));
  auto z = one + i + i;
  EXPECT_EQ(z * z.inv(), one);
  EXPECT_EQ(z.conj().conj(), z);
  EXPECT_TRUE((z * z.conj()).in_base());
  EXPECT_THROW(QuadExt<Rational>::make_params(Rational(2), Rational(1)), Error);
}

TEST(ExactArith, QuadExtCharTwoSeparability) {
  Fp z2(0, 2);
  EXPECT_THROW(QuadExt<Fp>::make_params(z2, Fp(1, 2)), Error);
  auto p = QuadExt<Fp>::make_params(Fp(1, 2), Fp(1, 2));
  auto w = QuadExt<Fp>::gen(p);
  // GF(4): w^2 = w + 1, the conjugate of w is w + 1.
  EXPECT_EQ(w * w, w + w.one());
  EXPECT_EQ(w.conj(), w + w.one());
  EXPECT_EQ(w * w.conj(), w.one());
}

}  // namespace
}  // namespace conex
