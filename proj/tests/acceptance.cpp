// Copyright 2026 The conex authors.
// Licensed under the Apache License, Version 2.0.
//
// Acceptance suite: one PASS/FAIL line per criterion. All comparisons are
// exact; the only tolerances are the wall-clock budgets below.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "conex/conic_bundle.hpp"
#include "conex/excellence.hpp"
#include "conex/normal_form.hpp"
#include "conex/p1_bundle.hpp"
#include "conex/random.hpp"
#include "oracles.hpp"

namespace conex {
namespace {

constexpr double kNormalFormBudgetSeconds = 60.0;
constexpr double kExcellenceBudgetSeconds = 120.0;

// Criterion 1 sizes.
constexpr int kNormalFormGF7 = 500;
constexpr int kNormalFormQQ = 100;
constexpr int kPerturbations = 20;
constexpr int kMaxRank = 4;
constexpr int kMaxEntryDegree = 3;

constexpr int kRandomDegreeBundles = 50;
constexpr int kFormsPerField = 200;
constexpr int kGoldmanRandom = 20;

struct Check {
  bool ok = true;
  std::string detail;
  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }
std::string fmt_seconds(double t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f s", t);
  return buf;
}

using L = LElem<Rational>;
using Q = Quat<Rational>;
using QL = Quat<L>;
using KQ = QuadExt<Rational>;

ChartPtr<Rational> rational_chart() {
  static ChartPtr<Rational> ch =
      default_chart(make_quaternion(Rational(-1), Rational(-1)), DivisionStatus::Division);
  return ch;
}

// ---- 1 ----

template <class K>
void normal_form_suite(Check& c, const K& ctx, uint64_t seed, int count, int& instances) {
  Sampler s(seed);
  for (int it = 0; it < count && c.ok; ++it, ++instances) {
    const int n = static_cast<int>(s.uniform(1, kMaxRank));
    auto g = s.invertible(n, ctx, kMaxEntryDegree);
    auto cert = grothendieck_normal_form(g);
    c.require(verify_certificate(g, cert), "certificate rejected for " + g.str());
    // diag((u-1)^k) has valuation sum -sum(k); det g is computed by elimination
    auto d = g.det();
    int sum = 0;
    for (int k : cert.exponents) sum += k;
    c.require(-sum == d.val0() + d.valinf(), "exponent sum differs from the valuations of det for " + g.str());
    for (int j = 0; j < kPerturbations && c.ok; ++j) {
      auto h = s.gl_os(n, ctx) * g * s.gl_ov(n, ctx);
      c.require(normal_form_exponents(h) == cert.exponents, "exponents changed under a change of lattice bases");
    }
  }
}

Check criterion_normal_form() {
  Check c;
  auto t0 = Clock::now();
  int instances = 0;
  normal_form_suite(c, Fp(0, 7), 1001, kNormalFormGF7, instances);
  normal_form_suite(c, Rational(0), 1002, kNormalFormQQ, instances);
  double t = seconds_since(t0);
  c.require(t < kNormalFormBudgetSeconds, "runtime " + fmt_seconds(t) + " over budget");
  if (c.ok) c.detail = std::to_string(instances) + " matrices, " + std::to_string(instances * kPerturbations) +
                       " perturbations, " + fmt_seconds(t);
  return c;
}

// ---- 2 ----

Check criterion_p1_sections() {
  Check c;
  for (int n = -5; n <= 5; ++n) {
    const int expected = std::max(1 + n, 0);
    c.require(global_sections_basis(twist_line(n, Rational(0))).cols() == expected, "QQ, n = " + std::to_string(n));
    c.require(global_sections_dim(twist_line(n, Fp(0, 7))) == expected, "GF(7), n = " + std::to_string(n));
  }
  if (c.ok) c.detail = "n in [-5, 5] over QQ and GF(7)";
  return c;
}

// ---- 3 ----

Check criterion_conic_sections() {
  Check c;
  for (int n = -3; n <= 4; ++n) {
    const int expected = n >= 0 ? 2 * n + 1 : 0;
    auto o = line_c(n, rational_chart());  // O_C(2n)
    c.require(global_sections_c(o).cols() == expected, "descent route, n = " + std::to_string(n));
    c.require(global_sections_dim_c(o) == expected, "checked route, n = " + std::to_string(n));
  }
  if (c.ok) c.detail = "O_C(2n), n in [-3, 4], chart (-1,-1)/QQ";
  return c;
}

// ---- 4 ----

ConicClassification labels(std::vector<ConicSummand> s) { return {std::move(s)}; }

Check criterion_pushforward() {
  Check c;
  auto ch = rational_chart();
  const KQ kz = KQ::embed(Rational(0), ch->kparams);
  for (int n = -2; n <= 2; ++n) {
    c.require(classify(pushforward(twist_line(2 * n, kz), ch)) == labels({{false, 2 * n}, {false, 2 * n}}),
              "even pushforward, n = " + std::to_string(n));
    c.require(classify(pushforward(twist_line(2 * n + 1, kz), ch)) == labels({{true, 4 * n + 2}}),
              "odd pushforward, n = " + std::to_string(n));
  }
  Sampler s(404);
  const L zl = L::constant(Rational(0), ch), x = L::var_x(ch), y = L::var_y(ch);
  for (int it = 0; it < kRandomDegreeBundles && c.ok; ++it) {
    const int n = static_cast<int>(s.uniform(1, 2));
    BundleP1<KQ> e{s.invertible(n, kz, 2)};
    c.require(degree_c(pushforward(e, ch)) == 2 * degree(e), "deg of pushforward for " + e.transition.str());
    Matrix<L> g = Matrix<L>::zeros(n, n, zl);
    do {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          L num = L::constant(s.scalar(Rational(0), 5), ch) + L::constant(s.scalar(Rational(0), 5), ch) * x +
                  L::constant(s.scalar(Rational(0), 5), ch) * y;
          L den = x.from_int(s.uniform(1, 3)) + (s.coin() ? x * x : x);
          g(i, j) = s.coin() ? num : num / den;
        }
    } while (g.det().is_zero());
    BundleC<Rational> b{g, ch};
    c.require(degree(pullback(b)) == degree_c(b), "deg of pullback for " + g.str());
  }
  if (c.ok) c.detail = "n in [-2, 2]; " + std::to_string(kRandomDegreeBundles) + " random bundles each way";
  return c;
}

// ---- 5 ----

Matrix<L> flat(const QL& v) {
  Matrix<L> m = Matrix<L>::zeros(4, 1, v.coeff(0).zero());
  for (int k = 0; k < 4; ++k) m(k, 0) = v.coeff(k);
  return m;
}

// Columns of v lie in the lattice spanned by basis, over O_U or O_infinity.
bool in_lattice(const Matrix<L>& basis, const Matrix<L>& v, bool at_u) {
  auto sol = basis.solve(v);
  if (!sol) return false;
  for (int i = 0; i < sol->rows(); ++i)
    for (int j = 0; j < sol->cols(); ++j)
      if (!(at_u ? in_OU((*sol)(i, j)) : in_Oinf((*sol)(i, j)))) return false;
  return true;
}

Check criterion_tautological() {
  Check c;
  auto ch = rational_chart();
  auto taut = tautological_bundle(ch);
  const L x = L::var_x(ch), y = L::var_y(ch), zl = L::constant(Rational(0), ch);
  c.require(taut.bundle.transition == Matrix<L>::from_rows({{y, -x}, {zl, -x.one()}}), "transition");
  c.require(degree_c(taut.bundle) == -2, "degree");
  c.require(global_sections_dim_c(taut.bundle) == 0, "sections");
  c.require(classify(taut.bundle) == labels({{true, -2}}), "classification");
  c.require(end_algebra(taut.bundle).dim() == 4, "End dimension");
  c.require(verify_action(taut, ch->algebra), "quaternion action");

  // saturation of N = e Q_L reproduces both lattice bases
  const Q zq = Q::scalar(Rational(0), ch->algebra);
  auto form = Form<Q>::hermitian(Matrix<Q>::from_rows({{zq.one()}}), conjugation(zq), 1);
  auto fl = extend_to_L(form, ch);
  const QL sl = fl.gram.sample();
  QL r = Extension<Q>::lift(ch->r, sl), s = Extension<Q>::lift(ch->s, sl), t = Extension<Q>::lift(ch->t, sl);
  QL e = r.scaled(x) + s.scaled(y) + t;
  c.require(e.nrd().is_zero() && (e * e).is_zero(), "generic nilpotent");
  Matrix<QL> gens = Matrix<QL>::from_rows({{e}});
  auto sp = saturate_pair(flat_span(gens), flat_span(orthogonal_submodule(fl.polar(), gens, fl.inv)), ch);
  Matrix<L> basis_u = hcat(flat(e * r), flat(e * s));
  Matrix<L> basis_inf = hcat(flat(e.scaled(y.inv()) * r), flat(e.scaled(y.inv()) * t));
  c.require(in_lattice(sp.n_u, basis_u, true) && in_lattice(basis_u, sp.n_u, true), "O_U-basis (er, es)");
  c.require(in_lattice(sp.n_inf, basis_inf, false) && in_lattice(basis_inf, sp.n_inf, false),
            "O_infinity-basis (e r/Y, e t/Y)");
  BundleC<Rational> saturated{*sp.n_inf.solve(sp.n_u), ch};
  c.require(classify(saturated) == labels({{true, -2}}) && degree_c(saturated) == -2, "saturated bundle");
  if (c.ok) c.detail = "degree -2, h0 0, I(-2), dim End 4, lattices match";
  return c;
}

// ---- 6 ----

Check criterion_tensor() {
  Check c;
  auto ch = rational_chart();
  const KQ kz = KQ::embed(Rational(0), ch->kparams);
  // I_C(2n) for odd n, O_C(m) for even m
  auto indec = [&](int n) { return pushforward(twist_line(n, kz), ch); };
  int pairs = 0;
  for (int n = -3; n <= 3; n += 2) {
    for (int m = -3; m <= 3; m += 2, ++pairs)
      c.require(classify(tensor_c(indec(n), indec(m))) ==
                    labels({{false, n + m}, {false, n + m}, {false, n + m}, {false, n + m}}),
                "I(" + std::to_string(2 * n) + ") x I(" + std::to_string(2 * m) + ")");
    for (int m = -2; m <= 2; m += 2, ++pairs)
      c.require(classify(tensor_c(indec(n), line_c(m / 2, ch))) == labels({{true, 2 * (n + m)}}),
                "I(" + std::to_string(2 * n) + ") x O(" + std::to_string(m) + ")");
  }
  if (c.ok) c.detail = std::to_string(pairs) + " products";
  return c;
}

// ---- 7 ----

Matrix<Fp> to_matrix(const oracle::SmallQuadratic& q) {
  const Fp z(0, q.p);
  Matrix<Fp> m = Matrix<Fp>::zeros(q.n(), q.n(), z);
  for (int i = 0; i < q.n(); ++i)
    for (int j = i; j < q.n(); ++j) m(i, j) = Fp(q.c[i][j], q.p);
  return m;
}

Check criterion_reduction_oracle() {
  Check c;
  int reductions = 0;
  for (int p : {2, 3, 5}) {
    Sampler s(700 + p);
    const Fp z(0, p);
    auto id = identity_involution(z);
    int tested = 0;
    while (tested < kFormsPerField && c.ok) {
      const int n = static_cast<int>(s.uniform(1, 4));
      oracle::SmallQuadratic small{p, std::vector<std::vector<int>>(n, std::vector<int>(n, 0))};
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) small.c[i][j] = static_cast<int>(s.uniform(0, p - 1));
      if (!oracle::is_nonsingular(small)) continue;
      ++tested;
      const std::string tag = "GF(" + std::to_string(p) + ") " + to_matrix(small).str();
      auto q = Form<Fp>::quadratic(to_matrix(small), id);
      c.require(is_nonsingular(q), "nonsingularity disagrees: " + tag);
      auto wd = witt_decompose(q, 0);
      const int index = oracle::witt_index(small);
      c.require(wd.index == index && wd.kernel.rank() == n - 2 * index, "kernel rank: " + tag);
      c.require(wd.certified, "not certified: " + tag);
      if (wd.index == 0) continue;
      // polar of the reduction = reduction of the polar, for every choice
      auto red = reduce_quadratic(q, wd.isotropic);
      auto herm = reduce_hermitian(Form<Fp>::hermitian(q.polar(), id, 1), wd.isotropic);
      c.require(red.form.polar() == herm.form.gram, "polar does not commute with reduction: " + tag);
      const int k = wd.isotropic.cols(), m = red.complement.cols();
      for (int trial = 0; trial < 3; ++trial) {
        ReductionChoices<Fp> ch;
        Matrix<Fp> shift = Matrix<Fp>::zeros(k, m, z), cs = Matrix<Fp>::zeros(k, k, z);
        for (int i = 0; i < k; ++i) {
          for (int j = 0; j < m; ++j) shift(i, j) = s.scalar(z);
          for (int j = 0; j < k; ++j) cs(i, j) = s.scalar(z);
        }
        ch.complement_shift = shift;
        ch.c_shift = cs;
        auto other = reduce_quadratic(q, wd.isotropic, ch);
        c.require(other.form == red.form, "reduction depends on the choices: " + tag);
        Matrix<Fp> w2 = other.complement;
        c.require(other.form.polar() == sw(w2, id) * q.polar() * w2, "shifted polar: " + tag);
      }
      ++reductions;
    }
  }
  if (c.ok) c.detail = std::to_string(3 * kFormsPerField) + " forms, " + std::to_string(reductions) + " reductions";
  return c;
}

// ---- 8 ----

template <class A>
void check_descent(Check& c, const DescentResult<A>& r, int input_rank, const std::string& tag) {
  const int d = Extension<A>::degree();
  // dim_L of the input = kernel part + N + a complement dual to N
  c.require(d * d * input_rank == d * d * r.kernel.rank() + 2 * r.n_l_dim, tag + ": rank bookkeeping");
  bool reconstructed = false;
  for (const auto& line : r.transcript) reconstructed = reconstructed || line.rfind("reconstruction verified", 0) == 0;
  c.require(reconstructed, tag + ": reconstruction not recorded");
  c.require(r.certified, tag + ": not certified");
}

Form<Rational> sum_of_squares(int n) {
  return Form<Rational>::quadratic(Matrix<Rational>::diag(std::vector<Rational>(n, Rational(1))),
                                   identity_involution(Rational(0)));
}

Check criterion_excellence() {
  Check c;
  auto ch = rational_chart();
  auto t0 = Clock::now();
  auto run = [&](int n) { return anisotropic_kernel(ExcellenceProblem<Rational>{sum_of_squares(n), ch, 1}); };

  auto r3 = run(3);
  check_descent(c, r3, 3, "<1,1,1>");
  c.require(r3.kernel.rank() == 1 && is_rational_square(-r3.kernel.gram(0, 0)), "<1,1,1>: kernel is not <-1>");
  auto r4 = run(4);
  check_descent(c, r4, 4, "<1,1,1,1>");
  c.require(r4.kernel.rank() == 0, "<1,1,1,1>: kernel is not zero");
  auto r5 = run(5);
  check_descent(c, r5, 5, "<1,1,1,1,1>");
  c.require(r5.kernel.rank() == 1 && is_rational_square(r5.kernel.gram(0, 0)), "<1,1,1,1,1>: kernel is not <1>");

  const Q zq = Q::scalar(Rational(0), ch->algebra);
  auto h = Form<Q>::hermitian(Matrix<Q>::from_rows({{zq.one()}}), conjugation(zq), 1);
  ExcellenceProblem<Q> hp{h, ch, 1};
  auto rh = anisotropic_kernel(hp);
  check_descent(c, rh, 1, "hermitian <1> by search");
  c.require(rh.kernel.rank() == 0, "hermitian <1>: kernel is not zero");
  // the same with N = e Q_L given explicitly
  auto fl = extend_to_L(h, ch);
  const QL sl = fl.gram.sample();
  const L x = L::var_x(ch), y = L::var_y(ch);
  QL e = Extension<Q>::lift(ch->r, sl).scaled(x) + Extension<Q>::lift(ch->s, sl).scaled(y) + Extension<Q>::lift(ch->t, sl);
  auto re = descend_from(hp, fl, Matrix<QL>::from_rows({{e}}));
  check_descent(c, re, 1, "hermitian <1> with N = eQ_L");
  c.require(re.kernel.rank() == 0 && re.n_l_dim == 2, "hermitian <1> with N = eQ_L: kernel is not zero");

  double t = seconds_since(t0);
  c.require(t < kExcellenceBudgetSeconds, "runtime " + fmt_seconds(t) + " over budget");
  if (c.ok) c.detail = "five runs certified and reconstructed, " + fmt_seconds(t);
  return c;
}

// ---- 9 ----

Check criterion_char_two() {
  Check c;
  using RT = RatFunc<Fp, 't'>;
  const RT z(Fp(0, 2)), one = z.one(), tv = RT::var(Fp(0, 2));
  // [1, t) over GF(2)(t), asserted to be a division algebra
  auto ch = default_chart(make_quaternion(one, tv), DivisionStatus::Division);
  Matrix<RT> g = Matrix<RT>::zeros(4, 4, z);
  g(0, 0) = one;
  g(0, 1) = one;
  g(1, 1) = one;
  g(2, 2) = tv;
  g(2, 3) = tv;
  g(3, 3) = tv;
  auto f = Form<RT>::quadratic(g, identity_involution(z));
  c.require(is_nonsingular(f), "input is singular");
  auto r = anisotropic_kernel(ExcellenceProblem<RT>{f, ch, 1});
  c.require(r.kernel.rank() + 2 * r.index == 4 && r.n_l_dim == r.index, "rank bookkeeping");
  c.require(r.quotient_degree == 0, "quotient degree");
  if (c.ok)
    c.detail = "rank 4 over GF(2)(t): index " + std::to_string(r.index) + ", kernel rank " +
               std::to_string(r.kernel.rank()) + (r.certified ? ", certified" : ", search-limited");
  return c;
}

// ---- 10 ----

Check criterion_goldman() {
  Check c;
  Sampler s(1010);
  auto p = make_quaternion(Rational(-1), Rational(-1));
  auto g = goldman_element(p);
  auto sandwich = [&](const Q& x) {
    Q acc = Q::scalar(Rational(0), p);
    for (size_t k = 0; k < g.left.size(); ++k) acc += g.left[k] * x * g.right[k];
    return acc;
  };
  for (int k = 0; k < 4; ++k) {
    Q b = Q::basis(k, p);
    c.require(sandwich(b) == Q::scalar(b.trd(), p), "(-1,-1): basis element " + std::to_string(k));
  }
  for (int it = 0; it < kGoldmanRandom; ++it) {
    Q x({s.scalar(Rational(0)), s.scalar(Rational(0)), s.scalar(Rational(0)), s.scalar(Rational(0))}, p);
    c.require(sandwich(x) == Q::scalar(x.trd(), p), "(-1,-1): " + x.str());
  }
  using M = Matrix<Rational>;
  auto gs = goldman_element_split(Rational(0));
  auto sandwich2 = [&](const M& x) {
    M acc = M::zeros(2, 2, Rational(0));
    for (size_t k = 0; k < gs.left.size(); ++k) acc = acc + gs.left[k] * x * gs.right[k];
    return acc;
  };
  const M id = M::identity(2, Rational(0));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      M unit = M::zeros(2, 2, Rational(0));
      unit(i, j) = Rational(1);
      c.require(sandwich2(unit) == id.scaled(i == j ? Rational(1) : Rational(0)), "split: matrix unit");
    }
  for (int it = 0; it < kGoldmanRandom; ++it) {
    M x = M::zeros(2, 2, Rational(0));
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) x(i, j) = s.scalar(Rational(0));
    c.require(sandwich2(x) == id.scaled(x(0, 0) + x(1, 1)), "split: " + x.str());
  }
  if (c.ok) c.detail = "basis and " + std::to_string(kGoldmanRandom) + " random elements, both algebras";
  return c;
}

}  // namespace
}  // namespace conex

int main() {
  using namespace conex;
  struct Criterion {
    const char* name;
    std::function<Check()> run;
  };
  const Criterion criteria[] = {
      {"normal form certification", criterion_normal_form},
      {"line bundle sections on P1", criterion_p1_sections},
      {"line bundle sections on the conic", criterion_conic_sections},
      {"pushforward classification and degrees", criterion_pushforward},
      {"tautological bundle", criterion_tautological},
      {"tensor identities", criterion_tensor},
      {"reduction against brute force", criterion_reduction_oracle},
      {"anisotropic kernel over the (-1,-1) conic", criterion_excellence},
      {"characteristic two smoke", criterion_char_two},
      {"Goldman element", criterion_goldman},
  };
  int failures = 0, index = 0;
  for (const auto& cr : criteria) {
    ++index;
    auto t0 = Clock::now();
    Check c;
    try {
      c = cr.run();
    } catch (const std::exception& e) {
      c.ok = false;
      c.detail = std::string("exception: ") + e.what();
    }
    if (!c.ok) ++failures;
    std::printf("%s %2d  %-44s %7.2f s  %s\n", c.ok ? "PASS" : "FAIL", index, cr.name, seconds_since(t0),
                c.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %d criteria passed\n", index - failures, index);
  return failures == 0 ? 0 : 1;
}
