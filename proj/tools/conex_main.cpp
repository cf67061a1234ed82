// Copyright 2026 The conex authors.
// Licensed under the Apache License, Version 2.0.
//
// Command line front end. Exit codes: 0 certified result, 2 result whose
// anisotropy is only search-limited, 1 error.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "conex/conic_bundle.hpp"
#include "conex/excellence.hpp"
#include "conex/normal_form.hpp"
#include "conex/p1_bundle.hpp"
#include "conex/parse.hpp"

namespace conex {
namespace {

constexpr int kSchemaVersion = 1;
constexpr int kExitCertified = 0;
constexpr int kExitError = 1;
constexpr int kExitSearchLimited = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::InvalidArgument, "cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string join_ints(const std::vector<int>& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
  return s;
}

template <class T>
nlohmann::ordered_json matrix_json(const Matrix<T>& m) {
  auto out = nlohmann::ordered_json::array();
  for (int i = 0; i < m.rows(); ++i) {
    auto row = nlohmann::ordered_json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j).str());
    out.push_back(row);
  }
  return out;
}

// ---- bundles over P^1 ----

int splitting_type_cmd(const std::string& field, const std::string& file, bool certificate) {
  return with_field(parse_field(field), [&](auto zero) {
    using F = decltype(zero);
    using RF = RatFunc<F>;
    auto g = build_matrix(parse_matrix_text(read_file(file)), RF(zero), [&](const std::string& s) { return parse_ku(s, zero); });
    auto cert = grothendieck_normal_form(g);
    if (!verify_certificate(g, cert)) throw Error(Errc::InternalMismatch, "normal form certificate failed verification");
    std::cout << "exponents: " << join_ints(cert.exponents) << "\n";
    if (certificate) {
      std::cout << "p: " << cert.p.str() << "\n";
      std::cout << "q: " << cert.q.str() << "\n";
      std::cout << "p*g*q = diag((u-1)^k) verified\n";
    }
    return kExitCertified;
  });
}

int classify_p1_cmd(const std::string& field, const std::string& file) {
  return with_field(parse_field(field), [&](auto zero) {
    using F = decltype(zero);
    using RF = RatFunc<F>;
    BundleP1<F> e{build_matrix(parse_matrix_text(read_file(file)), RF(zero), [&](const std::string& s) { return parse_ku(s, zero); })};
    auto type = splitting_type(e);
    std::cout << "exponents: " << join_ints(type) << "\n";
    std::cout << "degree: " << degree(e) << "\n";
    std::cout << "h0: " << global_sections_dim(e) << "\n";
    return kExitCertified;
  });
}

// ---- bundles over the conic ----

template <class Fn>
int with_chart(const std::string& desc, Fn&& fn) {
  ChartDesc cd = parse_chart(desc);
  return with_field(cd.field, [&](auto zero) -> int {
    using F = decltype(zero);
    if constexpr (std::is_same_v<F, Fp>) {
      throw Error(Errc::NotDivision, "every quaternion algebra over a finite field is split");
    } else {
      return fn(make_chart_from(cd, zero));
    }
  });
}

int classify_conic_cmd(const std::string& chart, const std::string& file) {
  return with_chart(chart, [&](auto ch) {
    using F = typename std::decay_t<decltype(*ch)>::Field;
    BundleC<F> e{build_matrix(parse_matrix_text(read_file(file)), LElem<F>::constant(ch->qr.zero(), ch),
                              [&](const std::string& s) { return parse_l(s, ch); }),
                 ch};
    if (!e.transition.square() || e.transition.det().is_zero())
      throw Error(Errc::SingularInput, "transition matrix must be square and invertible");
    std::cout << classify(e).str() << "\n";
    return kExitCertified;
  });
}

// ---- forms ----

// Builds the algebra sample and the typed form, then calls fn(form).
template <class F, class Fn>
int with_form(const FormDesc& d, const F& zero, Fn&& fn) {
  if (!d.algebra.quaternion) {
    Matrix<F> m = form_matrix<F>(d, zero, element_parser(zero));
    auto inv = identity_involution(zero);
    return fn(d.hermitian ? Form<F>::hermitian(m, inv, d.delta) : Form<F>::quadratic(m, inv));
  }
  using Q = Quat<F>;
  auto params = make_quaternion(parse_scalar(d.algebra.a, zero), parse_scalar(d.algebra.b, zero));
  const Q zq = Q::scalar(zero, params);
  Matrix<Q> m = form_matrix<Q>(d, zq, element_parser(zq));
  Involution<Q> inv = d.involution.empty() || d.involution == "conj" ? conjugation(zq)
                                                                      : orthogonal_involution(parse_quat(d.involution, params));
  return fn(d.hermitian ? Form<Q>::hermitian(m, inv, d.delta) : Form<Q>::quadratic(m, inv));
}

template <class A>
void print_result(const DescentResult<A>& r, bool json) {
  if (json) {
    nlohmann::ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["kernel_gram"] = matrix_json(r.kernel.gram);
    j["kernel_rank"] = r.kernel.rank();
    j["kernel_kind"] = r.kernel.is_quadratic() ? "quadratic" : "hermitian";
    j["index"] = r.index;
    j["isotropic_dim_over_L"] = r.n_l_dim;
    j["flags"] = {{"certified", r.certified}, {"search_limited", !r.certified}, {"search_capped", r.search_capped}};
    j["bound"] = r.bound;
    j["quotient"] = {{"classification", r.quotient_classification}, {"degree", r.quotient_degree}};
    j["transcript"] = r.transcript;
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::cout << "index: " << r.index << "\n";
  std::cout << "kernel rank: " << r.kernel.rank() << "\n";
  std::cout << "kernel gram: " << r.kernel.gram.str() << "\n";
  std::cout << "quotient bundle: " << r.quotient_classification << "\n";
  std::cout << "status: " << (r.certified ? "certified" : "search-limited at bound " + std::to_string(r.bound)) << "\n";
  for (const auto& line : r.transcript) std::cout << "  " << line << "\n";
}

template <class A>
int exit_for(const DescentResult<A>& r) {
  return r.certified ? kExitCertified : kExitSearchLimited;
}

int anisotropic_kernel_cmd(const std::string& chart, const std::string& form, int bound, bool json) {
  ChartDesc cd = parse_chart(chart);
  FormDesc fd = parse_form(form);
  if (fd.algebra.field.kind != cd.field.kind || fd.algebra.field.p != cd.field.p)
    throw Error(Errc::InvalidArgument, "form and chart live over different fields");
  return with_chart(chart, [&](auto ch) {
    return with_form(fd, ch->qr.zero(), [&](auto f) {
      using A = typename decltype(f.gram)::value_type;
      auto res = anisotropic_kernel(ExcellenceProblem<A>{f, ch, bound});
      print_result(res, json);
      return exit_for(res);
    });
  });
}

int reduce_cmd(const std::string& form, const std::string& file) {
  FormDesc fd = parse_form(form);
  return with_field(fd.algebra.field, [&](auto zero) {
    return with_form(fd, zero, [&](auto f) {
      using A = typename decltype(f.gram)::value_type;
      const A sample = f.gram.sample();
      Matrix<A> n = build_matrix(parse_matrix_text(read_file(file)), sample, element_parser(sample));
      if (n.rows() != f.rank()) throw Error(Errc::InvalidArgument, "isotropic generators must be columns of length " + std::to_string(f.rank()));
      auto red = reduce_form(f, n);
      std::cout << "reduced form: " << red.form.gram.str() << "\n";
      std::cout << "complement: " << red.complement.str() << "\n";
      std::cout << "rank: " << f.rank() << " -> " << red.form.rank() << "\n";
      return kExitCertified;
    });
  });
}

// ---- demo ----

int demo_cmd() {
  auto ch = default_chart(make_quaternion(Rational(-1), Rational(-1)), DivisionStatus::Division);
  int worst = kExitCertified;
  auto note = [&](int code) { worst = std::max(worst, code); };

  std::cout << "== tautological bundle over " << ch->name << "\n";
  auto taut = tautological_bundle(ch);
  std::cout << "transition: " << taut.bundle.transition.str() << "\n";
  std::cout << "degree: " << degree_c(taut.bundle) << ", classification: " << classify(taut.bundle).str()
            << ", h0: " << global_sections_dim_c(taut.bundle) << ", dim End: " << end_algebra(taut.bundle).dim() << "\n";

  for (std::vector<long> d : {std::vector<long>{1, 1, 1}, std::vector<long>{1, 1, 1, 1, 1}}) {
    std::vector<Rational> r(d.begin(), d.end());
    std::cout << "\n== quadratic <" << join_ints(std::vector<int>(d.begin(), d.end())) << "> over QQ\n";
    auto res = anisotropic_kernel(ExcellenceProblem<Rational>{
        Form<Rational>::quadratic(Matrix<Rational>::diag(r), identity_involution(Rational(0))), ch, 1});
    print_result(res, false);
    note(exit_for(res));
  }

  std::cout << "\n== hermitian <1> over " << ch->algebra->name << " with conjugation\n";
  const Quat<Rational> zq = Quat<Rational>::scalar(Rational(0), ch->algebra);
  auto res = anisotropic_kernel(ExcellenceProblem<Quat<Rational>>{
      Form<Quat<Rational>>::hermitian(Matrix<Quat<Rational>>::from_rows({{zq.one()}}), conjugation(zq), 1), ch, 1});
  print_result(res, false);
  note(exit_for(res));
  return worst;
}

}  // namespace
}  // namespace conex

int main(int argc, char** argv) {
  using namespace conex;
  CLI::App app{"conex: vector bundles over P^1 and conics, and the anisotropic kernel over a conic function field"};
  app.require_subcommand(1);

  std::string field = "QQ", matrix, chart, form, isotropic;
  bool certificate = false, json = false;
  int bound = 1;

  auto* st = app.add_subcommand("splitting-type", "Grothendieck normal form of a transition matrix over K(u)");
  st->add_option("--field", field, "QQ, GF(p) or GF(p)(t)")->capture_default_str();
  st->add_option("--matrix", matrix, "matrix file, entries in u")->required();
  st->add_flag("--certificate", certificate, "print the matrices p and q");

  auto* cp = app.add_subcommand("classify-p1", "splitting type, degree and h0 of a bundle on P^1");
  cp->add_option("--field", field, "QQ, GF(p) or GF(p)(t)")->capture_default_str();
  cp->add_option("--matrix", matrix, "matrix file, entries in u")->required();

  auto* cc = app.add_subcommand("classify-conic", "classification of a bundle on a pointless conic");
  cc->add_option("--chart", chart, "e.g. 'quaternion(-1,-1; QQ)'")->required();
  cc->add_option("--matrix", matrix, "matrix file, entries f(X) + Y*g(X)")->required();

  auto* ak = app.add_subcommand("anisotropic-kernel", "anisotropic kernel over the conic function field, descended");
  ak->add_option("--chart", chart, "e.g. 'quaternion(-1,-1; QQ)'")->required();
  ak->add_option("--form", form, "e.g. 'quad diag(1,1,1) over QQ'")->required();
  ak->add_option("--bound", bound, "search bound")->capture_default_str()->check(CLI::NonNegativeNumber);
  ak->add_flag("--json", json, "machine readable output");

  auto* rd = app.add_subcommand("reduce", "reduction of a form at a totally isotropic submodule");
  rd->add_option("--form", form, "form descriptor")->required();
  rd->add_option("--isotropic", isotropic, "matrix file whose columns span the submodule")->required();

  auto* dm = app.add_subcommand("demo", "worked instances over the (-1,-1) conic");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }

  try {
    if (st->parsed()) return splitting_type_cmd(field, matrix, certificate);
    if (cp->parsed()) return classify_p1_cmd(field, matrix);
    if (cc->parsed()) return classify_conic_cmd(chart, matrix);
    if (ak->parsed()) return anisotropic_kernel_cmd(chart, form, bound, json);
    if (rd->parsed()) return reduce_cmd(form, isotropic);
    if (dm->parsed()) return demo_cmd();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
