// Copyright 2026 The conex authors.
// Licensed under the Apache License, Version 2.0.
#pragma once

// Text formats:
//   fields   QQ | GF(p) | GF(p)(t)
//   charts   quaternion(a, b; FIELD) with an optional "; division" flag;
//            commas may replace the semicolons
//   forms    quad|herm|skewherm  [diag(...) | upper [[..]] | [[..]]]  over ALG  [conj | orth(v)]
//            ALG = FIELD | quat(a, b; FIELD)
//   scalars  +, -, *, /, ^ and parentheses over integers and the variables
//            of the context: t (base field), u (P^1), X and Y (conic),
//            i, j, ij or k (quaternions)
//   matrix files: either a literal [[..],[..]] or one row per line with
//            comma separated entries; '#' starts a comment

#include <cctype>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "conex/conic.hpp"
#include "conex/fp.hpp"
#include "conex/matrix.hpp"
#include "conex/quaternion.hpp"
#include "conex/ratfunc.hpp"

namespace conex {

[[noreturn]] inline void parse_fail(const std::string& what) { throw Error(Errc::ParseError, what); }

inline std::string trim(std::string_view s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

// Splits at `sep` outside of (), [] nesting.
inline std::vector<std::string> split_top(std::string_view s, char sep) {
  std::vector<std::string> out;
  int depth = 0;
  size_t start = 0;
  for (size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c == '(' || c == '[') ++depth;
    if (c == ')' || c == ']') --depth;
    if (depth < 0) parse_fail("unbalanced brackets in '" + std::string(s) + "'");
    if (c == sep && depth == 0) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  if (depth != 0) parse_fail("unbalanced brackets in '" + std::string(s) + "'");
  out.push_back(trim(s.substr(start)));
  return out;
}

// Recursive descent over a ring T with variables supplied by `ident`.
template <class T>
class ExprParser {
 public:
  using Ident = std::function<std::optional<T>(const std::string&)>;
  ExprParser(std::string_view src, T zero, Ident ident) : s_(src), zero_(std::move(zero)), ident_(std::move(ident)) {}

  T parse() {
    T v = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    parse_fail(what + " at position " + std::to_string(pos_) + " in '" + std::string(s_) + "'");
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  T expr() {
    T v = term();
    for (;;) {
      if (eat('+'))
        v = v + term();
      else if (eat('-'))
        v = v - term();
      else
        return v;
    }
  }
  T term() {
    T v = unary();
    for (;;) {
      if (eat('*')) {
        v = v * unary();
      } else if (eat('/')) {
        T d = unary();
        if (d.is_zero()) fail("division by zero");
        v = v * d.inv();
      } else {
        return v;
      }
    }
  }
  T unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }
  T power() {
    T base = atom();
    if (!eat('^')) return base;
    skip();
    bool neg = eat('-');
    skip();
    size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected an integer exponent");
    long e = std::stol(std::string(s_.substr(start, pos_ - start)));
    if (neg) {
      if (base.is_zero()) fail("negative power of zero");
      base = base.inv();
    }
    T acc = zero_.one();
    for (long k = 0; k < e; ++k) acc = acc * base;
    return acc;
  }
  T atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      T v = expr();
      if (!eat(')')) fail("expected ')'");
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      T v = zero_;
      const T ten = zero_.from_int(10);
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
        v = v * ten + zero_.from_int(s_[pos_++] - '0');
      if (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_])))
        fail("write products with '*'");
      return v;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      std::string name(s_.substr(start, pos_ - start));
      if (auto v = ident_(name)) return *v;
      fail("unknown symbol '" + name + "'");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view s_;
  size_t pos_ = 0;
  T zero_;
  Ident ident_;
};

// ---- fields ----

enum class FieldKind { Rationals, Prime, PrimeFunctions };

struct FieldDesc {
  FieldKind kind = FieldKind::Rationals;
  uint32_t p = 0;
  std::string str() const {
    switch (kind) {
      case FieldKind::Rationals:
        return "QQ";
      case FieldKind::Prime:
        return "GF(" + std::to_string(p) + ")";
      default:
        return "GF(" + std::to_string(p) + ")(t)";
    }
  }
};

inline FieldDesc parse_field(std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s == "QQ" || s == "Q") return {FieldKind::Rationals, 0};
  if (s.rfind("GF(", 0) == 0) {
    size_t close = s.find(')');
    if (close == std::string::npos) parse_fail("bad field descriptor '" + s + "'");
    std::string digits = s.substr(3, close - 3);
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos || digits.size() > 9)
      parse_fail("bad prime in '" + s + "'");
    long p = std::stol(digits);
    if (!is_prime(p)) parse_fail(digits + " is not prime");
    std::string rest = s.substr(close + 1);
    if (rest.empty()) return {FieldKind::Prime, static_cast<uint32_t>(p)};
    if (rest == "(t)") return {FieldKind::PrimeFunctions, static_cast<uint32_t>(p)};
  }
  parse_fail("unknown field '" + s + "' (expected QQ, GF(p) or GF(p)(t))");
}

using FpT = RatFunc<Fp, 't'>;

// Calls fn with the zero of the field.
template <class Fn>
auto with_field(const FieldDesc& f, Fn&& fn) {
  switch (f.kind) {
    case FieldKind::Rationals:
      return fn(Rational(0));
    case FieldKind::Prime:
      return fn(Fp(0, f.p));
    default:
      return fn(FpT(Fp(0, f.p)));
  }
}

// Variables of the base field itself.
template <class F>
std::optional<F> field_symbol(const std::string& name, const F& zero) {
  if constexpr (std::is_same_v<F, FpT>) {
    if (name == "t") return FpT::var(zero.zero_elem());
  }
  (void)name;
  (void)zero;
  return std::nullopt;
}

template <class F>
F parse_scalar(std::string_view text, const F& zero) {
  return ExprParser<F>(text, zero, [&](const std::string& n) { return field_symbol(n, zero); }).parse();
}

// Elements of F(u).
template <class F>
RatFunc<F> parse_ku(std::string_view text, const F& zero) {
  using R = RatFunc<F>;
  return ExprParser<R>(text, R(zero), [&](const std::string& n) -> std::optional<R> {
           if (n == "u") return R::var(zero);
           if (auto c = field_symbol(n, zero)) return R(*c);
           return std::nullopt;
         }).parse();
}

// Elements f(X) + Y g(X) of the conic function field.
template <class F>
LElem<F> parse_l(std::string_view text, const ChartPtr<F>& ch) {
  using L = LElem<F>;
  const F zero = ch->qr.zero();
  return ExprParser<L>(text, L::constant(zero, ch), [&](const std::string& n) -> std::optional<L> {
           if (n == "X") return L::var_x(ch);
           if (n == "Y") return L::var_y(ch);
           if (auto c = field_symbol(n, zero)) return L::constant(*c, ch);
           return std::nullopt;
         }).parse();
}

template <class F>
Quat<F> parse_quat(std::string_view text, const QuatParamsPtr<F>& q) {
  using Q = Quat<F>;
  const F zero = q->a.zero();
  return ExprParser<Q>(text, Q::scalar(zero, q), [&](const std::string& n) -> std::optional<Q> {
           if (n == "i") return Q::basis(1, q);
           if (n == "j") return Q::basis(2, q);
           if (n == "ij" || n == "k") return Q::basis(3, q);
           if (auto c = field_symbol(n, zero)) return Q::scalar(*c, q);
           return std::nullopt;
         }).parse();
}

// Parser for entries of a form over a field or a quaternion algebra.
template <class F>
std::function<F(const std::string&)> element_parser(const F& zero) {
  return [zero](const std::string& s) { return parse_scalar(s, zero); };
}
template <class F>
std::function<Quat<F>(const std::string&)> element_parser(const Quat<F>& sample) {
  auto params = sample.params();
  return [params](const std::string& s) { return parse_quat(s, params); };
}

// ---- matrices ----

using TextMatrix = std::vector<std::vector<std::string>>;

// [[a, b], [c, d]]
inline TextMatrix parse_matrix_literal(std::string_view text) {
  std::string s = trim(text);
  if (s.size() < 2 || s.front() != '[' || s.back() != ']') parse_fail("expected a matrix literal [[...], ...]");
  TextMatrix rows;
  std::string inner = trim(std::string_view(s).substr(1, s.size() - 2));
  if (inner.empty()) return rows;
  for (const auto& row : split_top(inner, ',')) {
    if (row.size() < 2 || row.front() != '[' || row.back() != ']') parse_fail("expected a row [...] in '" + s + "'");
    std::string body = trim(std::string_view(row).substr(1, row.size() - 2));
    rows.push_back(body.empty() ? std::vector<std::string>{} : split_top(body, ','));
  }
  for (const auto& r : rows)
    if (r.size() != rows[0].size()) parse_fail("rows of different lengths in '" + s + "'");
  return rows;
}

inline TextMatrix parse_matrix_text(std::string_view text) {
  std::string body;
  std::vector<std::string> lines;
  size_t start = 0;
  for (size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == '\n') {
      std::string line(text.substr(start, i - start));
      size_t hash = line.find('#');
      if (hash != std::string::npos) line.resize(hash);
      line = trim(line);
      if (!line.empty()) lines.push_back(line);
      start = i + 1;
    }
  }
  if (!lines.empty() && lines[0].front() == '[') {
    for (const auto& l : lines) body += l + " ";
    return parse_matrix_literal(body);
  }
  TextMatrix rows;
  for (const auto& l : lines) rows.push_back(split_top(l, ','));
  for (const auto& r : rows)
    if (r.size() != rows[0].size()) parse_fail("matrix rows of different lengths");
  return rows;
}

template <class T, class Elem>
Matrix<T> build_matrix(const TextMatrix& tm, const T& zero, Elem elem) {
  const int r = static_cast<int>(tm.size()), c = r ? static_cast<int>(tm[0].size()) : 0;
  Matrix<T> m = Matrix<T>::zeros(r, c, zero);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = elem(tm[i][j]);
  return m;
}

// ---- charts ----

struct ChartDesc {
  FieldDesc field;
  std::string a, b;
  bool force_division = false;
};

inline ChartDesc parse_chart(std::string_view text) {
  std::string s = trim(text);
  size_t open = s.find('(');
  std::string head = trim(std::string_view(s).substr(0, open));
  if (open == std::string::npos || s.back() != ')' || (head != "quaternion" && head != "quat"))
    parse_fail("expected a chart quaternion(a, b; FIELD), got '" + s + "'");
  // "a, b; FIELD; flag" or, where ';' is awkward (shell lists, CMake), "a, b, FIELD, flag"
  std::string body = s.substr(open + 1, s.size() - open - 2);
  std::vector<std::string> parts;
  if (body.find(';') != std::string::npos) {
    auto semi = split_top(body, ';');
    parts = split_top(semi[0], ',');
    parts.insert(parts.end(), semi.begin() + 1, semi.end());
  } else {
    parts = split_top(body, ',');
  }
  if (parts.size() < 3 || parts.size() > 4) parse_fail("expected quaternion(a, b; FIELD[; division]), got '" + s + "'");
  ChartDesc d{parse_field(parts[2]), parts[0], parts[1], false};
  if (parts.size() == 4) {
    if (parts[3] != "division") parse_fail("unknown chart flag '" + parts[3] + "'");
    d.force_division = true;
  }
  return d;
}

// Builds the default chart; the conic must be pointless, i.e. the algebra
// a division algebra (decided over QQ, asserted with "; division"
// otherwise).
template <class F>
ChartPtr<F> make_chart_from(const ChartDesc& d, const F& zero) {
  auto q = make_quaternion(parse_scalar(d.a, zero), parse_scalar(d.b, zero));
  DivisionStatus st = DivisionStatus::Undecided;
  if (d.force_division) {
    st = DivisionStatus::Division;
  } else if constexpr (std::is_same_v<F, Rational>) {
    st = division_status(q);
  } else if constexpr (std::is_same_v<F, Fp>) {
    st = DivisionStatus::Split;
  }
  if (st == DivisionStatus::Split) throw Error(Errc::NotDivision, "quaternion algebra " + q->name + " is split");
  if (st == DivisionStatus::Undecided)
    throw Error(Errc::NotDivision, "cannot decide whether " + q->name + " is a division algebra; append '; division'");
  return default_chart(q, st);
}

// ---- forms ----

struct AlgebraDesc {
  FieldDesc field;
  bool quaternion = false;
  std::string a, b;
};

struct FormDesc {
  bool hermitian = false;
  int delta = 1;
  std::string shape;  // diag, upper or full
  TextMatrix entries;
  AlgebraDesc algebra;
  std::string involution;  // empty, "conj" or the pure quaternion of orth(v)
};

inline AlgebraDesc parse_algebra(std::string_view text) {
  std::string s = trim(text);
  if (s.rfind("quat", 0) == 0 && s.find('(') != std::string::npos) {
    ChartDesc c = parse_chart(s);
    return {c.field, true, c.a, c.b};
  }
  return {parse_field(s), false, "", ""};
}

inline FormDesc parse_form(std::string_view text) {
  std::string s = trim(text);
  FormDesc d;
  size_t sp = s.find_first_of(" \t");
  std::string kind = s.substr(0, sp);
  if (kind == "quad") {
  } else if (kind == "herm") {
    d.hermitian = true;
  } else if (kind == "skewherm") {
    d.hermitian = true;
    d.delta = -1;
  } else {
    parse_fail("form must start with quad, herm or skewherm: '" + s + "'");
  }
  std::string rest = sp == std::string::npos ? "" : trim(std::string_view(s).substr(sp));
  // the matrix part ends at the top-level word "over"
  size_t over = std::string::npos;
  int depth = 0;
  for (size_t i = 0; i + 4 <= rest.size(); ++i) {
    char c = rest[i];
    if (c == '(' || c == '[') ++depth;
    if (c == ')' || c == ']') --depth;
    if (depth == 0 && rest.compare(i, 4, "over") == 0 && (i == 0 || std::isspace(static_cast<unsigned char>(rest[i - 1])))) {
      over = i;
      break;
    }
  }
  if (over == std::string::npos) parse_fail("form needs 'over ALGEBRA': '" + s + "'");
  std::string mat = trim(std::string_view(rest).substr(0, over));
  std::string tail = trim(std::string_view(rest).substr(over + 4));
  if (mat.rfind("diag", 0) == 0) {
    d.shape = "diag";
    std::string in = trim(std::string_view(mat).substr(4));
    if (in.size() < 2 || in.front() != '(' || in.back() != ')') parse_fail("expected diag(a, b, ...)");
    for (auto& e : split_top(std::string_view(in).substr(1, in.size() - 2), ',')) d.entries.push_back({e});
  } else if (mat.rfind("upper", 0) == 0) {
    d.shape = "upper";
    d.entries = parse_matrix_literal(std::string_view(mat).substr(5));
  } else {
    d.shape = "full";
    d.entries = parse_matrix_literal(mat);
  }
  for (const auto& r : d.entries)
    if (d.shape != "diag" && r.size() != d.entries.size()) parse_fail("form matrix must be square");
  // algebra, then an optional involution word
  std::string alg = tail, inv;
  if (tail.rfind("quat", 0) == 0) {
    size_t close = tail.find('('), depth = 0;
    for (; close < tail.size(); ++close) {
      if (tail[close] == '(') ++depth;
      if (tail[close] == ')' && --depth == 0) break;
    }
    if (close >= tail.size()) parse_fail("unterminated quat(...)");
    alg = tail.substr(0, close + 1);
    inv = trim(std::string_view(tail).substr(close + 1));
  } else {
    size_t end = tail.find_first_of(" \t");
    // GF(p)(t) and QQ contain no spaces
    alg = tail.substr(0, end);
    inv = end == std::string::npos ? "" : trim(std::string_view(tail).substr(end));
  }
  d.algebra = parse_algebra(alg);
  if (inv.empty() || inv == "id") {
  } else if (inv == "conj") {
    d.involution = "conj";
  } else if (inv.rfind("orth(", 0) == 0 && inv.back() == ')') {
    d.involution = trim(std::string_view(inv).substr(5, inv.size() - 6));
  } else {
    parse_fail("unknown involution '" + inv + "'");
  }
  if (!d.algebra.quaternion && !d.involution.empty())
    parse_fail("only the identity involution exists on a field");
  if (d.algebra.quaternion && !d.hermitian && d.involution.empty())
    parse_fail("quadratic forms over a quaternion algebra need an involution (conj or orth(v))");
  return d;
}

template <class A>
Matrix<A> form_matrix(const FormDesc& d, const A& sample, const std::function<A(const std::string&)>& elem) {
  const int n = static_cast<int>(d.entries.size());
  Matrix<A> m = Matrix<A>::zeros(n, n, sample);
  if (d.shape == "diag") {
    for (int i = 0; i < n; ++i) m(i, i) = elem(d.entries[i][0]);
    return m;
  }
  m = build_matrix(d.entries, sample, elem);
  if (d.shape == "upper")
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < i; ++j)
        if (!m(i, j).is_zero()) parse_fail("upper form matrix has a nonzero entry below the diagonal");
  return m;
}

}  // namespace conex
