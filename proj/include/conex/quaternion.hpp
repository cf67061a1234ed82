// Copyright 2026 The conex authors.
// Licensed under the Apache License, Version 2.0.
#pragma once

#include <array>
#include <memory>
#include <string>

#include "conex/quadext.hpp"

namespace conex {

// Quaternion algebra over F written as F(i) + F(i) j with
//   i^2 = lambda*i + a,  j^2 = b,  j z = conj(z) j  for z in F(i).
// lambda = 0 gives the symbol (a, b) in characteristic != 2 (ji = -ij);
// lambda = 1 gives [a, b) in characteristic 2 (i^2 + i = a, ji = (i+1)j).
template <class F>
struct QuatParams {
  F lambda, a, b;
  std::shared_ptr<const QuadExtParams<F>> sub;  // F(i): w^2 = lambda*w + a
  std::string name;
};

template <class F>
using QuatParamsPtr = std::shared_ptr<const QuatParams<F>>;

template <class F>
QuatParamsPtr<F> make_quaternion(const F& a, const F& b) {
  if (a.is_zero() || b.is_zero()) throw Error(Errc::DegenerateChart, "quaternion symbol with zero entry");
  const bool char2 = a.characteristic() == 2;
  F lambda = char2 ? a.one() : a.zero();
  // minimal polynomial of i: w^2 - lambda w - a, i.e. trace lambda, norm -a
  auto sub = QuadExt<F>::make_params(lambda, -a, "i");
  std::string name = char2 ? "[" + a.str() + "," + b.str() + ")" : "(" + a.str() + "," + b.str() + ")";
  return std::make_shared<const QuatParams<F>>(QuatParams<F>{lambda, a, b, sub, name});
}

// Element c0 + c1 i + c2 j + c3 ij.
template <class F>
class Quat {
 public:
  using Scalar = F;
  Quat() = default;
  Quat(std::array<F, 4> c, QuatParamsPtr<F> p) : c_(std::move(c)), p_(std::move(p)) {}

  static Quat scalar(const F& x, QuatParamsPtr<F> p) { return Quat({x, x.zero(), x.zero(), x.zero()}, std::move(p)); }
  // Basis element 1, i, j or ij.
  static Quat basis(int k, QuatParamsPtr<F> p) {
    F z = p->a.zero();
    std::array<F, 4> c{z, z, z, z};
    c[k] = z.one();
    return Quat(c, std::move(p));
  }

  const F& coeff(int k) const { return c_[k]; }
  const std::array<F, 4>& coeffs() const { return c_; }
  const QuatParamsPtr<F>& params() const { return p_; }

  Quat zero() const { return scalar(c_[0].zero(), p_); }
  Quat one() const { return scalar(c_[0].one(), p_); }
  Quat from_int(long n) const { return scalar(c_[0].from_int(n), p_); }
  long characteristic() const { return c_[0].characteristic(); }
  bool is_zero() const { return c_[0].is_zero() && c_[1].is_zero() && c_[2].is_zero() && c_[3].is_zero(); }
  bool is_one() const { return c_[0].is_one() && c_[1].is_zero() && c_[2].is_zero() && c_[3].is_zero(); }
  bool is_scalar() const { return c_[1].is_zero() && c_[2].is_zero() && c_[3].is_zero(); }

  // Canonical involution: conj(z1 + z2 j) = conj(z1) - z2 j.
  Quat conj() const {
    auto z1 = QuadExt<F>(c_[0], c_[1], p_->sub).conj();
    return Quat({z1.c0(), z1.c1(), -c_[2], -c_[3]}, p_);
  }
  F trd() const { return c_[0] + c_[0] + c_[1] * p_->lambda; }
  F nrd() const { return first().norm() - p_->b * second().norm(); }

  Quat inv() const {
    F n = nrd();
    if (n.is_zero()) throw Error(Errc::ZeroInput, "quaternion of reduced norm zero is not invertible");
    return conj().scaled(n.inv());
  }

  Quat scaled(const F& s) const { return Quat({c_[0] * s, c_[1] * s, c_[2] * s, c_[3] * s}, p_); }
  Quat operator-() const { return Quat({-c_[0], -c_[1], -c_[2], -c_[3]}, p_); }
  friend Quat operator+(Quat x, const Quat& y) {
    x.adopt(y);
    for (int k = 0; k < 4; ++k) x.c_[k] += y.c_[k];
    return x;
  }
  friend Quat operator-(Quat x, const Quat& y) {
    x.adopt(y);
    for (int k = 0; k < 4; ++k) x.c_[k] -= y.c_[k];
    return x;
  }
  // (z1 + z2 j)(w1 + w2 j) = (z1 w1 + b z2 conj(w2)) + (z2 conj(w1) + z1 w2) j
  friend Quat operator*(const Quat& x, const Quat& y) {
    const auto& p = x.p_ ? x.p_ : y.p_;
    if (y.is_scalar()) return x.scaled(y.c_[0]).with(p);
    if (x.is_scalar()) return y.scaled(x.c_[0]).with(p);
    Quat xx = x.with(p), yy = y.with(p);
    auto z1 = xx.first(), z2 = xx.second(), w1 = yy.first(), w2 = yy.second();
    auto r1 = z1 * w1 + (z2 * w2.conj()).scaled(p->b);
    auto r2 = z2 * w1.conj() + z1 * w2;
    return Quat({r1.c0(), r1.c1(), r2.c0(), r2.c1()}, p);
  }
  Quat& operator+=(const Quat& o) { return *this = *this + o; }
  Quat& operator-=(const Quat& o) { return *this = *this - o; }
  Quat& operator*=(const Quat& o) { return *this = *this * o; }
  friend bool operator==(const Quat& x, const Quat& y) {
    for (int k = 0; k < 4; ++k)
      if (!(x.c_[k] == y.c_[k])) return false;
    return true;
  }

  bool is_atomic() const { return is_scalar() && c_[0].is_atomic(); }
  std::string str() const {
    static const char* names[4] = {"", "i", "j", "ij"};
    std::string out;
    for (int k = 0; k < 4; ++k) {
      if (c_[k].is_zero()) continue;
      std::string term;
      if (k == 0) {
        term = c_[k].str();
      } else if (c_[k].is_one()) {
        term = names[k];
      } else {
        term = (c_[k].is_atomic() ? c_[k].str() : "(" + c_[k].str() + ")") + "*" + names[k];
      }
      out += out.empty() ? term : " + " + term;
    }
    return out.empty() ? "0" : out;
  }

 private:
  QuadExt<F> first() const { return QuadExt<F>(c_[0], c_[1], p_->sub); }
  QuadExt<F> second() const { return QuadExt<F>(c_[2], c_[3], p_->sub); }
  Quat with(const QuatParamsPtr<F>& p) const { return Quat(c_, p); }
  void adopt(const Quat& o) {
    if (!p_) p_ = o.p_;
  }

  std::array<F, 4> c_{};
  QuatParamsPtr<F> p_;
};

// Polar form of the squaring map on pure quaternions: b(v, w) = vw + wv.
template <class F>
F polar(const Quat<F>& v, const Quat<F>& w) {
  Quat<F> s = v * w + w * v;
  if (!s.is_scalar()) throw Error(Errc::InvalidArgument, "polar form of non-pure quaternions");
  return s.coeff(0);
}

// Square of a pure quaternion, as a scalar.
template <class F>
F square_scalar(const Quat<F>& v) {
  Quat<F> s = v * v;
  if (!s.is_scalar()) throw Error(Errc::InvalidArgument, "square of a non-pure quaternion");
  return s.coeff(0);
}

// Changes the base field of a quaternion entrywise, keeping the symbol.
template <class G, class F, class Lift>
Quat<G> lift_quat(const Quat<F>& x, const QuatParamsPtr<G>& target, Lift lift) {
  return Quat<G>({lift(x.coeff(0)), lift(x.coeff(1)), lift(x.coeff(2)), lift(x.coeff(3))}, target);
}

enum class DivisionStatus { Division, Split, Undecided };

// Over QQ: (a, b) with a < 0 and b < 0 has a positive definite norm form.
// Otherwise a bounded search over integer coordinates in [-bound, bound]
// either exhibits a nonzero element of reduced norm 0 or gives up.
inline DivisionStatus division_status(const QuatParamsPtr<Rational>& q, int bound = 6) {
  if (q->a.sign() < 0 && q->b.sign() < 0) return DivisionStatus::Division;
  for (int x0 = -bound; x0 <= bound; ++x0)
    for (int x1 = -bound; x1 <= bound; ++x1)
      for (int x2 = -bound; x2 <= bound; ++x2)
        for (int x3 = -bound; x3 <= bound; ++x3) {
          if (!x0 && !x1 && !x2 && !x3) continue;
          Quat<Rational> x({Rational(x0), Rational(x1), Rational(x2), Rational(x3)}, q);
          if (x.nrd().is_zero()) return DivisionStatus::Split;
        }
  return DivisionStatus::Undecided;
}

}  // namespace conex
