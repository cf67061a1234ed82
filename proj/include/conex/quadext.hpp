// Copyright 2026 The conex authors.
// Licensed under the Apache License, Version 2.0.
#pragma once

#include <memory>
#include <string>

#include "conex/poly.hpp"

namespace conex {

// Separable quadratic extension F(w) with w^2 = trace*w - norm.
template <class F>
struct QuadExtParams {
  F trace;
  F norm;
  std::string name = "w";
};

template <class F>
class QuadExt {
 public:
  using Base = F;
  using Params = QuadExtParams<F>;

  QuadExt() = default;
  QuadExt(F c0, F c1, std::shared_ptr<const Params> p) : c0_(std::move(c0)), c1_(std::move(c1)), p_(std::move(p)) {}

  // Builds the parameter block, rejecting inseparable minimal polynomials:
  // nonzero trace in characteristic 2, nonzero discriminant otherwise.
  static std::shared_ptr<const Params> make_params(const F& trace, const F& norm, std::string name = "w") {
    if (trace.characteristic() == 2) {
      if (trace.is_zero()) throw Error(Errc::DegenerateChart, "inseparable quadratic extension in characteristic 2");
    } else if ((trace * trace - trace.from_int(4) * norm).is_zero()) {
      throw Error(Errc::DegenerateChart, "quadratic extension with zero discriminant");
    }
    return std::make_shared<const Params>(Params{trace, norm, std::move(name)});
  }

  static QuadExt embed(const F& c, std::shared_ptr<const Params> p) { return QuadExt(c, c.zero(), std::move(p)); }
  static QuadExt gen(std::shared_ptr<const Params> p) {
    F one = p->trace.zero().one();
    return QuadExt(one.zero(), one, std::move(p));
  }

  const F& c0() const { return c0_; }
  const F& c1() const { return c1_; }
  const std::shared_ptr<const Params>& params() const { return p_; }

  QuadExt zero() const { return QuadExt(c0_.zero(), c0_.zero(), p_); }
  QuadExt one() const { return QuadExt(c0_.one(), c0_.zero(), p_); }
  QuadExt from_int(long n) const { return QuadExt(c0_.from_int(n), c0_.zero(), p_); }
  long characteristic() const { return c0_.characteristic(); }
  bool is_zero() const { return c0_.is_zero() && c1_.is_zero(); }
  bool is_one() const { return c0_.is_one() && c1_.is_zero(); }
  bool in_base() const { return c1_.is_zero(); }

  // Nontrivial automorphism: w -> trace - w.
  QuadExt conj() const { return QuadExt(c0_ + c1_ * p_->trace, -c1_, p_); }
  F norm() const { return c0_ * c0_ + p_->trace * c0_ * c1_ + p_->norm * c1_ * c1_; }
  F trace() const { return c0_ + c0_ + c1_ * p_->trace; }

  QuadExt inv() const {
    if (is_zero()) throw Error(Errc::ZeroInput, "inverse of zero in quadratic extension");
    F ni = norm().inv();
    QuadExt c = conj();
    return QuadExt(c.c0_ * ni, c.c1_ * ni, p_);
  }

  QuadExt operator-() const { return QuadExt(-c0_, -c1_, p_); }
  QuadExt& operator+=(const QuadExt& o) {
    adopt(o);
    c0_ += o.c0_;
    c1_ += o.c1_;
    return *this;
  }
  QuadExt& operator-=(const QuadExt& o) {
    adopt(o);
    c0_ -= o.c0_;
    c1_ -= o.c1_;
    return *this;
  }
  QuadExt& operator*=(const QuadExt& o) {
    adopt(o);
    // (a + bw)(c + dw) = ac - bd*norm + (ad + bc + bd*trace) w
    if (c1_.is_zero() && o.c1_.is_zero()) {
      c0_ *= o.c0_;
      return *this;
    }
    F bd = c1_ * o.c1_;
    F n0 = c0_ * o.c0_ - bd * p_->norm;
    F n1 = c0_ * o.c1_ + c1_ * o.c0_ + bd * p_->trace;
    c0_ = std::move(n0);
    c1_ = std::move(n1);
    return *this;
  }
  QuadExt& operator/=(const QuadExt& o) { return *this *= o.inv(); }
  friend QuadExt operator+(QuadExt a, const QuadExt& b) { return a += b; }
  friend QuadExt operator-(QuadExt a, const QuadExt& b) { return a -= b; }
  friend QuadExt operator*(QuadExt a, const QuadExt& b) { return a *= b; }
  friend QuadExt operator/(QuadExt a, const QuadExt& b) { return a /= b; }
  friend bool operator==(const QuadExt& a, const QuadExt& b) { return a.c0_ == b.c0_ && a.c1_ == b.c1_; }

  QuadExt scaled(const F& s) const { return QuadExt(c0_ * s, c1_ * s, p_); }

  bool is_atomic() const {
    if (c1_.is_zero()) return c0_.is_atomic() && !prints_negative(c0_);
    return c0_.is_zero() && c1_.is_one();
  }
  std::string str() const {
    const std::string w = p_ ? p_->name : "w";
    if (c1_.is_zero()) return c0_.str();
    auto wrap = [](const F& x) { return x.is_atomic() ? x.str() : "(" + x.str() + ")"; };
    std::string tail = c1_.is_one() ? w : wrap(c1_) + "*" + w;
    if (c0_.is_zero()) return tail;
    return c0_.str() + " + " + tail;
  }

 private:
  void adopt(const QuadExt& o) {
    if (!p_) p_ = o.p_;
  }
  F c0_{}, c1_{};
  std::shared_ptr<const Params> p_;
};

template <class F>
bool prints_negative(const QuadExt<F>& x) {
  return x.c1().is_zero() && prints_negative(x.c0());
}

}  // namespace conex
