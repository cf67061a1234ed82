// Copyright 2026 The conex authors.
// Licensed under the Apache License, Version 2.0.
#pragma once

#include <gmpxx.h>

#include <string>

#include "conex/errors.hpp"

namespace conex {

// Arbitrary-precision rational number; the field QQ.
class Rational {
 public:
  Rational() = default;
  Rational(long n) : v_(n) {}  // NOLINT(google-explicit-constructor)
  explicit Rational(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }
  Rational(long n, long d) : v_(n, d) {
    if (d == 0) throw Error(Errc::ZeroInput, "rational with zero denominator");
    v_.canonicalize();
  }

  Rational zero() const { return Rational(); }
  Rational one() const { return Rational(1); }
  Rational from_int(long n) const { return Rational(n); }
  long characteristic() const { return 0; }

  bool is_zero() const { return sgn(v_) == 0; }
  bool is_one() const { return v_ == 1; }
  int sign() const { return sgn(v_); }

  Rational inv() const {
    if (is_zero()) throw Error(Errc::ZeroInput, "inverse of zero");
    return Rational(mpq_class(1) / v_);
  }

  Rational operator-() const { return Rational(mpq_class(-v_)); }
  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw Error(Errc::ZeroInput, "division by zero");
    v_ /= o.v_;
    return *this;
  }
  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }

  const mpq_class& raw() const { return v_; }
  mpz_class num() const { return v_.get_num(); }
  mpz_class den() const { return v_.get_den(); }

  // Number of bits of max(|num|, den); a crude size measure.
  size_t height_bits() const {
    return std::max(mpz_sizeinbase(v_.get_num_mpz_t(), 2), mpz_sizeinbase(v_.get_den_mpz_t(), 2));
  }

  std::string str() const { return v_.get_str(); }
  // A fraction binds tighter than the surrounding product when printed.
  bool is_atomic() const { return true; }

 private:
  mpq_class v_;
};

}  // namespace conex
