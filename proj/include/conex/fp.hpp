// Copyright 2026 The conex authors.
// Licensed under the Apache License, Version 2.0.
#pragma once

#include <cstdint>
#include <string>

#include "conex/errors.hpp"

namespace conex {

// Element of the prime field GF(p). The modulus travels with the value;
// a default-constructed element is a context-free zero that adopts the
// modulus of whatever it is combined with.
class Fp {
 public:
  Fp() = default;
  Fp(long n, uint32_t p) : p_(p) {
    if (p < 2) throw Error(Errc::InvalidArgument, "GF(p) needs a prime p >= 2");
    long r = n % static_cast<long>(p);
    if (r < 0) r += p;
    v_ = static_cast<uint32_t>(r);
  }

  uint32_t modulus() const { return p_; }
  uint32_t value() const { return v_; }

  Fp zero() const { return Fp(0, p_); }
  Fp one() const { return Fp(1, p_); }
  Fp from_int(long n) const { return Fp(n, p_); }
  long characteristic() const { return p_; }

  bool is_zero() const { return v_ == 0; }
  bool is_one() const { return v_ == 1; }

  Fp inv() const {
    if (v_ == 0) throw Error(Errc::ZeroInput, "inverse of zero in GF(p)");
    int64_t a = v_, m = p_, x0 = 1, x1 = 0;
    while (m != 0) {
      int64_t q = a / m, t = a - q * m;
      a = m;
      m = t;
      t = x0 - q * x1;
      x0 = x1;
      x1 = t;
    }
    return Fp(static_cast<long>(x0), p_);
  }

  Fp operator-() const {
    Fp r = *this;
    if (v_ != 0) r.v_ = p_ - v_;
    return r;
  }
  Fp& operator+=(const Fp& o) {
    adopt(o);
    uint64_t s = uint64_t(v_) + o.v_;
    if (s >= p_) s -= p_;
    v_ = static_cast<uint32_t>(s);
    return *this;
  }
  Fp& operator-=(const Fp& o) { return *this += -o; }
  Fp& operator*=(const Fp& o) {
    adopt(o);
    v_ = p_ == 0 ? 0 : static_cast<uint32_t>((uint64_t(v_) * o.v_) % p_);
    return *this;
  }
  Fp& operator/=(const Fp& o) { return *this *= o.inv(); }
  friend Fp operator+(Fp a, const Fp& b) { return a += b; }
  friend Fp operator-(Fp a, const Fp& b) { return a -= b; }
  friend Fp operator*(Fp a, const Fp& b) { return a *= b; }
  friend Fp operator/(Fp a, const Fp& b) { return a /= b; }
  friend bool operator==(const Fp& a, const Fp& b) { return a.v_ == b.v_; }

  std::string str() const { return std::to_string(v_); }
  bool is_atomic() const { return true; }

 private:
  void adopt(const Fp& o) {
    if (p_ == 0) p_ = o.p_;
  }
  uint32_t v_ = 0;
  uint32_t p_ = 0;
};

inline bool is_prime(long p) {
  if (p < 2) return false;
  for (long d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

}  // namespace conex
