// Copyright 2026 The conex authors.
// Licensed under the Apache License, Version 2.0.
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "conex/errors.hpp"

namespace conex {

// Dense row-major matrix over a field T. Every entry carries the field
// context, so a matrix is always built from a sample element.
template <class T>
class Matrix {
 public:
  using value_type = T;
  Matrix() = default;
  Matrix(int rows, int cols, const T& fill)
      : r_(rows), c_(cols), a_(static_cast<size_t>(rows) * cols, fill), z_(fill.zero()) {}

  static Matrix zeros(int rows, int cols, const T& sample) { return Matrix(rows, cols, sample.zero()); }
  static Matrix identity(int n, const T& sample) {
    Matrix m = zeros(n, n, sample);
    for (int i = 0; i < n; ++i) m(i, i) = sample.one();
    return m;
  }
  static Matrix diag(const std::vector<T>& d) {
    Matrix m = zeros(static_cast<int>(d.size()), static_cast<int>(d.size()), d.at(0));
    for (size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }
  static Matrix from_rows(const std::vector<std::vector<T>>& rows) {
    if (rows.empty() || rows[0].empty()) throw Error(Errc::InvalidArgument, "empty matrix literal");
    Matrix m(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()), rows[0][0].zero());
    for (int i = 0; i < m.r_; ++i) {
      if (static_cast<int>(rows[i].size()) != m.c_) throw Error(Errc::InvalidArgument, "ragged matrix literal");
      for (int j = 0; j < m.c_; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  int rows() const { return r_; }
  int cols() const { return c_; }
  bool square() const { return r_ == c_; }
  T& operator()(int i, int j) { return a_[static_cast<size_t>(i) * c_ + j]; }
  const T& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * c_ + j]; }
  const T& sample() const { return z_; }

  Matrix transpose() const {
    Matrix t(c_, r_, z_);
    for (int i = 0; i < r_; ++i)
      for (int j = 0; j < c_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }
  template <class Fn>
  auto map(Fn fn) const {
    using U = decltype(fn(z_));
    Matrix<U> m(r_, c_, fn(z_));
    for (int i = 0; i < r_; ++i)
      for (int j = 0; j < c_; ++j) m(i, j) = fn((*this)(i, j));
    return m;
  }
  Matrix block(int r0, int c0, int nr, int nc) const {
    Matrix m(nr, nc, z_.zero());
    for (int i = 0; i < nr; ++i)
      for (int j = 0; j < nc; ++j) m(i, j) = (*this)(r0 + i, c0 + j);
    return m;
  }
  void set_block(int r0, int c0, const Matrix& b) {
    for (int i = 0; i < b.r_; ++i)
      for (int j = 0; j < b.c_; ++j) (*this)(r0 + i, c0 + j) = b(i, j);
  }
  Matrix col(int j) const { return block(0, j, r_, 1); }
  Matrix row(int i) const { return block(i, 0, 1, c_); }
  bool is_zero() const {
    for (auto& x : a_)
      if (!x.is_zero()) return false;
    return true;
  }

  void swap_rows(int i, int k) {
    for (int j = 0; j < c_; ++j) std::swap((*this)(i, j), (*this)(k, j));
  }
  void swap_cols(int j, int k) {
    for (int i = 0; i < r_; ++i) std::swap((*this)(i, j), (*this)(i, k));
  }
  // row_i += f * row_k
  void add_row(int i, int k, const T& f) {
    if (f.is_zero()) return;
    for (int j = 0; j < c_; ++j) (*this)(i, j) += f * (*this)(k, j);
  }
  // col_j += col_k * f
  void add_col(int j, int k, const T& f) {
    if (f.is_zero()) return;
    for (int i = 0; i < r_; ++i) (*this)(i, j) += (*this)(i, k) * f;
  }
  void scale_row(int i, const T& f) {
    for (int j = 0; j < c_; ++j) (*this)(i, j) = f * (*this)(i, j);
  }
  void scale_col(int j, const T& f) {
    for (int i = 0; i < r_; ++i) (*this)(i, j) *= f;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.c_ != b.r_) throw Error(Errc::InvalidArgument, "matrix shape mismatch in product");
    Matrix m(a.r_, b.c_, a.z_.zero());
    for (int i = 0; i < a.r_; ++i)
      for (int k = 0; k < a.c_; ++k) {
        const T& x = a(i, k);
        if (x.is_zero()) continue;
        for (int j = 0; j < b.c_; ++j) m(i, j) += x * b(k, j);
      }
    return m;
  }
  friend Matrix operator+(Matrix a, const Matrix& b) {
    check_same(a, b);
    for (size_t i = 0; i < a.a_.size(); ++i) a.a_[i] += b.a_[i];
    return a;
  }
  friend Matrix operator-(Matrix a, const Matrix& b) {
    check_same(a, b);
    for (size_t i = 0; i < a.a_.size(); ++i) a.a_[i] -= b.a_[i];
    return a;
  }
  Matrix operator-() const {
    Matrix m = *this;
    for (auto& x : m.a_) x = -x;
    return m;
  }
  Matrix scaled(const T& s) const {
    Matrix m = *this;
    for (auto& x : m.a_) x = s * x;
    return m;
  }
  friend bool operator==(const Matrix& a, const Matrix& b) {
    if (a.r_ != b.r_ || a.c_ != b.c_) return false;
    for (size_t i = 0; i < a.a_.size(); ++i)
      if (!(a.a_[i] == b.a_[i])) return false;
    return true;
  }

  // Reduced row echelon form in place; returns pivot columns.
  std::vector<int> rref() {
    std::vector<int> piv;
    int row = 0;
    for (int col = 0; col < c_ && row < r_; ++col) {
      int p = -1;
      for (int i = row; i < r_; ++i)
        if (!(*this)(i, col).is_zero()) {
          p = i;
          break;
        }
      if (p < 0) continue;
      swap_rows(row, p);
      T inv = (*this)(row, col).inv();
      scale_row(row, inv);
      for (int i = 0; i < r_; ++i)
        if (i != row && !(*this)(i, col).is_zero()) add_row(i, row, -(*this)(i, col));
      piv.push_back(col);
      ++row;
    }
    return piv;
  }
  int rank() const {
    Matrix m = *this;
    return static_cast<int>(m.rref().size());
  }
  T det() const {
    if (!square()) throw Error(Errc::InvalidArgument, "determinant of non-square matrix");
    Matrix m = *this;
    T d = z_.one();
    for (int col = 0; col < r_; ++col) {
      int p = -1;
      for (int i = col; i < r_; ++i)
        if (!m(i, col).is_zero()) {
          p = i;
          break;
        }
      if (p < 0) return d.zero();
      if (p != col) {
        m.swap_rows(col, p);
        d = -d;
      }
      d *= m(col, col);
      T inv = m(col, col).inv();
      for (int i = col + 1; i < r_; ++i)
        if (!m(i, col).is_zero()) m.add_row(i, col, -(m(i, col) * inv));
    }
    return d;
  }
  std::optional<Matrix> try_inverse() const {
    if (!square()) return std::nullopt;
    Matrix aug(r_, 2 * r_, z_.zero());
    aug.set_block(0, 0, *this);
    aug.set_block(0, r_, identity(r_, z_));
    auto piv = aug.rref();
    if (static_cast<int>(piv.size()) < r_ || piv[r_ - 1] != r_ - 1) return std::nullopt;
    return aug.block(0, r_, r_, r_);
  }
  Matrix inverse() const {
    auto inv = try_inverse();
    if (!inv) throw Error(Errc::SingularInput, "matrix is not invertible");
    return *inv;
  }
  // Columns form a basis of the right null space {x : A x = 0}.
  Matrix kernel() const {
    Matrix m = *this;
    auto piv = m.rref();
    std::vector<int> free;
    for (int j = 0, k = 0; j < c_; ++j) {
      if (k < static_cast<int>(piv.size()) && piv[k] == j) {
        ++k;
        continue;
      }
      free.push_back(j);
    }
    Matrix k(c_, static_cast<int>(free.size()), z_.zero());
    for (size_t f = 0; f < free.size(); ++f) {
      k(free[f], f) = z_.one();
      for (size_t i = 0; i < piv.size(); ++i) k(piv[i], f) = -m(i, free[f]);
    }
    return k;
  }
  // Some solution of A x = b, if one exists.
  std::optional<Matrix> solve(const Matrix& b) const {
    Matrix aug(r_, c_ + b.c_, z_.zero());
    aug.set_block(0, 0, *this);
    aug.set_block(0, c_, b);
    auto piv = aug.rref();
    Matrix x(c_, b.c_, z_.zero());
    for (size_t i = 0; i < piv.size(); ++i) {
      if (piv[i] >= c_) return std::nullopt;
      for (int j = 0; j < b.c_; ++j) x(piv[i], j) = aug(i, c_ + j);
    }
    return x;
  }

  std::string str() const {
    std::string s = "[";
    for (int i = 0; i < r_; ++i) {
      s += i ? ", [" : "[";
      for (int j = 0; j < c_; ++j) s += (j ? ", " : "") + (*this)(i, j).str();
      s += "]";
    }
    return s + "]";
  }

 private:
  static void check_same(const Matrix& a, const Matrix& b) {
    if (a.r_ != b.r_ || a.c_ != b.c_) throw Error(Errc::InvalidArgument, "matrix shape mismatch");
  }
  int r_ = 0, c_ = 0;
  std::vector<T> a_;
  T z_{};  // context carrier, valid even for empty shapes
};

template <class T>
Matrix<T> block_diag(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.rows() == 0) return b;
  if (b.rows() == 0) return a;
  Matrix<T> m = Matrix<T>::zeros(a.rows() + b.rows(), a.cols() + b.cols(), a.sample());
  m.set_block(0, 0, a);
  m.set_block(a.rows(), a.cols(), b);
  return m;
}

// Kronecker product; index (i, i') maps to i * b.rows() + i'.
template <class T>
Matrix<T> kron(const Matrix<T>& a, const Matrix<T>& b) {
  Matrix<T> m = Matrix<T>::zeros(a.rows() * b.rows(), a.cols() * b.cols(), a.sample());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      for (int k = 0; k < b.rows(); ++k)
        for (int l = 0; l < b.cols(); ++l) m(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return m;
}

template <class T>
Matrix<T> hcat(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.cols() == 0) return b;
  if (b.cols() == 0) return a;
  Matrix<T> m = Matrix<T>::zeros(a.rows(), a.cols() + b.cols(), a.sample());
  m.set_block(0, 0, a);
  m.set_block(0, a.cols(), b);
  return m;
}

}  // namespace conex
