// Copyright 2026 The conex authors.
// Licensed under the Apache License, Version 2.0.
#pragma once

// Reference computations on plain integers, independent of the library.

#include <vector>

namespace conex::oracle {

// Quadratic form over GF(p) given by an upper triangular coefficient
// table: q(x) = sum_{i<=j} c[i][j] x_i x_j.
struct SmallQuadratic {
  int p = 2;
  std::vector<std::vector<int>> c;

  int n() const { return static_cast<int>(c.size()); }
  int value(const std::vector<int>& x) const {
    long s = 0;
    for (int i = 0; i < n(); ++i)
      for (int j = i; j < n(); ++j) s += static_cast<long>(c[i][j]) * x[i] * x[j];
    return static_cast<int>(((s % p) + p) % p);
  }
  int polar(const std::vector<int>& x, const std::vector<int>& y) const {
    std::vector<int> s(n());
    for (int i = 0; i < n(); ++i) s[i] = (x[i] + y[i]) % p;
    return (((value(s) - value(x) - value(y)) % p) + p) % p;
  }
};

inline std::vector<std::vector<int>> all_vectors(int n, int p) {
  std::vector<std::vector<int>> out;
  std::vector<int> x(n, 0);
  for (;;) {
    out.push_back(x);
    int k = 0;
    while (k < n && ++x[k] == p) x[k++] = 0;
    if (k == n) break;
  }
  return out;
}

// Rank over GF(p) of a list of vectors.
inline int rank_mod_p(std::vector<std::vector<int>> rows, int p) {
  auto inv = [p](int a) {
    for (int b = 1; b < p; ++b)
      if (a * b % p == 1) return b;
    return 0;
  };
  int r = 0;
  const int n = rows.empty() ? 0 : static_cast<int>(rows[0].size());
  for (int col = 0; col < n && r < static_cast<int>(rows.size()); ++col) {
    int piv = -1;
    for (int i = r; i < static_cast<int>(rows.size()); ++i)
      if (rows[i][col] % p) piv = i;
    if (piv < 0) continue;
    std::swap(rows[r], rows[piv]);
    int f = inv(rows[r][col]);
    for (auto& v : rows[r]) v = v * f % p;
    for (int i = 0; i < static_cast<int>(rows.size()); ++i)
      if (i != r && rows[i][col] % p) {
        int g = rows[i][col];
        for (int k = 0; k < n; ++k) rows[i][k] = ((rows[i][k] - g * rows[r][k]) % p + p) % p;
      }
    ++r;
  }
  return r;
}

// Largest dimension of a totally singular subspace, by depth-first search
// over singular vectors.
inline int witt_index(const SmallQuadratic& q) {
  std::vector<std::vector<int>> singular;
  for (auto& v : all_vectors(q.n(), q.p)) {
    bool nz = false;
    for (int x : v) nz = nz || x != 0;
    if (nz && q.value(v) == 0) singular.push_back(v);
  }
  int best = 0;
  std::vector<std::vector<int>> chosen;
  auto dfs = [&](auto&& self, size_t start) -> void {
    best = std::max(best, static_cast<int>(chosen.size()));
    if (2 * (static_cast<int>(chosen.size()) + 1) > q.n()) return;
    for (size_t k = start; k < singular.size(); ++k) {
      const auto& v = singular[k];
      bool ok = true;
      for (auto& w : chosen) ok = ok && q.polar(v, w) == 0;
      if (!ok) continue;
      chosen.push_back(v);
      if (rank_mod_p(chosen, q.p) == static_cast<int>(chosen.size())) self(self, k + 1);
      chosen.pop_back();
    }
  };
  dfs(dfs, 0);
  return best;
}

// Nonsingular means the polar form has trivial radical.
inline bool is_nonsingular(const SmallQuadratic& q) {
  std::vector<std::vector<int>> rows;
  std::vector<int> e(q.n(), 0);
  for (int i = 0; i < q.n(); ++i) {
    std::vector<int> row;
    for (int j = 0; j < q.n(); ++j) {
      std::vector<int> ei(q.n(), 0), ej(q.n(), 0);
      ei[i] = 1;
      ej[j] = 1;
      row.push_back(q.polar(ei, ej));
    }
    rows.push_back(row);
  }
  return rank_mod_p(rows, q.p) == q.n();
}

}  // namespace conex::oracle
