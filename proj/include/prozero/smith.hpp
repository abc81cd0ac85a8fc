#pragma once

#include <gmpxx.h>

#include <vector>

#include "prozero/domain.hpp"

namespace prozero {

using ZMatrix = std::vector<std::vector<mpz_class>>;

inline ZMatrix z_identity(size_t n) {
  ZMatrix I(n, std::vector<mpz_class>(n, 0));
  for (size_t i = 0; i < n; ++i) I[i][i] = 1;
  return I;
}

inline ZMatrix z_mul(const ZMatrix& A, const ZMatrix& B) {
  size_t n = A.size(), m = B.empty() ? 0 : B[0].size(), k = B.size();
  ZMatrix C(n, std::vector<mpz_class>(m, 0));
  for (size_t i = 0; i < n; ++i)
    for (size_t l = 0; l < k; ++l)
      if (A[i][l] != 0)
        for (size_t j = 0; j < m; ++j) C[i][j] += A[i][l] * B[l][j];
  return C;
}

struct SmithResult {
  ZMatrix U, D, V;  // U*A*V = D, U and V unimodular, D diagonal d1 | d2 | ...
};

// Smith normal form by elementary row/column operations.
inline SmithResult smith_normal_form(const ZMatrix& A) {
  size_t rows = A.size(), cols = rows ? A[0].size() : 0;
  SmithResult R{z_identity(rows), A, z_identity(cols)};
  ZMatrix& D = R.D;

  auto swap_rows = [&](size_t a, size_t b) {
    std::swap(D[a], D[b]);
    std::swap(R.U[a], R.U[b]);
  };
  auto swap_cols = [&](size_t a, size_t b) {
    for (auto& row : D) std::swap(row[a], row[b]);
    for (auto& row : R.V) std::swap(row[a], row[b]);
  };
  auto addmul_row = [&](size_t dst, size_t src, const mpz_class& q) {
    for (size_t j = 0; j < cols; ++j) D[dst][j] += q * D[src][j];
    for (size_t j = 0; j < rows; ++j) R.U[dst][j] += q * R.U[src][j];
  };
  auto addmul_col = [&](size_t dst, size_t src, const mpz_class& q) {
    for (size_t i = 0; i < rows; ++i) D[i][dst] += q * D[i][src];
    for (size_t i = 0; i < cols; ++i) R.V[i][dst] += q * R.V[i][src];
  };
  auto negate_row = [&](size_t a) {
    for (auto& x : D[a]) x = -x;
    for (auto& x : R.U[a]) x = -x;
  };

  size_t t = 0;
  while (t < rows && t < cols) {
    // find pivot: nonzero entry of minimal absolute value in D[t.., t..]
    size_t pi = t, pj = t;
    bool found = false;
    mpz_class best = 0;
    for (size_t i = t; i < rows; ++i)
      for (size_t j = t; j < cols; ++j) {
        if (D[i][j] == 0) continue;
        mpz_class a = abs(D[i][j]);
        if (!found || a < best) {
          found = true;
          best = a;
          pi = i;
          pj = j;
        }
      }
    if (!found) break;
    swap_rows(t, pi);
    swap_cols(t, pj);
    if (D[t][t] < 0) negate_row(t);

    bool dirty = false;
    for (size_t i = t + 1; i < rows; ++i) {
      if (D[i][t] == 0) continue;
      mpz_class q;
      mpz_fdiv_q(q.get_mpz_t(), D[i][t].get_mpz_t(), D[t][t].get_mpz_t());
      addmul_row(i, t, -q);
      if (D[i][t] != 0) dirty = true;
    }
    for (size_t j = t + 1; j < cols; ++j) {
      if (D[t][j] == 0) continue;
      mpz_class q;
      mpz_fdiv_q(q.get_mpz_t(), D[t][j].get_mpz_t(), D[t][t].get_mpz_t());
      addmul_col(j, t, -q);
      if (D[t][j] != 0) dirty = true;
    }
    if (dirty) continue;  // smaller remainders appeared, redo pivot choice

    // divisibility fix-up: D[t][t] must divide everything below-right
    bool fixed = true;
    for (size_t i = t + 1; i < rows && fixed; ++i)
      for (size_t j = t + 1; j < cols && fixed; ++j)
        if (D[i][j] % D[t][t] != 0) {
          addmul_row(t, i, 1);
          fixed = false;
        }
    if (!fixed) continue;
    ++t;
  }
  return R;
}

inline std::vector<mpz_class> smith_diagonal(const ZMatrix& A) {
  SmithResult R = smith_normal_form(A);
  std::vector<mpz_class> d;
  for (size_t i = 0; i < R.D.size() && i < (R.D.empty() ? 0 : R.D[0].size());
       ++i)
    d.push_back(R.D[i][i]);
  return d;
}

}  // namespace prozero
