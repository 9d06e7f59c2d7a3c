#pragma once

// Small dense rational matrices. Only what the lattice base changes need:
// multiplication, inverse, linear solves. Exact mpq arithmetic.

#include "camlat/zlattice.hpp"

#include <stdexcept>
#include <vector>

namespace camlat {

struct RatMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<Rat> a;

  RatMatrix() = default;
  RatMatrix(int r, int c) : rows(r), cols(c), a(size_t(r) * size_t(c)) {}

  Rat& at(int i, int j) { return a[size_t(i) * cols + j]; }
  const Rat& at(int i, int j) const { return a[size_t(i) * cols + j]; }

  static RatMatrix identity(int n) {
    RatMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }
  static RatMatrix from_int(const IntMatrix& z) {
    RatMatrix m(z.rows, z.cols);
    for (int i = 0; i < z.rows; ++i)
      for (int j = 0; j < z.cols; ++j) m.at(i, j) = Rat(z.at(i, j));
    return m;
  }
};

inline RatMatrix operator*(const RatMatrix& x, const RatMatrix& y) {
  if (x.cols != y.rows) throw std::invalid_argument("ratmat product shape");
  RatMatrix z(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int k = 0; k < x.cols; ++k) {
      if (x.at(i, k) == 0) continue;
      for (int j = 0; j < y.cols; ++j) z.at(i, j) += x.at(i, k) * y.at(k, j);
    }
  return z;
}

inline std::vector<Rat> mul(const RatMatrix& m, const std::vector<Rat>& v) {
  if (int(v.size()) != m.cols) throw std::invalid_argument("ratmat*vec shape");
  std::vector<Rat> out(m.rows);
  for (int i = 0; i < m.rows; ++i) {
    Rat acc = 0;
    for (int j = 0; j < m.cols; ++j) acc += m.at(i, j) * v[j];
    out[i] = acc;
  }
  return out;
}

inline RatMatrix rat_inverse(const RatMatrix& m0) {
  if (m0.rows != m0.cols) throw std::invalid_argument("inverse of non-square");
  int n = m0.rows;
  RatMatrix m = m0, inv = RatMatrix::identity(n);
  for (int k = 0; k < n; ++k) {
    int p = -1;
    for (int i = k; i < n; ++i)
      if (m.at(i, k) != 0) {
        p = i;
        break;
      }
    if (p < 0) throw std::invalid_argument("singular matrix");
    for (int j = 0; j < n; ++j) {
      std::swap(m.at(k, j), m.at(p, j));
      std::swap(inv.at(k, j), inv.at(p, j));
    }
    Rat piv = m.at(k, k);
    for (int j = 0; j < n; ++j) {
      m.at(k, j) /= piv;
      inv.at(k, j) /= piv;
    }
    for (int i = 0; i < n; ++i) {
      if (i == k || m.at(i, k) == 0) continue;
      Rat f = m.at(i, k);
      for (int j = 0; j < n; ++j) {
        m.at(i, j) -= f * m.at(k, j);
        inv.at(i, j) -= f * inv.at(k, j);
      }
    }
  }
  return inv;
}

// Solve M x = b exactly; empty when inconsistent.
inline std::optional<std::vector<Rat>> rat_solve(const RatMatrix& m0,
                                                 const std::vector<Rat>& b0) {
  RatMatrix m = m0;
  std::vector<Rat> b = b0;
  int n = m.rows, c = m.cols;
  std::vector<int> pivot_of_col(c, -1);
  int row = 0;
  for (int col = 0; col < c && row < n; ++col) {
    int p = -1;
    for (int i = row; i < n; ++i)
      if (m.at(i, col) != 0) {
        p = i;
        break;
      }
    if (p < 0) continue;
    for (int j = 0; j < c; ++j) std::swap(m.at(row, j), m.at(p, j));
    std::swap(b[row], b[p]);
    Rat piv = m.at(row, col);
    for (int j = 0; j < c; ++j) m.at(row, j) /= piv;
    b[row] /= piv;
    for (int i = 0; i < n; ++i) {
      if (i == row || m.at(i, col) == 0) continue;
      Rat f = m.at(i, col);
      for (int j = 0; j < c; ++j) m.at(i, j) -= f * m.at(row, j);
      b[i] -= f * b[row];
    }
    pivot_of_col[col] = row;
    ++row;
  }
  for (int i = row; i < n; ++i)
    if (b[i] != 0) return std::nullopt;
  std::vector<Rat> x(c);
  for (int col = 0; col < c; ++col)
    if (pivot_of_col[col] >= 0) x[col] = b[pivot_of_col[col]];
  return x;
}

inline std::vector<Rat> to_rat(const std::vector<Int>& v) {
  std::vector<Rat> out(v.size());
  for (size_t i = 0; i < v.size(); ++i) out[i] = Rat(v[i]);
  return out;
}

// v must be integral; throws otherwise.
inline std::vector<Int> to_int(const std::vector<Rat>& v) {
  std::vector<Int> out(v.size());
  for (size_t i = 0; i < v.size(); ++i) {
    if (v[i].get_den() != 1) throw std::invalid_argument("non-integral value");
    out[i] = v[i].get_num();
  }
  return out;
}

}  // namespace camlat
