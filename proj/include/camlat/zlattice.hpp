#pragma once

// Exact integer linear algebra: Hermite/Smith normal forms, kernels,
// cokernels, saturation, finitely generated abelian groups and their duals.
// All entries are arbitrary-precision (GMP).

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace camlat {

using Int = mpz_class;
using Rat = mpq_class;

inline std::string to_str(const Int& x) { return x.get_str(); }

// ---------------------------------------------------------------------------
// IntMatrix

struct IntMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<Int> a;  // row-major

  IntMatrix() = default;
  IntMatrix(int r, int c) : rows(r), cols(c), a(size_t(r) * size_t(c)) {
    if (r < 0 || c < 0) throw std::invalid_argument("negative matrix size");
  }

  Int& at(int i, int j) { return a[size_t(i) * cols + j]; }
  const Int& at(int i, int j) const { return a[size_t(i) * cols + j]; }

  static IntMatrix identity(int n) {
    IntMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }
  static IntMatrix zero(int r, int c) { return IntMatrix(r, c); }

  static IntMatrix from_rows(const std::vector<std::vector<Int>>& v) {
    int r = int(v.size());
    int c = r ? int(v[0].size()) : 0;
    IntMatrix m(r, c);
    for (int i = 0; i < r; ++i) {
      if (int(v[i].size()) != c) throw std::invalid_argument("ragged rows");
      for (int j = 0; j < c; ++j) m.at(i, j) = v[i][j];
    }
    return m;
  }

  std::vector<Int> row(int i) const {
    return std::vector<Int>(a.begin() + size_t(i) * cols,
                            a.begin() + size_t(i + 1) * cols);
  }
  std::vector<Int> col(int j) const {
    std::vector<Int> v(rows);
    for (int i = 0; i < rows; ++i) v[i] = at(i, j);
    return v;
  }

  bool operator==(const IntMatrix& o) const {
    return rows == o.rows && cols == o.cols && a == o.a;
  }
  bool operator!=(const IntMatrix& o) const { return !(*this == o); }

  bool is_zero() const {
    for (const Int& x : a)
      if (x != 0) return false;
    return true;
  }
  bool is_identity() const {
    if (rows != cols) return false;
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j)
        if (at(i, j) != (i == j ? 1 : 0)) return false;
    return true;
  }

  IntMatrix transposed() const {
    IntMatrix t(cols, rows);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) t.at(j, i) = at(i, j);
    return t;
  }

  void swap_rows(int i, int k) {
    if (i == k) return;
    for (int j = 0; j < cols; ++j) std::swap(at(i, j), at(k, j));
  }
  void negate_row(int i) {
    for (int j = 0; j < cols; ++j) at(i, j) = -at(i, j);
  }
  // row i -= q * row k
  void submul_row(int i, int k, const Int& q) {
    if (q == 0) return;
    for (int j = 0; j < cols; ++j) at(i, j) -= q * at(k, j);
  }
  void swap_cols(int j, int k) {
    if (j == k) return;
    for (int i = 0; i < rows; ++i) std::swap(at(i, j), at(i, k));
  }
  void negate_col(int j) {
    for (int i = 0; i < rows; ++i) at(i, j) = -at(i, j);
  }
  void submul_col(int j, int k, const Int& q) {
    if (q == 0) return;
    for (int i = 0; i < rows; ++i) at(i, j) -= q * at(i, k);
  }
};

inline IntMatrix operator*(const IntMatrix& x, const IntMatrix& y) {
  if (x.cols != y.rows) throw std::invalid_argument("matrix product shape");
  IntMatrix z(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int k = 0; k < x.cols; ++k) {
      const Int& xik = x.at(i, k);
      if (xik == 0) continue;
      for (int j = 0; j < y.cols; ++j) z.at(i, j) += xik * y.at(k, j);
    }
  return z;
}

inline IntMatrix operator+(const IntMatrix& x, const IntMatrix& y) {
  if (x.rows != y.rows || x.cols != y.cols)
    throw std::invalid_argument("matrix sum shape");
  IntMatrix z = x;
  for (size_t i = 0; i < z.a.size(); ++i) z.a[i] += y.a[i];
  return z;
}

inline IntMatrix operator-(const IntMatrix& x, const IntMatrix& y) {
  if (x.rows != y.rows || x.cols != y.cols)
    throw std::invalid_argument("matrix diff shape");
  IntMatrix z = x;
  for (size_t i = 0; i < z.a.size(); ++i) z.a[i] -= y.a[i];
  return z;
}

inline std::vector<Int> mul(const IntMatrix& m, const std::vector<Int>& v) {
  if (int(v.size()) != m.cols) throw std::invalid_argument("mat*vec shape");
  std::vector<Int> out(m.rows);
  for (int i = 0; i < m.rows; ++i) {
    Int acc = 0;
    for (int j = 0; j < m.cols; ++j) acc += m.at(i, j) * v[j];
    out[i] = acc;
  }
  return out;
}

inline Int dot(const std::vector<Int>& x, const std::vector<Int>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("dot shape");
  Int acc = 0;
  for (size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
  return acc;
}

// Bareiss determinant; exact, fraction-free.
inline Int det(const IntMatrix& m0) {
  if (m0.rows != m0.cols) throw std::invalid_argument("det of non-square");
  int n = m0.rows;
  if (n == 0) return 1;
  IntMatrix m = m0;
  Int sign = 1, prev = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (m.at(k, k) == 0) {
      int p = -1;
      for (int i = k + 1; i < n; ++i)
        if (m.at(i, k) != 0) {
          p = i;
          break;
        }
      if (p < 0) return 0;
      m.swap_rows(k, p);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) {
        Int t = m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j);
        mpz_divexact(m.at(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
    prev = m.at(k, k);
  }
  return sign * m.at(n - 1, n - 1);
}

inline bool is_unimodular(const IntMatrix& m) {
  if (m.rows != m.cols) return false;
  Int d = det(m);
  return d == 1 || d == -1;
}

// Exact inverse of a unimodular matrix.
inline IntMatrix unimodular_inverse(const IntMatrix& m);

// ---------------------------------------------------------------------------
// Hermite normal form (row style).
//
// Canonical convention: U*M = H with U unimodular; pivots positive, strictly
// to the right as rows descend; entries above a pivot reduced into [0, pivot);
// zero rows at the bottom.

struct HnfResult {
  IntMatrix h;
  IntMatrix u;
  int rank = 0;
  std::vector<int> pivot_col;  // per nonzero row
};

inline HnfResult hnf(const IntMatrix& m) {
  HnfResult r;
  r.h = m;
  r.u = IntMatrix::identity(m.rows);
  IntMatrix& h = r.h;
  IntMatrix& u = r.u;
  int row = 0;
  for (int col = 0; col < m.cols && row < m.rows; ++col) {
    // gcd the column below `row` into a single pivot, smallest entry first
    for (;;) {
      int p = -1;
      for (int i = row; i < m.rows; ++i) {
        const Int& x = h.at(i, col);
        if (x == 0) continue;
        if (p < 0 || mpz_cmpabs(x.get_mpz_t(), h.at(p, col).get_mpz_t()) < 0)
          p = i;
      }
      if (p < 0) break;
      h.swap_rows(row, p);
      u.swap_rows(row, p);
      bool clean = true;
      for (int i = row + 1; i < m.rows; ++i) {
        if (h.at(i, col) == 0) continue;
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), h.at(i, col).get_mpz_t(),
                   h.at(row, col).get_mpz_t());
        h.submul_row(i, row, q);
        u.submul_row(i, row, q);
        if (h.at(i, col) != 0) clean = false;
      }
      if (clean) break;
    }
    if (h.at(row, col) == 0) continue;
    if (h.at(row, col) < 0) {
      h.negate_row(row);
      u.negate_row(row);
    }
    // reduce entries above the pivot into [0, pivot)
    for (int i = 0; i < row; ++i) {
      Int q;
      mpz_fdiv_q(q.get_mpz_t(), h.at(i, col).get_mpz_t(),
                 h.at(row, col).get_mpz_t());
      h.submul_row(i, row, q);
      u.submul_row(i, row, q);
    }
    r.pivot_col.push_back(col);
    ++row;
  }
  r.rank = row;
  return r;
}

inline IntMatrix unimodular_inverse(const IntMatrix& m) {
  if (!is_unimodular(m)) throw std::invalid_argument("matrix not unimodular");
  HnfResult r = hnf(m);
  // H must be the identity for a unimodular matrix
  if (!r.h.is_identity()) throw std::logic_error("hnf of unimodular not id");
  return r.u;
}

// ---------------------------------------------------------------------------
// Smith normal form: U*M*V = D, D diagonal with d1 | d2 | ..., di >= 0.

struct SnfResult {
  IntMatrix d;
  IntMatrix u;
  IntMatrix v;
  std::vector<Int> diag;  // min(rows,cols) entries, divisibility chain
};

inline SnfResult snf(const IntMatrix& m) {
  SnfResult r;
  r.d = m;
  r.u = IntMatrix::identity(m.rows);
  r.v = IntMatrix::identity(m.cols);
  IntMatrix& d = r.d;
  IntMatrix& u = r.u;
  IntMatrix& v = r.v;
  int n = std::min(m.rows, m.cols);
  for (int k = 0; k < n; ++k) {
    for (;;) {
      // move the absolutely smallest nonzero entry of the block to (k,k);
      // keeps intermediate entries small
      int pi = -1, pj = -1;
      for (int i = k; i < d.rows; ++i)
        for (int j = k; j < d.cols; ++j) {
          const Int& x = d.at(i, j);
          if (x == 0) continue;
          if (pi < 0 ||
              mpz_cmpabs(x.get_mpz_t(), d.at(pi, pj).get_mpz_t()) < 0) {
            pi = i;
            pj = j;
          }
        }
      if (pi < 0) {
        pi = -2;  // block is zero
        break;
      }
      d.swap_rows(k, pi);
      u.swap_rows(k, pi);
      d.swap_cols(k, pj);
      v.swap_cols(k, pj);
      bool clean = true;
      for (int i = k + 1; i < d.rows; ++i) {
        if (d.at(i, k) == 0) continue;
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), d.at(i, k).get_mpz_t(),
                   d.at(k, k).get_mpz_t());
        d.submul_row(i, k, q);
        u.submul_row(i, k, q);
        if (d.at(i, k) != 0) clean = false;  // remainder: pivot will shrink
      }
      for (int j = k + 1; j < d.cols; ++j) {
        if (d.at(k, j) == 0) continue;
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), d.at(k, j).get_mpz_t(),
                   d.at(k, k).get_mpz_t());
        d.submul_col(j, k, q);
        v.submul_col(j, k, q);
        if (d.at(k, j) != 0) clean = false;
      }
      if (!clean) continue;
      // row k and column k are clear; enforce the divisibility chain
      bool fixed = false;
      for (int i = k + 1; i < d.rows && !fixed; ++i)
        for (int j = k + 1; j < d.cols && !fixed; ++j)
          if (d.at(i, j) % d.at(k, k) != 0) {
            d.submul_row(k, i, Int(-1));  // pulls the offender into row k
            u.submul_row(k, i, Int(-1));
            fixed = true;
          }
      if (!fixed) break;
    }
    if (d.at(k, k) < 0) {
      d.negate_row(k);
      u.negate_row(k);
    }
  }
  for (int k = 0; k < n; ++k) r.diag.push_back(d.at(k, k));
  return r;
}

// ---------------------------------------------------------------------------
// Lattice: a subgroup of Z^ambient given by a canonical (row HNF) basis.

struct Lattice {
  int ambient = 0;
  IntMatrix basis;  // rank x ambient, canonical row HNF, no zero rows

  Lattice() = default;
  explicit Lattice(int amb) : ambient(amb), basis(0, amb) {}

  int rank() const { return basis.rows; }
  bool operator==(const Lattice& o) const {
    return ambient == o.ambient && basis == o.basis;
  }
  bool operator!=(const Lattice& o) const { return !(*this == o); }
};

// Canonicalize arbitrary spanning rows into a Lattice.
inline Lattice lattice_from_rows(int ambient, const IntMatrix& rows) {
  if (rows.cols != ambient && rows.rows != 0)
    throw std::invalid_argument("lattice row length != ambient");
  HnfResult r = hnf(rows);
  Lattice l(ambient);
  l.basis = IntMatrix(r.rank, ambient);
  for (int i = 0; i < r.rank; ++i)
    for (int j = 0; j < ambient; ++j) l.basis.at(i, j) = r.h.at(i, j);
  return l;
}

inline Lattice full_lattice(int ambient) {
  return lattice_from_rows(ambient, IntMatrix::identity(ambient));
}

// Solve x * B = v over Z for HNF basis B (rows). Empty if not in the lattice.
inline std::optional<std::vector<Int>> lattice_coords(const Lattice& l,
                                                      const std::vector<Int>& v) {
  if (int(v.size()) != l.ambient) throw std::invalid_argument("vector length");
  std::vector<Int> rem = v;
  std::vector<Int> coef(l.rank());
  for (int i = 0; i < l.rank(); ++i) {
    // leading column of row i
    int lead = -1;
    for (int j = 0; j < l.ambient; ++j)
      if (l.basis.at(i, j) != 0) {
        lead = j;
        break;
      }
    if (lead < 0) continue;
    Int q, r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), rem[lead].get_mpz_t(),
                l.basis.at(i, lead).get_mpz_t());
    if (r != 0) return std::nullopt;
    coef[i] = q;
    for (int j = 0; j < l.ambient; ++j) rem[j] -= q * l.basis.at(i, j);
  }
  for (const Int& x : rem)
    if (x != 0) return std::nullopt;
  return coef;
}

inline bool lattice_contains(const Lattice& l, const std::vector<Int>& v) {
  return lattice_coords(l, v).has_value();
}

inline bool lattice_subset(const Lattice& inner, const Lattice& outer) {
  if (inner.ambient != outer.ambient) return false;
  for (int i = 0; i < inner.rank(); ++i)
    if (!lattice_contains(outer, inner.basis.row(i))) return false;
  return true;
}

inline Lattice lattice_sum(const Lattice& x, const Lattice& y) {
  if (x.ambient != y.ambient) throw std::invalid_argument("ambient mismatch");
  IntMatrix rows(x.rank() + y.rank(), x.ambient);
  for (int i = 0; i < x.rank(); ++i)
    for (int j = 0; j < x.ambient; ++j) rows.at(i, j) = x.basis.at(i, j);
  for (int i = 0; i < y.rank(); ++i)
    for (int j = 0; j < x.ambient; ++j)
      rows.at(x.rank() + i, j) = y.basis.at(i, j);
  return lattice_from_rows(x.ambient, rows);
}

// Integer solutions of M x = 0, canonical basis; always saturated.
inline Lattice kernel(const IntMatrix& m) {
  // U * M^T = H ; rows of U with zero H-rows span the kernel of x -> M x
  HnfResult r = hnf(m.transposed());
  IntMatrix rows(m.cols - r.rank, m.cols);
  for (int i = r.rank; i < m.cols; ++i)
    for (int j = 0; j < m.cols; ++j) rows.at(i - r.rank, j) = r.u.at(i, j);
  return lattice_from_rows(m.cols, rows);
}

// Preimage lattice f^{-1}(S) for f(x) = M x and a lattice S in Z^{M.rows}.
inline Lattice lattice_preimage(const IntMatrix& m, const Lattice& s) {
  if (s.ambient != m.rows) throw std::invalid_argument("preimage shape");
  // solve M x - B^T t = 0 in (x, t), project to x
  IntMatrix big(m.rows, m.cols + s.rank());
  for (int i = 0; i < m.rows; ++i) {
    for (int j = 0; j < m.cols; ++j) big.at(i, j) = m.at(i, j);
    for (int k = 0; k < s.rank(); ++k) big.at(i, m.cols + k) = -s.basis.at(k, i);
  }
  Lattice ker = kernel(big);
  IntMatrix rows(ker.rank(), m.cols);
  for (int i = 0; i < ker.rank(); ++i)
    for (int j = 0; j < m.cols; ++j) rows.at(i, j) = ker.basis.at(i, j);
  return lattice_from_rows(m.cols, rows);
}

struct SaturationResult {
  Lattice saturated;
  Int index = 1;  // [saturated : original]
};

// Smallest sublattice of Z^ambient containing L with torsion-free quotient.
inline SaturationResult saturation(const Lattice& l) {
  SaturationResult out;
  if (l.rank() == 0) {
    out.saturated = l;
    return out;
  }
  // rows of B: SNF B = U^{-1} D V^{-1}; saturation basis = D->1 scaled rows
  SnfResult s = snf(l.basis);
  // saturated lattice spanned by rows of V^T picked out by nonzero diag
  // B = U^{-1} D V^{-1}; row space of B over Q = row space of first r rows of
  // V^{-1}; integral saturation = those rows of V^{-1}.
  IntMatrix vinv = unimodular_inverse(s.v);
  IntMatrix rows(l.rank(), l.ambient);
  Int idx = 1;
  for (int i = 0; i < l.rank(); ++i) {
    idx *= s.diag[i];
    for (int j = 0; j < l.ambient; ++j) rows.at(i, j) = vinv.at(i, j);
  }
  out.saturated = lattice_from_rows(l.ambient, rows);
  out.index = idx;
  return out;
}

// ---------------------------------------------------------------------------
// Finitely generated abelian groups in canonical form.

struct FgPresentation {
  int ngens = 0;
  IntMatrix relations;  // ngens x nrels, columns are relations
  // From snf(relations): y = U x are split coordinates; factor i of y is
  // Z/diag[i] (1 = drop, 0/absent = free).
  IntMatrix u;
  std::vector<Int> diag;
};

struct FgAbGroup {
  int rank = 0;
  std::vector<Int> invariant_factors;  // each >= 2, d1 | d2 | ...
  std::optional<FgPresentation> pres;

  bool is_trivial() const { return rank == 0 && invariant_factors.empty(); }
  Int order() const {
    if (rank != 0) throw std::domain_error("infinite group order");
    Int o = 1;
    for (const Int& d : invariant_factors) o *= d;
    return o;
  }
  Int exponent() const {
    return invariant_factors.empty() ? Int(1) : invariant_factors.back();
  }
};

inline bool operator==(const FgAbGroup& a, const FgAbGroup& b) {
  return a.rank == b.rank && a.invariant_factors == b.invariant_factors;
}

inline FgAbGroup fg_trivial() { return FgAbGroup{}; }

inline FgAbGroup fg_free(int rank) {
  FgAbGroup g;
  g.rank = rank;
  return g;
}

inline FgAbGroup fg_cyclic(const Int& n) {
  FgAbGroup g;
  if (n == 0)
    g.rank = 1;
  else if (n != 1 && n != -1)
    g.invariant_factors.push_back(abs(n));
  return g;
}

// Direct sum, renormalized to canonical invariant factors.
inline FgAbGroup fg_direct_sum(const FgAbGroup& a, const FgAbGroup& b) {
  // present as diagonal relation matrix and recanonicalize
  int n = int(a.invariant_factors.size() + b.invariant_factors.size());
  IntMatrix rel(n + a.rank + b.rank, n);
  int k = 0;
  for (const Int& d : a.invariant_factors) rel.at(k, k) = d, ++k;
  for (const Int& d : b.invariant_factors) rel.at(k, k) = d, ++k;
  SnfResult s = snf(rel);
  FgAbGroup g;
  g.rank = a.rank + b.rank;
  for (const Int& d : s.diag)
    if (d >= 2) g.invariant_factors.push_back(d);
  return g;
}

// Z^m / column-space(M), with presentation and projection retained.
inline FgAbGroup cokernel(const IntMatrix& m) {
  SnfResult s = snf(m);
  FgAbGroup g;
  FgPresentation p;
  p.ngens = m.rows;
  p.relations = m;
  p.u = s.u;
  p.diag = s.diag;
  int r = int(s.diag.size());
  for (int i = 0; i < r; ++i) {
    if (s.diag[i] == 0)
      ++g.rank;
    else if (s.diag[i] >= 2)
      g.invariant_factors.push_back(s.diag[i]);
  }
  g.rank += m.rows - r;
  std::sort(g.invariant_factors.begin(), g.invariant_factors.end());
  g.pres = std::move(p);
  return g;
}

// Canonical coordinates of x in a cokernel group: torsion residues (mod each
// invariant factor >= 2) followed by free coordinates.
inline std::vector<Int> fg_project(const FgAbGroup& g, const std::vector<Int>& x) {
  if (!g.pres) throw std::logic_error("group without presentation");
  const FgPresentation& p = *g.pres;
  if (int(x.size()) != p.ngens) throw std::invalid_argument("fg_project size");
  std::vector<Int> y = mul(p.u, x);
  std::vector<Int> tor, fr;
  int r = int(p.diag.size());
  for (int i = 0; i < int(y.size()); ++i) {
    if (i < r && p.diag[i] == 1) continue;
    if (i < r && p.diag[i] >= 2) {
      Int m;
      mpz_fdiv_r(m.get_mpz_t(), y[i].get_mpz_t(), p.diag[i].get_mpz_t());
      tor.push_back(m);
    } else {
      fr.push_back(y[i]);  // diag 0 or beyond the diagonal: free
    }
  }
  tor.insert(tor.end(), fr.begin(), fr.end());
  return tor;
}

inline bool fg_is_zero_element(const FgAbGroup& g, const std::vector<Int>& x) {
  auto v = fg_project(g, x);
  for (const Int& t : v)
    if (t != 0) return false;
  return true;
}

// Torsion subgroup / free quotient views.
inline FgAbGroup fg_torsion_part(const FgAbGroup& g) {
  FgAbGroup t;
  t.invariant_factors = g.invariant_factors;
  return t;
}

// Pontryagin dual of a finite group: invariant factors are preserved.
inline FgAbGroup pontryagin_dual(const FgAbGroup& g) {
  if (g.rank != 0)
    throw std::invalid_argument("pontryagin_dual: group must be finite");
  FgAbGroup d;
  d.invariant_factors = g.invariant_factors;
  return d;
}

struct QuotientError : std::runtime_error {
  std::vector<Int> violating;
  QuotientError(std::string msg, std::vector<Int> v)
      : std::runtime_error(std::move(msg)), violating(std::move(v)) {}
};

// L1 / L0 for nested lattices in the same ambient space.
inline FgAbGroup lattice_quotient(const Lattice& l0, const Lattice& l1) {
  if (l0.ambient != l1.ambient)
    throw std::invalid_argument("lattice_quotient: ambient mismatch");
  for (int i = 0; i < l0.rank(); ++i)
    if (!lattice_contains(l1, l0.basis.row(i)))
      throw QuotientError("lattice_quotient: L0 not contained in L1",
                          l0.basis.row(i));
  // write each basis vector of L0 in L1-coordinates; quotient is the cokernel
  IntMatrix rel(l1.rank(), l0.rank());
  for (int i = 0; i < l0.rank(); ++i) {
    auto c = lattice_coords(l1, l0.basis.row(i));
    for (int k = 0; k < l1.rank(); ++k) rel.at(k, i) = (*c)[k];
  }
  return cokernel(rel);
}

inline bool iso_test(const FgAbGroup& a, const FgAbGroup& b) {
  return a.rank == b.rank && a.invariant_factors == b.invariant_factors;
}

inline std::string fg_to_string(const FgAbGroup& g) {
  std::string s;
  for (int i = 0; i < g.rank; ++i) s += s.empty() ? "Z" : " + Z";
  for (const Int& d : g.invariant_factors)
    s += (s.empty() ? "Z/" : " + Z/") + to_str(d);
  return s.empty() ? "0" : s;
}

// ---------------------------------------------------------------------------
// Morphisms of presented groups.

struct GroupMorphism {
  FgAbGroup domain;
  FgAbGroup codomain;
  IntMatrix matrix;  // codomain gens x domain gens

  // matrix must carry domain relations into codomain relations
  void check() const {
    if (!domain.pres || !codomain.pres)
      throw std::logic_error("morphism needs presentations");
    const IntMatrix& rd = domain.pres->relations;
    IntMatrix image = matrix * rd;  // columns: images of domain relations
    for (int j = 0; j < image.cols; ++j) {
      if (!fg_is_zero_element(codomain, image.col(j)))
        throw std::logic_error("morphism does not respect relations");
    }
  }

  std::vector<Int> apply(const std::vector<Int>& x) const {
    return mul(matrix, x);
  }
};

// Quotient of a presented group by the subgroup generated by given elements
// (columns, in generator coordinates).
inline FgAbGroup fg_quotient_by(const FgAbGroup& g, const IntMatrix& elems) {
  if (!g.pres) throw std::logic_error("fg_quotient_by needs presentation");
  const IntMatrix& rel = g.pres->relations;
  if (elems.rows != g.pres->ngens)
    throw std::invalid_argument("fg_quotient_by: generator count");
  IntMatrix all(g.pres->ngens, rel.cols + elems.cols);
  for (int i = 0; i < g.pres->ngens; ++i) {
    for (int j = 0; j < rel.cols; ++j) all.at(i, j) = rel.at(i, j);
    for (int j = 0; j < elems.cols; ++j) all.at(i, rel.cols + j) = elems.at(i, j);
  }
  return cokernel(all);
}

// Solve A x = b over the integers; empty when no integral solution exists.
inline std::optional<std::vector<Int>> solve_linear_over_z(
    const IntMatrix& a, const std::vector<Int>& b) {
  // column lattice of A = row lattice of A^T with transform tracking
  HnfResult r = hnf(a.transposed());
  Lattice rowlat;
  rowlat.ambient = a.rows;
  rowlat.basis = IntMatrix(r.rank, a.rows);
  for (int i = 0; i < r.rank; ++i)
    for (int j = 0; j < a.rows; ++j) rowlat.basis.at(i, j) = r.h.at(i, j);
  auto c = lattice_coords(rowlat, b);
  if (!c) return std::nullopt;
  // b = sum c_i H_i = sum c_i (U A^T)_i: x = U^T c (padded)
  std::vector<Int> cfull(a.cols, 0);
  for (int i = 0; i < r.rank; ++i) cfull[i] = (*c)[i];
  std::vector<Int> x(a.cols, 0);
  for (int j = 0; j < a.cols; ++j) {
    Int acc = 0;
    for (int i = 0; i < a.cols; ++i) acc += r.u.at(i, j) * cfull[i];
    x[j] = acc;
  }
  return x;
}

// ---------------------------------------------------------------------------
// Rational lattices: (1/den) * L for an integer lattice L.

struct QLattice {
  Int den = 1;
  Lattice lat;  // numerators

  int ambient() const { return lat.ambient; }
  int rank() const { return lat.rank(); }
};

inline QLattice qlattice_canonical(const Int& den, const Lattice& l) {
  // divide out the common content of den and all basis entries
  Int g = den;
  for (const Int& x : l.basis.a) g = gcd(g, x);
  if (g == 0) g = 1;
  QLattice q;
  q.den = den / g;
  IntMatrix b = l.basis;
  for (Int& x : b.a) x /= g;
  q.lat = lattice_from_rows(l.ambient, b);
  return q;
}

inline QLattice qlattice_from_lattice(const Lattice& l) {
  return qlattice_canonical(1, l);
}

inline bool operator==(const QLattice& a, const QLattice& b) {
  return a.den == b.den && a.lat == b.lat;
}
inline bool operator!=(const QLattice& a, const QLattice& b) { return !(a == b); }

inline bool qlattice_subset(const QLattice& a, const QLattice& b) {
  // a = A/da, b = B/db: a <= b iff db*A <= da*B
  IntMatrix scaled = a.lat.basis;
  for (Int& x : scaled.a) x *= b.den;
  Lattice left = lattice_from_rows(a.lat.ambient, scaled);
  IntMatrix scaledb = b.lat.basis;
  for (Int& x : scaledb.a) x *= a.den;
  Lattice right = lattice_from_rows(b.lat.ambient, scaledb);
  return lattice_subset(left, right);
}

// quotient b/a for nested rational lattices a <= b
inline FgAbGroup qlattice_quotient(const QLattice& a, const QLattice& b) {
  IntMatrix scaled = a.lat.basis;
  for (Int& x : scaled.a) x *= b.den;
  Lattice left = lattice_from_rows(a.lat.ambient, scaled);
  IntMatrix scaledb = b.lat.basis;
  for (Int& x : scaledb.a) x *= a.den;
  Lattice right = lattice_from_rows(b.lat.ambient, scaledb);
  return lattice_quotient(left, right);
}

}  // namespace camlat
