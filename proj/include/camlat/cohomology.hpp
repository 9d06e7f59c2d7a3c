#pragma once

// Cohomology of the cover's local systems on the punctured curve and of
// their pushforwards to the closed curve: explicit presentations, torsion,
// and the pairing between the two pushforward lattices.
//
// Model: the curve minus the branch points and one extra regular point is a
// wedge of 2g+b circles; a cocycle is its tuple of values on the loop
// generators, the coboundary of m sends a generator x to (1-rho(x))m, and
// the surface relator is evaluated by the crossed-homomorphism expansion
// (Fox derivatives). Pushforward cohomology imposes the local conditions
// u(gamma_i) in (1-rho_i)Lambda together with u(relator) = 0.

#include "camlat/cameral.hpp"

#include <cassert>

namespace camlat {

// ---------------------------------------------------------------------------
// Relator walks.

// Matrices F_k with u(relator) = sum_k F_k u_k for any cocycle u.
inline std::vector<IntMatrix> fox_matrices(const LocalSystem& ls) {
  int n = ls.n, m = ls.m();
  std::vector<IntMatrix> f(m, IntMatrix::zero(n, n));
  IntMatrix p = IntMatrix::identity(n);
  for (const Letter& y : ls.relator()) {
    if (!y.inv) {
      f[y.idx] = f[y.idx] + p;
      p = p * ls.gen[y.idx];
    } else {
      p = p * ls.gen_inv[y.idx];
      f[y.idx] = f[y.idx] - p;
    }
  }
  // Fox identity: sum_k F_k (1 - M_k) = 1 - rho(relator) = 0
  IntMatrix check(n, n);
  for (int k = 0; k < m; ++k)
    check = check + f[k] * (IntMatrix::identity(n) - ls.gen[k]);
  if (!check.is_zero())
    throw std::logic_error("fox identity fails: relator not satisfied");
  return f;
}

// Coboundary matrix: Lambda -> Lambda^m, stacked (1 - M_k).
inline IntMatrix coboundary_matrix(const LocalSystem& ls) {
  int n = ls.n, m = ls.m();
  IntMatrix d(m * n, n);
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        d.at(k * n + i, j) = (i == j ? 1 : 0) - ls.gen[k].at(i, j);
  return d;
}

inline std::vector<Int> cocycle_block(const std::vector<Int>& u, int n, int k) {
  return std::vector<Int>(u.begin() + size_t(k) * n,
                          u.begin() + size_t(k + 1) * n);
}

// ---------------------------------------------------------------------------
// Subquotients: H^1(open), H^1(U, A), H^1(C, j_*A).

enum class Level {
  open_punctured,  // no conditions: H^1(U - {s0}, A)
  open,            // relator condition only: H^1(U, A)
  pushforward      // relator + branch conditions: H^1(C, j_*A)
};

struct SubquotientData {
  Level level = Level::open_punctured;
  FgAbGroup group;
  Lattice cocycles;       // sublattice of Z^{mn} cut out by the conditions
  IntMatrix rel_in_k;     // coboundary columns in cocycle-lattice coordinates
  IntMatrix tf_basis;     // rows: cocycle lifts of a free-part basis
  SaturationResult sat;   // saturation of the coboundary image inside cocycles
};

// Free-part basis of a cokernel group expressed in generator coordinates.
inline IntMatrix fg_free_basis_in_gens(const FgAbGroup& g) {
  if (!g.pres) throw std::logic_error("group without presentation");
  const FgPresentation& p = *g.pres;
  IntMatrix uinv = unimodular_inverse(p.u);
  std::vector<int> free_pos;
  int r = int(p.diag.size());
  for (int i = 0; i < p.ngens; ++i)
    if (i >= r || p.diag[i] == 0) free_pos.push_back(i);
  IntMatrix out(int(free_pos.size()), p.ngens);
  for (size_t s = 0; s < free_pos.size(); ++s)
    for (int i = 0; i < p.ngens; ++i) out.at(int(s), i) = uinv.at(i, free_pos[s]);
  return out;
}

inline SubquotientData cohomology_subquotient(const LocalSystem& ls,
                                              Level level) {
  int n = ls.n, m = ls.m(), b = ls.b();
  SubquotientData out;
  out.level = level;
  IntMatrix d0 = coboundary_matrix(ls);
  if (level == Level::open_punctured) {
    out.cocycles = full_lattice(m * n);
  } else {
    auto fox = fox_matrices(ls);
    // conditions: sum_k F_k u_k = 0; for pushforward also
    // u_{2g+i} = t_i * eps_i alpha_i^vee with integer t_i
    int nbranch = (level == Level::pushforward) ? b : 0;
    int urows = n + nbranch * n;
    int ucols = m * n + nbranch;
    IntMatrix big(urows, ucols);
    for (int k = 0; k < m; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) big.at(i, k * n + j) = fox[k].at(i, j);
    for (int i = 0; i < nbranch; ++i) {
      int k = 2 * ls.genus + i;
      for (int t = 0; t < n; ++t) {
        big.at(n + i * n + t, k * n + t) = 1;
        big.at(n + i * n + t, m * n + i) = -ls.eps[i] * ls.branch_coroot[i][t];
      }
    }
    Lattice ker = kernel(big);
    IntMatrix rows(ker.rank(), m * n);
    for (int i = 0; i < ker.rank(); ++i)
      for (int j = 0; j < m * n; ++j) rows.at(i, j) = ker.basis.at(i, j);
    out.cocycles = lattice_from_rows(m * n, rows);
  }
  // coboundaries in cocycle coordinates
  out.rel_in_k = IntMatrix(out.cocycles.rank(), n);
  for (int j = 0; j < n; ++j) {
    auto col = d0.col(j);
    auto c = lattice_coords(out.cocycles, col);
    if (!c)
      throw std::logic_error("coboundary not inside the cocycle lattice");
    for (int i = 0; i < out.cocycles.rank(); ++i) out.rel_in_k.at(i, j) = (*c)[i];
  }
  out.group = cokernel(out.rel_in_k);
  IntMatrix fb = fg_free_basis_in_gens(out.group);
  out.tf_basis = IntMatrix(fb.rows, m * n);
  for (int s = 0; s < fb.rows; ++s)
    for (int j = 0; j < m * n; ++j) {
      Int acc = 0;
      for (int i = 0; i < out.cocycles.rank(); ++i)
        acc += fb.at(s, i) * out.cocycles.basis.at(i, j);
      out.tf_basis.at(s, j) = acc;
    }
  // saturation witness for the torsion subgroup
  Lattice rellat = lattice_from_rows(
      out.cocycles.rank(),
      [&] {
        IntMatrix rows(n, out.cocycles.rank());
        for (int j = 0; j < n; ++j)
          for (int i = 0; i < out.cocycles.rank(); ++i)
            rows.at(j, i) = out.rel_in_k.at(i, j);
        return rows;
      }());
  out.sat = saturation(rellat);
  return out;
}

// ---------------------------------------------------------------------------
// Named cohomology groups.

struct CohomologyGroup {
  FgAbGroup group;
  SubquotientData data;
};

inline CohomologyGroup h1_open(const LocalSystem& ls) {
  CohomologyGroup out;
  out.data = cohomology_subquotient(ls, Level::open_punctured);
  out.group = out.data.group;
  // Euler characteristic bound: rank = n(2g+b-1) + rank of invariants
  Lattice inv = [&] {
    int n = ls.n, m = ls.m();
    IntMatrix stack(m * n, n);
    for (int k = 0; k < m; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          stack.at(k * n + i, j) = ls.gen[k].at(i, j) - (i == j ? 1 : 0);
    return kernel(stack);
  }();
  int expected = ls.n * (ls.m() - 1) + inv.rank();
  if (out.group.rank != expected)
    throw std::logic_error("open H^1 rank violates the Euler formula");
  return out;
}

inline Lattice invariants_lattice(const LocalSystem& ls) {
  int n = ls.n, m = ls.m();
  IntMatrix stack(m * n, n);
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        stack.at(k * n + i, j) = ls.gen[k].at(i, j) - (i == j ? 1 : 0);
  return kernel(stack);
}

inline FgAbGroup h0_pushforward(const LocalSystem& ls) {
  return fg_free(invariants_lattice(ls).rank());
}

inline CohomologyGroup h1_pushforward(const LocalSystem& ls) {
  CohomologyGroup out;
  out.data = cohomology_subquotient(ls, Level::pushforward);
  out.group = out.data.group;
  return out;
}

// H^2(C, j_*A) presented as coker[ H^1(U-s0) -> (+)_{i=0}^{b} coinvariants ]:
// generators Z^{(b+1)n} (block 0 = relator block), relations are the branch
// coinvariant denominators and the image of the restriction map.
struct H2Data {
  FgAbGroup group;                      // with presentation on Z^{(b+1)n}
  std::vector<std::vector<Int>> branch_torsion_gen;  // alpha_i^vee/eps_i^vee
};

inline H2Data h2_pushforward_presented(const LocalSystem& ls) {
  int n = ls.n, m = ls.m(), b = ls.b(), g = ls.genus;
  auto fox = fox_matrices(ls);
  IntMatrix rel((b + 1) * n, b + m * n);
  for (int i = 0; i < b; ++i)
    for (int t = 0; t < n; ++t)
      rel.at((i + 1) * n + t, i) = ls.eps[i] * ls.branch_coroot[i][t];
  for (int k = 0; k < m; ++k)
    for (int c = 0; c < n; ++c) {
      int col = b + k * n + c;
      for (int t = 0; t < n; ++t) rel.at(t, col) = fox[k].at(t, c);
      if (k >= 2 * g) {
        int i = k - 2 * g;
        rel.at((i + 1) * n + c, col) += 1;
      }
    }
  H2Data out;
  out.group = cokernel(rel);
  for (int i = 0; i < b; ++i) {
    std::vector<Int> v(n);
    for (int t = 0; t < n; ++t) {
      Int num = ls.branch_coroot[i][t];
      if (num % ls.eps_dual[i] != 0)
        throw std::logic_error("coroot not divisible by eps_dual");
      v[t] = num / ls.eps_dual[i];
    }
    out.branch_torsion_gen.push_back(v);
  }
  return out;
}

// Assembly from the dual system: tf part from the invariants of
// the dual, torsion as the dual of the open torsion of the dual system.
inline FgAbGroup h2_pushforward(const LocalSystem& ls) {
  LocalSystem dual = dual_local_system(ls);
  FgAbGroup tor_open_dual = fg_torsion_part(h1_open(dual).group);
  FgAbGroup assembled;
  assembled.rank = invariants_lattice(dual).rank();
  assembled.invariant_factors = pontryagin_dual(tor_open_dual).invariant_factors;
  FgAbGroup direct = h2_pushforward_presented(ls).group;
  if (!iso_test(assembled, direct))
    throw std::logic_error(
        "H^2 mismatch between direct presentation and dual-system assembly");
  return direct;
}

struct TorsionReport {
  FgAbGroup open_torsion;
  FgAbGroup pushforward_torsion;
  Int open_saturation_index = 1;
  Int pushforward_saturation_index = 1;
};

inline TorsionReport h1_torsion(const LocalSystem& ls) {
  TorsionReport out;
  auto open = cohomology_subquotient(ls, Level::open_punctured);
  auto push = cohomology_subquotient(ls, Level::pushforward);
  out.open_torsion = fg_torsion_part(open.group);
  out.pushforward_torsion = fg_torsion_part(push.group);
  out.open_saturation_index = open.sat.index;
  out.pushforward_saturation_index = push.sat.index;
  return out;
}

// ---------------------------------------------------------------------------
// Branch witnesses: a_i with u(gamma_i) = (1 - rho_i) a_i.

// mu_i: fixed integral solution of (alpha_i, mu) = eps_i.
inline std::vector<Int> branch_witness_seed(const LocalSystem& ls, int i) {
  const auto& alpha = ls.branch_root[i];
  int n = ls.n;
  // extended gcd across the coordinates
  std::vector<Int> mu(n, 0);
  Int g = 0;
  for (int t = 0; t < n; ++t) {
    if (alpha[t] == 0) continue;
    if (g == 0) {
      g = abs(alpha[t]);
      mu.assign(n, Int(0));
      mu[t] = alpha[t] > 0 ? 1 : -1;
      continue;
    }
    Int gg, s, tt;
    mpz_gcdext(gg.get_mpz_t(), s.get_mpz_t(), tt.get_mpz_t(), g.get_mpz_t(),
               alpha[t].get_mpz_t());
    for (auto& x : mu) x *= s;
    mu[t] += tt;
    g = gg;
  }
  if (g != ls.eps[i]) throw std::logic_error("eps is not the coordinate gcd");
  return mu;
}

// Witnesses for a pushforward cocycle: a_i = t_i * mu_i where
// u(gamma_i) = t_i eps_i alpha_i^vee.
inline std::vector<std::vector<Int>> branch_witnesses(const LocalSystem& ls,
                                                      const std::vector<Int>& u) {
  int n = ls.n, g = ls.genus, b = ls.b();
  std::vector<std::vector<Int>> out;
  for (int i = 0; i < b; ++i) {
    auto ui = cocycle_block(u, n, 2 * g + i);
    // solve u_i = t * eps_i alpha_i^vee
    Int t = 0;
    bool set = false;
    for (int c = 0; c < n; ++c) {
      Int denom = ls.eps[i] * ls.branch_coroot[i][c];
      if (denom == 0) {
        if (ui[c] != 0)
          throw std::logic_error("branch block outside the reflection line");
        continue;
      }
      Int q, r;
      mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), ui[c].get_mpz_t(),
                  denom.get_mpz_t());
      if (r != 0)
        throw std::logic_error("branch block outside the reflection line");
      if (set && q != t)
        throw std::logic_error("branch block outside the reflection line");
      t = q;
      set = true;
    }
    auto mu = branch_witness_seed(ls, i);
    for (auto& x : mu) x *= t;
    out.push_back(mu);
  }
  return out;
}

// ---------------------------------------------------------------------------
// The pairing between the pushforward lattices.
//
// P(u, w) for a cocycle u of A with branch witnesses a_i and a cocycle w of
// the dual system: evaluation of the relative cup product over the surface
// relator,
//   P = sum_j < rho(p_{j-1})^{-1} u(p_{j-1}), w(y_j) >
//       + sum_{negative letters} < u_x, w_x >
//       - sum_i < rho_i a_i, w(gamma_i) >.
// Coboundary invariance on both sides and witness independence hold because
// branch monodromies are involutions; the untwisted handle block reduces to
// the standard symplectic pairing.

inline Int cup_pairing(const LocalSystem& ls, const std::vector<Int>& u,
                       const std::vector<std::vector<Int>>& witnesses,
                       const LocalSystem& dual, const std::vector<Int>& w) {
  int n = ls.n, g = ls.genus, b = ls.b();
  Int total = 0;
  IntMatrix pmat = IntMatrix::identity(n);
  IntMatrix pinv = IntMatrix::identity(n);
  std::vector<Int> val_u(n, 0);  // u(prefix)
  for (const Letter& y : ls.relator()) {
    // w(y): w_k for a positive letter, -(dual gen)^{-1} w_k otherwise
    std::vector<Int> wy = cocycle_block(w, n, y.idx);
    if (y.inv) {
      wy = mul(dual.gen_inv[y.idx], wy);
      for (auto& x : wy) x = -x;
    }
    total += dot(mul(pinv, val_u), wy);
    if (y.inv) {
      // correction term for the inverse letter
      total += dot(cocycle_block(u, n, y.idx), cocycle_block(w, n, y.idx));
    }
    // advance the prefix
    std::vector<Int> uy = cocycle_block(u, n, y.idx);
    if (y.inv) {
      uy = mul(ls.gen_inv[y.idx], uy);
      for (auto& x : uy) x = -x;
    }
    auto step = mul(pmat, uy);
    for (int t = 0; t < n; ++t) val_u[t] += step[t];
    if (!y.inv) {
      pmat = pmat * ls.gen[y.idx];
      pinv = ls.gen_inv[y.idx] * pinv;
    } else {
      pmat = pmat * ls.gen_inv[y.idx];
      pinv = ls.gen[y.idx] * pinv;
    }
  }
  for (int i = 0; i < b; ++i) {
    auto ra = mul(ls.gen[2 * g + i], witnesses[i]);
    total -= dot(ra, cocycle_block(w, n, 2 * g + i));
  }
  return total;
}

struct PairingMatrix {
  IntMatrix gram;        // rows: basis of H^1(C,j_*A)_tf; cols: dual side
  IntMatrix a_basis;     // row lifts, A side
  IntMatrix b_basis;     // row lifts, dual side
  Int det_abs = 0;
};

struct GateFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline PairingMatrix pairing_gram(const LocalSystem& ls, const LocalSystem& dual,
                                  const SubquotientData& a,
                                  const SubquotientData& bd) {
  if (a.tf_basis.rows != bd.tf_basis.rows)
    throw GateFailure("pushforward ranks differ between the two sides");
  int d = a.tf_basis.rows;
  PairingMatrix out;
  out.gram = IntMatrix(d, d);
  out.a_basis = a.tf_basis;
  out.b_basis = bd.tf_basis;
  for (int s = 0; s < d; ++s) {
    auto u = a.tf_basis.row(s);
    auto wit = branch_witnesses(ls, u);
    for (int t = 0; t < d; ++t)
      out.gram.at(s, t) = cup_pairing(ls, u, wit, dual, bd.tf_basis.row(t));
  }
  out.det_abs = abs(det(out.gram));
  if (out.det_abs == 0)
    throw GateFailure("degenerate pairing between the pushforward lattices");
  return out;
}

inline PairingMatrix pairing_gram(const LocalSystem& ls) {
  LocalSystem dual = dual_local_system(ls);
  SubquotientData a = cohomology_subquotient(ls, Level::pushforward);
  SubquotientData bd = cohomology_subquotient(dual, Level::pushforward);
  return pairing_gram(ls, dual, a, bd);
}

// ---------------------------------------------------------------------------
// Open-level Kronecker pairing against the cycle space (independent route).

// Cycle space H_1(U, dual system) on the free generators x_1..x_{m-1}
// (the relator eliminates the last branch loop); kernel of
// sum_k ((M-dual_k)^{-1} - 1) m_k.
inline Lattice cycle_space(const LocalSystem& dual) {
  int n = dual.n, m = dual.m();
  if (m < 1) return Lattice(0);
  IntMatrix stack(n, (m - 1) * n);
  for (int k = 0; k < m - 1; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        stack.at(i, k * n + j) = dual.gen_inv[k].at(i, j) - (i == j ? 1 : 0);
  return kernel(stack);
}

// Kronecker matrix of cycles against H^1(U, A)_tf classes.
inline IntMatrix kronecker_matrix(const LocalSystem& ls) {
  LocalSystem dual = dual_local_system(ls);
  SubquotientData open_u = cohomology_subquotient(ls, Level::open);
  Lattice cycles = cycle_space(dual);
  int n = ls.n;
  IntMatrix out(cycles.rank(), open_u.tf_basis.rows);
  for (int s = 0; s < cycles.rank(); ++s)
    for (int t = 0; t < open_u.tf_basis.rows; ++t) {
      Int acc = 0;
      auto u = open_u.tf_basis.row(t);
      for (int k = 0; k + 1 < ls.m(); ++k)
        acc += dot(cocycle_block(cycles.basis.row(s), n, k),
                   cocycle_block(u, n, k));
      out.at(s, t) = acc;
    }
  return out;
}

// Gate: the open-level Kronecker pairing is perfect modulo torsion.
inline void check_open_perfectness(const LocalSystem& ls) {
  if (ls.b() == 0) return;  // closed case: no free generating set
  IntMatrix k = kronecker_matrix(ls);
  if (k.rows != k.cols)
    throw GateFailure("cycle space rank differs from open H^1 rank");
  auto s = snf(k);
  for (const Int& dI : s.diag)
    if (dI != 1)
      throw GateFailure("open Kronecker pairing not perfect mod torsion");
}

// Gate: the restriction image of the open dual (the identification of the
// other side's pushforward lattice) coincides with the column lattice of the
// cup pairing.
inline void check_cor_image(const LocalSystem& ls, const SubquotientData& a,
                            const PairingMatrix& pm) {
  SubquotientData open_u = cohomology_subquotient(ls, Level::open);
  int d = a.tf_basis.rows;
  int bigd = open_u.tf_basis.rows;
  IntMatrix e(d, bigd);
  for (int s = 0; s < d; ++s) {
    auto c = lattice_coords(open_u.cocycles, a.tf_basis.row(s));
    if (!c) throw GateFailure("pushforward cocycle outside the open lattice");
    auto proj = fg_project(open_u.group, *c);
    size_t ntor = open_u.group.invariant_factors.size();
    for (int i = 0; i < bigd; ++i) e.at(s, i) = proj[ntor + i];
  }
  Lattice restr = lattice_from_rows(d, e.transposed());
  Lattice gramcols = lattice_from_rows(d, pm.gram.transposed());
  if (restr != gramcols)
    throw GateFailure("restriction image differs from the pairing lattice");
}

// ---------------------------------------------------------------------------
// Global sections of the three sheaf levels.
//
// A section over the closed curve is a monodromy-invariant point of the
// coefficient torus whose value at each branch satisfies the stalk
// congruence: none for the top level, (alpha_i, x) in Z for the middle one,
// (alpha_i/eps_i, x) in Z for the connected level. Solved exactly as
// {x in Q^n : X x in Z^rows}/Z^n for a stacked integer matrix X.

enum class SheafLevel { connected, middle, top };

inline FgAbGroup section_group(const LocalSystem& ls, SheafLevel level) {
  int n = ls.n, m = ls.m(), b = ls.b();
  int extra = (level == SheafLevel::top) ? 0 : b;
  IntMatrix x(m * n + extra, n);
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        x.at(k * n + i, j) = ls.gen[k].at(i, j) - (i == j ? 1 : 0);
  for (int i = 0; i < extra; ++i)
    for (int j = 0; j < n; ++j) {
      Int num = ls.branch_root[i][j];
      if (level == SheafLevel::connected) {
        if (num % ls.eps[i] != 0)
          throw std::logic_error("root coordinate not divisible by eps");
        num /= ls.eps[i];
      }
      x.at(m * n + i, j) = num;
    }
  auto s = snf(x);
  FgAbGroup g;
  int constrained = 0;
  for (const Int& dI : s.diag) {
    if (dI == 0) continue;
    ++constrained;
    if (dI >= 2) g.invariant_factors.push_back(dI);
  }
  g.rank = n - constrained;
  std::sort(g.invariant_factors.begin(), g.invariant_factors.end());
  return g;
}

}  // namespace camlat
