#pragma once

// The cocharacter sandwich of the three Prym-level groups, their component
// and automorphism groups, and the duality verification at lattice level.
//
// Ambient coordinates: the free part of H^1(C, j_*A) with its canonical
// basis is the standard Z^d; the top lattice is the dual of the other side's
// pushforward lattice under the cup pairing; the middle lattice is cut out
// by the branch residue map.

#include "camlat/cohomology.hpp"

#include <sstream>

namespace camlat {

// A root datum is Sp-like when some root pairs with the lattice in 2Z, and
// SO(odd)-like when some coroot is divisible by 2. The rank-2 coincidence
// B2 = C2 and the rank-1 coincidences are handled by using these invariant
// predicates rather than type letters.
inline bool is_sp_like(const RootDatum& rd) {
  for (const auto& p : all_roots(rd))
    if (epsilon(rd, p) == 2) return true;
  return false;
}
inline bool is_so_odd_like(const RootDatum& rd) {
  for (const auto& p : all_roots(rd))
    if (epsilon_dual(rd, p) == 2) return true;
  return false;
}

struct SandwichLattice {
  int dim = 0;
  QLattice l0, l, l1;            // cochar of the connected / middle / top level
  IntMatrix gram;                // pairing of the two pushforward lattices
  std::vector<Int> zeta_modulus; // per branch: eps_i * eps_dual_i
  IntMatrix zeta_residues;       // L1 basis x branch, residue mod the modulus
};

namespace detail {

inline std::vector<Rat> rational_cocycle(const SubquotientData& a,
                                         const std::vector<Rat>& coords,
                                         int mn) {
  std::vector<Rat> y(mn, Rat(0));
  for (int s = 0; s < a.tf_basis.rows; ++s) {
    if (coords[s] == 0) continue;
    for (int j = 0; j < mn; ++j) y[j] += coords[s] * Rat(a.tf_basis.at(s, j));
  }
  return y;
}

// Torsion sections of the top-level sheaf: rational generators of
// {t in Q^n / Z^n : (M_k - 1) t in Z^n for all k}.
inline std::vector<std::vector<Rat>> torsion_section_generators(
    const LocalSystem& ls) {
  int n = ls.n, m = ls.m();
  IntMatrix x(m * n, n);
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        x.at(k * n + i, j) = ls.gen[k].at(i, j) - (i == j ? 1 : 0);
  auto s = snf(x);
  std::vector<std::vector<Rat>> out;
  for (size_t i = 0; i < s.diag.size(); ++i) {
    if (s.diag[i] < 2) continue;
    std::vector<Rat> t(n);
    for (int j = 0; j < n; ++j)
      t[j] = Rat(s.v.at(j, int(i))) / Rat(s.diag[i]);
    out.push_back(t);
  }
  return out;
}

// Branch pattern xi(t) of a torsion section: eps_dual_i*(alpha_i, t) mod N_i.
inline std::vector<Int> section_branch_pattern(const LocalSystem& ls,
                                               const std::vector<Rat>& t) {
  std::vector<Int> out;
  for (int i = 0; i < ls.b(); ++i) {
    Rat acc = 0;
    for (int j = 0; j < ls.n; ++j) acc += Rat(ls.branch_root[i][j]) * t[j];
    acc *= Rat(ls.eps_dual[i]);
    if (acc.get_den() != 1)
      throw GateFailure("section pattern not integral");
    Int ni = ls.eps[i] * ls.eps_dual[i];
    Int k;
    mpz_fdiv_r(k.get_mpz_t(), acc.get_num().get_mpz_t(), ni.get_mpz_t());
    out.push_back(k);
  }
  return out;
}

// Cocharacter decomposition y = delta0(s) + Z with Z integral; returns Z.
// Exists exactly when y mod Lambda is a trivial circle-coefficient class.
inline std::optional<std::vector<Int>> cochar_decomposition(
    const LocalSystem& ls, const std::vector<Rat>& y) {
  int n = ls.n, m = ls.m(), mn = m * n;
  Int e = 1;
  {
    auto gens = torsion_section_generators(ls);
    for (auto& t : gens)
      for (auto& q : t) e = lcm(e, Int(q.get_den()));
  }
  Int ylcm = 1;
  for (const auto& q : y) ylcm = lcm(ylcm, Int(q.get_den()));
  std::vector<Int> dens = {ylcm, 2 * ylcm, 2 * e * ylcm, 4 * e * ylcm};
  IntMatrix stack(mn, n);
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        stack.at(k * n + i, j) = (i == j ? 1 : 0) - ls.gen[k].at(i, j);
  for (const Int& dd : dens) {
    // (1-M_k) sigma + dd * t_k = dd * y_k with sigma, t integral; s = sigma/dd
    IntMatrix a(mn, n + mn);
    for (int i = 0; i < mn; ++i) {
      for (int j = 0; j < n; ++j) a.at(i, j) = stack.at(i, j);
      a.at(i, n + i) = dd;
    }
    std::vector<Int> b(mn);
    bool ok = true;
    for (int i = 0; i < mn; ++i) {
      Rat q = Rat(dd) * y[i];
      if (q.get_den() != 1) {
        ok = false;
        break;
      }
      b[i] = q.get_num();
    }
    if (!ok) continue;
    auto sol = solve_linear_over_z(a, b);
    if (!sol) continue;
    // Z = y - delta0(sigma/dd)
    std::vector<Int> z(mn);
    for (int k = 0; k < m; ++k)
      for (int i = 0; i < n; ++i) {
        Rat acc = y[size_t(k) * n + i];
        for (int j = 0; j < n; ++j)
          acc -= Rat(stack.at(k * n + i, j)) * Rat((*sol)[j]) / Rat(dd);
        if (acc.get_den() != 1) throw GateFailure("decomposition not integral");
        z[size_t(k) * n + i] = acc.get_num();
      }
    return z;
  }
  return std::nullopt;
}

// zeta residues of a cocharacter: coefficient of Z_{2g+i} on the primitive
// line Z (alpha_i^vee / eps_dual_i), modulo eps_i*eps_dual_i.
inline std::vector<Int> zeta_of(const LocalSystem& ls,
                                const std::vector<Rat>& y) {
  auto z = cochar_decomposition(ls, y);
  if (!z)
    throw GateFailure("top-lattice element admits no cocharacter decomposition");
  int n = ls.n, g = ls.genus;
  std::vector<Int> out;
  for (int i = 0; i < ls.b(); ++i) {
    // solve Z_i = c * v_i with v_i = coroot/eps_dual
    Int c = 0;
    bool set = false;
    for (int t = 0; t < n; ++t) {
      Int denom = ls.branch_coroot[i][t] / ls.eps_dual[i];
      const Int& num = (*z)[size_t(2 * g + i) * n + t];
      if (denom == 0) {
        if (num != 0) throw GateFailure("branch block off the primitive line");
        continue;
      }
      Int q, r;
      mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(),
                  denom.get_mpz_t());
      if (r != 0) throw GateFailure("branch block off the primitive line");
      if (set && q != c) throw GateFailure("branch block off the primitive line");
      c = q;
      set = true;
    }
    Int ni = ls.eps[i] * ls.eps_dual[i];
    Int k;
    mpz_fdiv_r(k.get_mpz_t(), c.get_mpz_t(), ni.get_mpz_t());
    out.push_back(k);
  }
  return out;
}

}  // namespace detail

inline SandwichLattice prym_sandwich(const LocalSystem& ls,
                                     const LocalSystem& /*dual*/,
                                     const SubquotientData& a,
                                     const SubquotientData& /*bd*/,
                                     const PairingMatrix& pm) {
  int d = pm.gram.rows;
  int n = ls.n, mn = ls.m() * n;
  SandwichLattice out;
  out.dim = d;
  out.gram = pm.gram;
  out.l0 = qlattice_from_lattice(full_lattice(d));
  // L1 = {y : G^T y integral} = row lattice of G^{-1}
  {
    RatMatrix ginv = rat_inverse(RatMatrix::from_int(pm.gram));
    Int den = 1;
    for (const auto& q : ginv.a) den = lcm(den, Int(q.get_den()));
    IntMatrix rows(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        Rat q = ginv.at(i, j) * Rat(den);
        rows.at(i, j) = q.get_num();
      }
    out.l1 = qlattice_canonical(den, lattice_from_rows(d, rows));
  }
  if (!qlattice_subset(out.l0, out.l1))
    throw GateFailure("L0 not inside L1 (pairing not integral)");
  FgAbGroup quot = qlattice_quotient(out.l0, out.l1);
  for (const Int& f : quot.invariant_factors)
    if (f != 2) throw GateFailure("L1/L0 is not an elementary 2-group");
  if (quot.rank != 0) throw GateFailure("L1/L0 has positive rank");
  // |det G| = [L1 : L0]
  if (quot.order() != pm.det_abs)
    throw GateFailure("pairing determinant differs from the sandwich index");

  int b = ls.b();
  for (int i = 0; i < b; ++i) out.zeta_modulus.push_back(ls.eps[i] * ls.eps_dual[i]);

  // zeta residues on an L1 basis, via cocharacter decompositions
  out.zeta_residues = IntMatrix(out.l1.rank(), b);
  for (int r = 0; r < out.l1.rank(); ++r) {
    std::vector<Rat> coords(d);
    for (int j = 0; j < d; ++j)
      coords[j] = Rat(out.l1.lat.basis.at(r, j)) / Rat(out.l1.den);
    for (const auto& q : coords)
      if (q.get_den() != 1 && q.get_den() != 2)
        throw GateFailure("L1 coordinate denominator exceeds 2");
    auto y = detail::rational_cocycle(a, coords, mn);
    auto res = detail::zeta_of(ls, y);
    for (int i = 0; i < b; ++i) out.zeta_residues.at(r, i) = res[i];
  }

  // ambiguity patterns of the torsion sections of the top level
  std::vector<std::vector<Int>> xi;
  for (const auto& t : detail::torsion_section_generators(ls))
    xi.push_back(detail::section_branch_pattern(ls, t));

  auto kernel_modulo = [&](const std::vector<Int>& moduli,
                           bool reduce) -> QLattice {
    if (b == 0) return out.l1;
    IntMatrix zt(b, out.l1.rank());
    for (int i = 0; i < b; ++i)
      for (int r = 0; r < out.l1.rank(); ++r) {
        Int k;
        mpz_fdiv_r(k.get_mpz_t(), out.zeta_residues.at(r, i).get_mpz_t(),
                   moduli[i].get_mpz_t());
        zt.at(i, r) = k;
      }
    // allowed values: the lattice spanned by the moduli and the (reduced)
    // section patterns
    IntMatrix rows(b + int(xi.size()), b);
    for (int i = 0; i < b; ++i) rows.at(i, i) = moduli[i];
    for (size_t s = 0; s < xi.size(); ++s)
      for (int i = 0; i < b; ++i) {
        Int k = xi[s][i];
        if (reduce) mpz_fdiv_r(k.get_mpz_t(), k.get_mpz_t(), moduli[i].get_mpz_t());
        rows.at(b + int(s), i) = k;
      }
    Lattice allowed = lattice_from_rows(b, rows);
    Lattice ker = lattice_preimage(zt, allowed);
    IntMatrix amb(ker.rank(), d);
    for (int i = 0; i < ker.rank(); ++i)
      for (int j = 0; j < d; ++j) {
        Int acc = 0;
        for (int r = 0; r < out.l1.rank(); ++r)
          acc += ker.basis.at(i, r) * out.l1.lat.basis.at(r, j);
        amb.at(i, j) = acc;
      }
    return qlattice_canonical(out.l1.den, lattice_from_rows(d, amb));
  };

  // ker(zeta) modulo the section ambiguity must be exactly L0
  {
    QLattice kerq = kernel_modulo(out.zeta_modulus, false);
    if (kerq != out.l0) throw GateFailure("ker(zeta) differs from L0");
  }
  // middle lattice: residues vanish after the reduction modulo eps_dual
  {
    std::vector<Int> red(ls.eps_dual.begin(), ls.eps_dual.end());
    out.l = kernel_modulo(red, true);
  }
  if (!qlattice_subset(out.l0, out.l) || !qlattice_subset(out.l, out.l1))
    throw GateFailure("sandwich inclusions fail");
  return out;
}

inline SandwichLattice prym_sandwich(const CoverDatum& cd) {
  LocalSystem ls = local_system(cd);
  LocalSystem dual = dual_local_system(ls);
  SubquotientData a = cohomology_subquotient(ls, Level::pushforward);
  SubquotientData bd = cohomology_subquotient(dual, Level::pushforward);
  PairingMatrix pm = pairing_gram(ls, dual, a, bd);
  return prym_sandwich(ls, dual, a, bd, pm);
}

// ---------------------------------------------------------------------------
// Component groups of the three levels.

struct LevelTriple {
  FgAbGroup connected, middle, top;
};

inline LevelTriple component_groups(const LocalSystem& ls, const RootDatum& rd) {
  H2Data h2 = h2_pushforward_presented(ls);
  // the assembly from the dual system must agree (hard cross-check)
  {
    LocalSystem dual = dual_local_system(ls);
    FgAbGroup assembled;
    assembled.rank = invariants_lattice(dual).rank();
    assembled.invariant_factors =
        pontryagin_dual(fg_torsion_part(h1_open(dual).group)).invariant_factors;
    if (!iso_test(assembled, h2.group))
      throw GateFailure("H^2 direct and dual-system assembly disagree");
  }
  int n = ls.n, b = ls.b();
  LevelTriple out;
  out.connected = fg_torsion_part(h2.group);
  if (h2.group.rank != 0)
    throw GateFailure("H^2 has positive rank on a generic cover");
  // skyscraper images: top level kills the classes of alpha^vee/eps_dual,
  // middle level those of alpha^vee
  IntMatrix vtop(h2.group.pres->ngens, b), vmid(h2.group.pres->ngens, b);
  for (int i = 0; i < b; ++i)
    for (int t = 0; t < n; ++t) {
      vtop.at((i + 1) * n + t, i) = h2.branch_torsion_gen[i][t];
      vmid.at((i + 1) * n + t, i) = h2.branch_torsion_gen[i][t] * ls.eps_dual[i];
    }
  out.top = fg_torsion_part(fg_quotient_by(h2.group, vtop));
  out.middle = fg_torsion_part(fg_quotient_by(h2.group, vmid));
  // closed forms from the root datum
  FgAbGroup p1 = pi1(rd);
  FgAbGroup z2 = fg_cyclic(Int(2));
  FgAbGroup expected_conn = is_sp_like(rd) ? z2 : p1;
  FgAbGroup expected_top = is_so_odd_like(rd) ? fg_trivial() : p1;
  if (!iso_test(out.connected, expected_conn))
    throw GateFailure("pi0 of the connected level differs from the closed form");
  if (!iso_test(out.middle, p1))
    throw GateFailure("pi0 of the middle level differs from pi1(G)");
  if (!iso_test(out.top, expected_top))
    throw GateFailure("pi0 of the top level differs from the closed form");
  return out;
}

inline LevelTriple component_groups(const CoverDatum& cd) {
  return component_groups(local_system(cd), cd.datum);
}

// ---------------------------------------------------------------------------
// Automorphism groups (global sections) of the three levels.

inline LevelTriple automorphism_groups(const LocalSystem& ls,
                                       const RootDatum& rd) {
  LevelTriple out;
  out.connected = section_group(ls, SheafLevel::connected);
  out.middle = section_group(ls, SheafLevel::middle);
  out.top = section_group(ls, SheafLevel::top);
  // the connected level must reproduce the pushforward H^1 torsion
  FgAbGroup tor = fg_torsion_part(h1_pushforward(ls).group);
  if (!iso_test(out.connected, tor))
    throw GateFailure(
        "sections of the connected level differ from H^1(C,j_*A)_tor");
  // closed forms
  FgAbGroup z = center(rd);
  FgAbGroup z2 = fg_cyclic(Int(2));
  FgAbGroup exp_conn = is_sp_like(rd) ? fg_trivial() : z;
  FgAbGroup exp_mid = is_so_odd_like(rd) ? z : (is_sp_like(rd) ? z2 : z);
  FgAbGroup exp_top = (is_sp_like(rd) || is_so_odd_like(rd)) ? z2 : z;
  if (!iso_test(out.connected, exp_conn))
    throw GateFailure("H^0 of the connected level differs from the closed form");
  if (!iso_test(out.middle, exp_mid))
    throw GateFailure("H^0 of the middle level differs from the closed form");
  if (!iso_test(out.top, exp_top))
    throw GateFailure("H^0 of the top level differs from the closed form");
  return out;
}

inline LevelTriple automorphism_groups(const CoverDatum& cd) {
  return automorphism_groups(local_system(cd), cd.datum);
}

// ---------------------------------------------------------------------------
// Duality verification.

struct CheckRow {
  std::string name;
  std::string lhs;
  std::string rhs;
  bool pass = false;
};

struct DualityReport {
  std::string group;
  std::string dual_group;
  std::vector<CheckRow> checks;
  bool verdict = false;

  void add(const std::string& name, const std::string& lhs,
           const std::string& rhs) {
    checks.push_back({name, lhs, rhs, lhs == rhs});
  }
  void finish() {
    verdict = !checks.empty();
    for (const auto& c : checks) verdict = verdict && c.pass;
  }
};

inline CoverDatum dual_cover(const CoverDatum& cd) {
  CoverDatum out;
  out.datum = langlands_dual(cd.datum);
  out.genus = cd.genus;
  out.handle_words = cd.handle_words;
  for (const auto& h : cd.handles) out.handles.push_back(contragredient(h));
  auto droots = all_roots(out.datum);
  for (const auto& p : cd.branches) {
    bool found = false;
    for (const auto& q : droots)
      if (q.root == p.coroot && q.coroot == p.root) {
        out.branches.push_back(q);
        found = true;
        break;
      }
    if (!found) throw std::logic_error("coroot is not a root of the dual datum");
  }
  return out;
}

inline std::string qlattice_str(const QLattice& q) {
  std::ostringstream os;
  os << "1/" << q.den.get_str() << " * [";
  for (int i = 0; i < q.lat.rank(); ++i) {
    if (i) os << "; ";
    for (int j = 0; j < q.lat.ambient; ++j) {
      if (j) os << ",";
      os << q.lat.basis.at(i, j).get_str();
    }
  }
  os << "]";
  return os.str();
}

// Dual lattice of (the transport of) a rational lattice under the pairing:
// {y : <G x', y> in Z for all x' in the lattice}.
inline QLattice pairing_dual_lattice(const IntMatrix& g, const QLattice& x) {
  int d = g.rows;
  // condition on y: (1/x.den) * (B_x G^T) y in Z^rank
  IntMatrix bgt(x.rank(), d);
  for (int i = 0; i < x.rank(); ++i)
    for (int j = 0; j < d; ++j) {
      Int acc = 0;
      for (int t = 0; t < d; ++t) acc += x.lat.basis.at(i, t) * g.at(j, t);
      bgt.at(i, j) = acc;
    }
  // all solutions lie in (1/|det g|) Z^d when x contains Z^d, so clearing
  // denominators by dscale captures the whole dual lattice
  Int dscale = abs(det(g)) * x.den;
  IntMatrix mod2(x.rank(), x.rank());
  for (int i = 0; i < x.rank(); ++i) mod2.at(i, i) = x.den * dscale;
  Lattice modlat2 = lattice_from_rows(x.rank(), mod2);
  Lattice pre2 = lattice_preimage(bgt, modlat2);
  return qlattice_canonical(dscale, pre2);
}

struct A1Refused : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline DualityReport verify_duality(const CoverDatum& cd, bool force_a1 = false) {
  if (cd.datum.a1_flag && !force_a1)
    throw A1Refused("type A1 refused for duality checks unless forced");
  CoverDatum dl = dual_cover(cd);
  DualityReport rep;
  rep.group = cd.datum.type_string();
  rep.dual_group = dl.datum.type_string();

  LocalSystem ls = local_system(cd);
  LocalSystem dual = dual_local_system(ls);
  // the dual cover's own system must be the dual system
  {
    LocalSystem check = local_system(dl);
    for (int k = 0; k < ls.m(); ++k)
      if (check.gen[k] != dual.gen[k])
        throw GateFailure("dual cover's local system is not the dual system");
  }
  SubquotientData a = cohomology_subquotient(ls, Level::pushforward);
  SubquotientData bd = cohomology_subquotient(dual, Level::pushforward);
  PairingMatrix pg = pairing_gram(ls, dual, a, bd);
  PairingMatrix pg_dual = pairing_gram(dual, ls, bd, a);

  SandwichLattice sg = prym_sandwich(ls, dual, a, bd, pg);
  SandwichLattice sl = prym_sandwich(dual, ls, bd, a, pg_dual);

  // rank equality
  rep.add("rank", std::to_string(sg.dim), std::to_string(sl.dim));

  // polarization compatibility: Gram(G) = +-Gram(dual)^T in the matched bases
  {
    IntMatrix t = pg_dual.gram.transposed();
    IntMatrix tneg = t;
    for (auto& x : tneg.a) x = -x;
    bool pass = (pg.gram == t) || (pg.gram == tneg);
    rep.checks.push_back({"polarization", "Gram",
                          pass ? "Gram^T up to sign" : "mismatch", pass});
  }

  // lattice comparisons in the common ambient: transport the dual-side
  // lattices by x' -> G x' and dualize
  auto transported_dual = [&](const QLattice& x) {
    return pairing_dual_lattice(pg.gram, x);
  };
  QLattice dual_of_l1 = transported_dual(sl.l1);
  QLattice dual_of_l0 = transported_dual(sl.l0);
  QLattice dual_of_l = transported_dual(sl.l);
  rep.add("L0(G) = dual L1(dualG)", qlattice_str(sg.l0), qlattice_str(dual_of_l1));
  rep.add("L1(G) = dual L0(dualG)", qlattice_str(sg.l1), qlattice_str(dual_of_l0));
  rep.add("L(G) = dual L(dualG)", qlattice_str(sg.l), qlattice_str(dual_of_l));

  // cross tables: pi0(X_G) = H^0(X'_dualG)^dual for
  // (X, X') in {(connected, top), (middle, middle), (top, connected)}
  LevelTriple pg0 = component_groups(ls, cd.datum);
  LevelTriple ag0 = automorphism_groups(ls, cd.datum);
  LevelTriple pl0 = component_groups(dual, dl.datum);
  LevelTriple al0 = automorphism_groups(dual, dl.datum);
  auto fgs = [](const FgAbGroup& g) { return fg_to_string(g); };
  rep.add("pi0(connected_G) = H0(top_dualG)^", fgs(pg0.connected),
          fgs(pontryagin_dual(al0.top)));
  rep.add("pi0(middle_G) = H0(middle_dualG)^", fgs(pg0.middle),
          fgs(pontryagin_dual(al0.middle)));
  rep.add("pi0(top_G) = H0(connected_dualG)^", fgs(pg0.top),
          fgs(pontryagin_dual(al0.connected)));
  rep.add("pi0(connected_dualG) = H0(top_G)^", fgs(pl0.connected),
          fgs(pontryagin_dual(ag0.top)));
  rep.add("pi0(middle_dualG) = H0(middle_G)^", fgs(pl0.middle),
          fgs(pontryagin_dual(ag0.middle)));
  rep.add("pi0(top_dualG) = H0(connected_G)^", fgs(pl0.top),
          fgs(pontryagin_dual(ag0.connected)));

  rep.finish();
  return rep;
}

// ---------------------------------------------------------------------------
// pi1 of a reductive quotient, with the extension cross-check.

inline FgAbGroup reductive_pi1(const std::vector<RootDatum>& parts,
                               int torus_rank,
                               const std::vector<std::vector<Rat>>& kgens) {
  RootDatum prod = product_datum(parts, torus_rank);
  RootDatum quo = kgens.empty() ? prod : central_quotient(prod, kgens);
  FgAbGroup out = pi1(quo);
  // extension check: pi1(quotient) / image of pi1(product) must be K
  if (!kgens.empty()) {
    // order of K = index of the old cocharacter lattice in the new one
    Int den = 1;
    for (const auto& v : kgens)
      for (const auto& q : v) den = lcm(den, Int(q.get_den()));
    IntMatrix rows(prod.n + int(kgens.size()), prod.n);
    for (int i = 0; i < prod.n; ++i) rows.at(i, i) = den;
    for (size_t k = 0; k < kgens.size(); ++k)
      for (int j = 0; j < prod.n; ++j) {
        Rat q = kgens[k][j] * Rat(den);
        rows.at(prod.n + int(k), j) = q.get_num();
      }
    Lattice lnew = lattice_from_rows(prod.n, rows);
    IntMatrix old(prod.n, prod.n);
    for (int i = 0; i < prod.n; ++i) old.at(i, i) = den;
    Lattice lold = lattice_from_rows(prod.n, old);
    FgAbGroup kgrp = lattice_quotient(lold, lnew);
    // pi1(quotient)/im(pi1(product)): the old lattice basis in new coords
    // spans the image subgroup
    RatMatrix b(prod.n, prod.n);
    for (int i = 0; i < prod.n; ++i)
      for (int j = 0; j < prod.n; ++j)
        b.at(i, j) = Rat(lnew.basis.at(i, j)) / Rat(den);
    RatMatrix binv = rat_inverse(b);
    IntMatrix elems(prod.n, prod.n);
    for (int i = 0; i < prod.n; ++i)
      for (int j = 0; j < prod.n; ++j) {
        Rat q = binv.at(i, j);
        if (q.get_den() != 1)
          throw std::logic_error("old lattice not inside the new one");
        elems.at(j, i) = q.get_num();  // column i = old e_i in new coords
      }
    FgAbGroup cok = fg_quotient_by(out, elems);
    if (!iso_test(cok, kgrp))
      throw GateFailure("pi1 extension cokernel differs from K");
  }
  return out;
}

}  // namespace camlat
