#pragma once

// Root data for the simple types and their isogeny classes, Langlands
// duality, epsilon invariants, pi1/center, Weyl reflections and orbits.
//
// Coordinates: the cocharacter lattice is always the ambient Z^n. Vectors in
// it are plain integer vectors; roots live in the dual and are stored as
// integer functionals, so (alpha, v) is a dot product for every isogeny
// class. Weyl elements are n x n integer matrices acting on column vectors.

#include "camlat/ratmat.hpp"
#include "camlat/zlattice.hpp"

#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace camlat {

struct SimpleFactor {
  char type = 'A';
  int rank = 0;
};

struct RootPair {
  std::vector<Int> root;    // functional on the ambient lattice
  std::vector<Int> coroot;  // vector in the ambient lattice
  int orbit = 0;            // length-class id within its simple factor
  bool is_long = false;     // meaningful only when the factor has two classes
  int factor = 0;
};

struct RootDatum {
  int n = 0;  // ambient rank of the cocharacter lattice
  std::vector<SimpleFactor> factors;
  int torus_rank = 0;
  std::string isogeny_label;  // "sc", "ad", "so", "int<k>", "custom"
  bool a1_flag = false;       // some factor of type A1 (downstream checks warn)

  IntMatrix simple_roots;    // l x n, row i = alpha_i
  IntMatrix simple_coroots;  // l x n, row i = alpha_i-check

  int semisimple_rank() const { return simple_roots.rows; }
  bool is_semisimple() const { return torus_rank == 0 && n == semisimple_rank(); }

  std::vector<Int> simple_root(int i) const { return simple_roots.row(i); }
  std::vector<Int> simple_coroot(int i) const { return simple_coroots.row(i); }

  std::string type_string() const {
    std::ostringstream os;
    for (size_t k = 0; k < factors.size(); ++k) {
      if (k) os << "x";
      os << factors[k].type << factors[k].rank;
    }
    for (int t = 0; t < torus_rank; ++t) os << (os.str().empty() ? "T1" : "xT1");
    if (!isogeny_label.empty()) os << ":" << isogeny_label;
    return os.str();
  }

  bool operator==(const RootDatum& o) const {
    return n == o.n && simple_roots == o.simple_roots &&
           simple_coroots == o.simple_coroots;
  }
};

// ---------------------------------------------------------------------------
// Cartan matrices, Bourbaki numbering.

inline bool valid_type_rank(char type, int rank) {
  switch (type) {
    case 'A': return rank >= 1;
    case 'B': return rank >= 2;
    case 'C': return rank >= 2;
    case 'D': return rank >= 4;
    case 'E': return rank >= 6 && rank <= 8;
    case 'F': return rank == 4;
    case 'G': return rank == 2;
    default: return false;
  }
}

inline IntMatrix cartan_matrix(char type, int r) {
  if (!valid_type_rank(type, r))
    throw std::invalid_argument(std::string("invalid type/rank: ") + type +
                                std::to_string(r));
  IntMatrix c(r, r);
  auto chain = [&](int i, int j) { c.at(i, j) = -1; c.at(j, i) = -1; };
  for (int i = 0; i < r; ++i) c.at(i, i) = 2;
  switch (type) {
    case 'A':
      for (int i = 0; i + 1 < r; ++i) chain(i, i + 1);
      break;
    case 'B':  // alpha_r short: (alpha_{r-1}, alpha_r^vee) = -2
      for (int i = 0; i + 1 < r; ++i) chain(i, i + 1);
      c.at(r - 2, r - 1) = -2;
      break;
    case 'C':  // alpha_r long: (alpha_r, alpha_{r-1}^vee) = -2
      for (int i = 0; i + 1 < r; ++i) chain(i, i + 1);
      c.at(r - 1, r - 2) = -2;
      break;
    case 'D':
      for (int i = 0; i + 2 < r; ++i) chain(i, i + 1);
      chain(r - 3, r - 1);
      break;
    case 'E':
      // Bourbaki: node 2 attaches to node 4; chain 1-3-4-5-6(-7)(-8)
      chain(0, 2);
      chain(2, 3);
      chain(1, 3);
      chain(3, 4);
      chain(4, 5);
      if (r >= 7) chain(5, 6);
      if (r >= 8) chain(6, 7);
      break;
    case 'F':  // 1-2=>3-4, alpha_1, alpha_2 long
      chain(0, 1);
      chain(2, 3);
      c.at(1, 2) = -2;
      c.at(2, 1) = -1;
      break;
    case 'G':  // alpha_1 short
      c.at(0, 1) = -3;
      c.at(1, 0) = -1;
      break;
  }
  return c;
}

inline Int weyl_order(char type, int r) {
  Int f = 1;
  auto fact = [](int k) {
    Int x = 1;
    for (int i = 2; i <= k; ++i) x *= i;
    return x;
  };
  switch (type) {
    case 'A': return fact(r + 1);
    case 'B':
    case 'C':
      mpz_ui_pow_ui(f.get_mpz_t(), 2, r);
      return f * fact(r);
    case 'D':
      mpz_ui_pow_ui(f.get_mpz_t(), 2, r - 1);
      return f * fact(r);
    case 'E':
      if (r == 6) return Int(51840);
      if (r == 7) return Int(2903040);
      return Int(696729600);
    case 'F': return Int(1152);
    case 'G': return Int(12);
  }
  throw std::invalid_argument("weyl_order: bad type");
}

inline Int weyl_order(const RootDatum& rd) {
  Int w = 1;
  for (const auto& f : rd.factors) w *= weyl_order(f.type, f.rank);
  return w;
}

// ---------------------------------------------------------------------------
// Construction.

// Build a datum from a rational basis of the cocharacter lattice expressed in
// simply-connected (coroot basis) coordinates. Rows of `basis` are the
// lattice basis; it must sit between the coroot and coweight lattices.
inline RootDatum datum_from_cochar_basis(char type, int rank,
                                         const RatMatrix& basis,
                                         const std::string& label) {
  IntMatrix c = cartan_matrix(type, rank);
  RatMatrix binv = rat_inverse(basis);
  RootDatum rd;
  rd.n = rank;
  rd.factors = {SimpleFactor{type, rank}};
  rd.isogeny_label = label;
  rd.a1_flag = (type == 'A' && rank == 1);
  rd.simple_roots = IntMatrix(rank, rank);
  rd.simple_coroots = IntMatrix(rank, rank);
  // coroot e_j has new coordinates = row j of B^{-1}; root alpha_i transforms
  // contragrediently: alpha_i' = alpha_i . B^T = row i of C * B^T.
  RatMatrix roots = RatMatrix::from_int(c) *
                    [&] {
                      RatMatrix bt(basis.cols, basis.rows);
                      for (int i = 0; i < basis.rows; ++i)
                        for (int j = 0; j < basis.cols; ++j)
                          bt.at(j, i) = basis.at(i, j);
                      return bt;
                    }();
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < rank; ++j) {
      const Rat& rij = roots.at(i, j);
      const Rat& kij = binv.at(i, j);
      if (rij.get_den() != 1)
        throw std::invalid_argument("cocharacter lattice not inside coweights");
      if (kij.get_den() != 1)
        throw std::invalid_argument("cocharacter lattice does not contain coroots");
      rd.simple_roots.at(i, j) = rij.get_num();
      rd.simple_coroots.at(i, j) = kij.get_num();
    }
  // invariant: Cartan pairings reproduce C
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < rank; ++j)
      if (dot(rd.simple_root(i), rd.simple_coroot(j)) != c.at(i, j))
        throw std::logic_error("cartan pairing mismatch after base change");
  return rd;
}

// Coweight basis in sc coordinates: rows of (C^{-1})^T.
inline RatMatrix coweight_basis(char type, int rank) {
  RatMatrix cinv = rat_inverse(RatMatrix::from_int(cartan_matrix(type, rank)));
  RatMatrix b(rank, rank);
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < rank; ++j) b.at(i, j) = cinv.at(j, i);
  return b;
}

// All lattices between coroot and coweight, as subgroup generator lists of
// coweight/coroot. Deterministic order: sc first, ad last.
struct IsogenyLattice {
  std::string label;
  RatMatrix basis;  // rows, sc coordinates
};

inline std::vector<IsogenyLattice> enumerate_isogeny_lattices(char type, int rank);

inline RootDatum build_root_datum(char type, int rank,
                                  const std::string& isogeny) {
  if (!valid_type_rank(type, rank))
    throw std::invalid_argument(std::string("invalid type/rank: ") + type +
                                std::to_string(rank));
  if (isogeny == "sc")
    return datum_from_cochar_basis(type, rank, RatMatrix::identity(rank), "sc");
  if (isogeny == "ad")
    return datum_from_cochar_basis(type, rank, coweight_basis(type, rank), "ad");
  if (isogeny == "so") {
    if (type == 'B')  // SO(2r+1) is the adjoint form
      return datum_from_cochar_basis(type, rank, coweight_basis(type, rank), "ad");
    if (type == 'D') {
      // cochar_SO(2r): index-2 overlattice of the coroots generated by the
      // coweight dual to the vector representation; in sc coordinates this is
      // the lattice generated by Z^r and omega-check_1 = first column of C^{-1}
      RatMatrix cinv =
          rat_inverse(RatMatrix::from_int(cartan_matrix(type, rank)));
      // fundamental coweight 1 in sc coords: solves (alpha_j, x) = delta_1j,
      // i.e. C x = e_1 ... x = column 1 of C^{-1}
      std::vector<Rat> w(rank);
      for (int j = 0; j < rank; ++j) w[j] = cinv.at(j, 0);
      // basis = HNF of Z^r + Z w, assembled over a common denominator
      Int den = 1;
      for (auto& q : w) den = lcm(den, Int(q.get_den()));
      IntMatrix gens(rank + 1, rank);
      for (int i = 0; i < rank; ++i) gens.at(i, i) = den;
      for (int j = 0; j < rank; ++j)
        gens.at(rank, j) = Int(w[j].get_num()) * (den / Int(w[j].get_den()));
      Lattice l = lattice_from_rows(rank, gens);
      RatMatrix b(rank, rank);
      for (int i = 0; i < rank; ++i)
        for (int j = 0; j < rank; ++j)
          b.at(i, j) = Rat(l.basis.at(i, j)) / Rat(den);
      return datum_from_cochar_basis(type, rank, b, "so");
    }
    throw std::invalid_argument("isogeny 'so' only for types B and D");
  }
  if (isogeny.rfind("int", 0) == 0) {
    auto all = enumerate_isogeny_lattices(type, rank);
    int k = std::stoi(isogeny.substr(3));
    for (auto& il : all)
      if (il.label == isogeny)
        return datum_from_cochar_basis(type, rank, il.basis, il.label);
    throw std::invalid_argument("no such intermediate isogeny: " + isogeny +
                                " (have " + std::to_string(all.size()) +
                                " classes), k=" + std::to_string(k));
  }
  throw std::invalid_argument("unknown isogeny label: " + isogeny);
}

// Explicit cocharacter lattice from generators in simply connected (coroot
// basis) coordinates; the coroot lattice is always included.
inline RootDatum build_root_datum_explicit(
    char type, int rank, const std::vector<std::vector<Rat>>& generators) {
  Int den = 1;
  for (const auto& g : generators) {
    if (int(g.size()) != rank)
      throw std::invalid_argument("lattice generator has wrong length");
    for (const auto& q : g) den = lcm(den, Int(q.get_den()));
  }
  IntMatrix rows(rank + int(generators.size()), rank);
  for (int i = 0; i < rank; ++i) rows.at(i, i) = den;
  for (size_t k = 0; k < generators.size(); ++k)
    for (int j = 0; j < rank; ++j) {
      Rat q = generators[k][j] * Rat(den);
      rows.at(rank + int(k), j) = q.get_num();
    }
  Lattice l = lattice_from_rows(rank, rows);
  RatMatrix b(rank, rank);
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < rank; ++j) b.at(i, j) = Rat(l.basis.at(i, j)) / Rat(den);
  return datum_from_cochar_basis(type, rank, b, "explicit");
}

inline std::vector<IsogenyLattice> enumerate_isogeny_lattices(char type,
                                                              int rank) {
  // coweight/coroot is finite; enumerate its subgroups by closing small
  // generator sets (abelian of order <= 9 here, so <= 2 generators suffice).
  IntMatrix c = cartan_matrix(type, rank);
  Int den = abs(det(c));
  RatMatrix cw = coweight_basis(type, rank);
  // elements of coweight/coroot: vectors (den * coweight basis combos) mod den
  IntMatrix gens(rank, rank);
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < rank; ++j) {
      Rat q = cw.at(i, j) * Rat(den);
      if (q.get_den() != 1) throw std::logic_error("coweight denominators");
      gens.at(i, j) = q.get_num();
    }
  auto normal = [&](std::vector<Int> v) {
    for (auto& x : v) mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), den.get_mpz_t());
    return v;
  };
  std::set<std::vector<Int>> elems;
  std::vector<std::vector<Int>> frontier{std::vector<Int>(rank, 0)};
  elems.insert(frontier[0]);
  while (!frontier.empty()) {
    std::vector<std::vector<Int>> next;
    for (auto& e : frontier)
      for (int i = 0; i < rank; ++i) {
        auto s = e;
        for (int j = 0; j < rank; ++j) s[j] += gens.at(i, j);
        s = normal(s);
        if (elems.insert(s).second) next.push_back(s);
      }
    frontier = std::move(next);
  }
  std::vector<std::vector<Int>> all(elems.begin(), elems.end());
  auto closure = [&](std::vector<std::vector<Int>> g) {
    std::set<std::vector<Int>> sub;
    sub.insert(std::vector<Int>(rank, 0));
    std::vector<std::vector<Int>> fr{std::vector<Int>(rank, 0)};
    while (!fr.empty()) {
      std::vector<std::vector<Int>> nx;
      for (auto& e : fr)
        for (auto& x : g) {
          auto s = e;
          for (int j = 0; j < rank; ++j) s[j] += x[j];
          s = normal(s);
          if (sub.insert(s).second) nx.push_back(s);
        }
      fr = std::move(nx);
    }
    return sub;
  };
  std::set<std::set<std::vector<Int>>> subgroups;
  for (auto& x : all) subgroups.insert(closure({x}));
  for (auto& x : all)
    for (auto& y : all) subgroups.insert(closure({x, y}));
  // order subgroups deterministically by (order, elements)
  std::vector<std::set<std::vector<Int>>> ordered(subgroups.begin(),
                                                  subgroups.end());
  std::sort(ordered.begin(), ordered.end(),
            [](const auto& a, const auto& b) {
              if (a.size() != b.size()) return a.size() < b.size();
              return a < b;
            });
  std::vector<IsogenyLattice> out;
  int inter = 0;
  for (auto& sub : ordered) {
    // lattice = Z^r + (1/den) * sub-elements
    IntMatrix rows(rank + int(sub.size()), rank);
    int k = 0;
    for (int i = 0; i < rank; ++i) rows.at(k, i) = den, ++k;
    for (auto& e : sub) {
      for (int j = 0; j < rank; ++j) rows.at(k, j) = e[j];
      ++k;
    }
    Lattice l = lattice_from_rows(rank, rows);
    RatMatrix b(rank, rank);
    for (int i = 0; i < rank; ++i)
      for (int j = 0; j < rank; ++j) b.at(i, j) = Rat(l.basis.at(i, j)) / Rat(den);
    std::string label;
    if (sub.size() == 1)
      label = "sc";
    else if (sub.size() == elems.size())
      label = "ad";
    else
      label = "int" + std::to_string(inter++);
    out.push_back(IsogenyLattice{label, b});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Roots, reflections, orbits.

inline IntMatrix reflection_matrix(int n, const std::vector<Int>& root,
                                   const std::vector<Int>& coroot) {
  IntMatrix m = IntMatrix::identity(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m.at(i, j) -= coroot[i] * root[j];
  return m;
}

inline std::vector<RootPair> all_roots(const RootDatum& rd) {
  int l = rd.semisimple_rank();
  std::map<std::vector<Int>, RootPair> seen;
  std::vector<RootPair> frontier;
  // factor id per simple root index
  std::vector<int> fac(l);
  {
    int k = 0, f = 0;
    for (const auto& sf : rd.factors) {
      for (int i = 0; i < sf.rank; ++i) fac[k++] = f;
      ++f;
    }
  }
  for (int i = 0; i < l; ++i) {
    RootPair p{rd.simple_root(i), rd.simple_coroot(i), 0, false, fac[i]};
    if (seen.emplace(p.root, p).second) frontier.push_back(p);
  }
  while (!frontier.empty()) {
    std::vector<RootPair> next;
    for (const auto& p : frontier)
      for (int j = 0; j < l; ++j) {
        Int a = dot(p.root, rd.simple_coroot(j));
        Int b = dot(rd.simple_root(j), p.coroot);
        RootPair q = p;
        for (int t = 0; t < rd.n; ++t) {
          q.root[t] -= a * rd.simple_roots.at(j, t);
          q.coroot[t] -= b * rd.simple_coroots.at(j, t);
        }
        if (seen.emplace(q.root, q).second) next.push_back(q);
      }
    frontier = std::move(next);
  }
  std::vector<RootPair> out;
  for (auto& kv : seen) out.push_back(kv.second);
  // length classes per factor via the invariant form sum over coroots
  // Q(alpha) = sum_beta (alpha, beta-check)^2, constant on W-orbits
  std::map<std::pair<int, Int>, int> classes;
  std::map<int, std::set<Int>> values;
  for (auto& p : out) {
    Int q = 0;
    for (auto& b : out)
      if (b.factor == p.factor) {
        Int t = dot(p.root, b.coroot);
        q += t * t;
      }
    values[p.factor].insert(q);
    p.orbit = -1;
    classes[{p.factor, q}] = 0;
    p.is_long = false;
    // stash q in orbit temporarily via classes map later
  }
  // assign orbit ids (0 = short class, 1 = long class within the factor)
  for (auto& p : out) {
    Int q = 0;
    for (auto& b : out)
      if (b.factor == p.factor) {
        Int t = dot(p.root, b.coroot);
        q += t * t;
      }
    const auto& vs = values[p.factor];
    int id = 0;
    for (auto it = vs.begin(); it != vs.end(); ++it, ++id)
      if (*it == q) break;
    p.orbit = id;
    p.is_long = (vs.size() > 1 && q == *vs.rbegin());
  }
  return out;
}

inline bool is_root_of(const RootDatum& rd, const std::vector<Int>& root,
                       RootPair* found = nullptr) {
  for (const auto& p : all_roots(rd))
    if (p.root == root) {
      if (found) *found = p;
      return true;
    }
  return false;
}

// epsilon: positive generator of (alpha, Lambda) = gcd of the coordinates.
inline Int epsilon(const RootDatum& /*rd*/, const RootPair& p) {
  Int g = 0;
  for (const Int& x : p.root) g = gcd(g, x);
  if (g == 0) throw std::logic_error("zero root");
  return g;
}

// epsilon-check: the same invariant computed on the Langlands dual datum,
// which is the divisibility index of the coroot in Lambda.
inline Int epsilon_dual(const RootDatum& /*rd*/, const RootPair& p) {
  Int g = 0;
  for (const Int& x : p.coroot) g = gcd(g, x);
  if (g == 0) throw std::logic_error("zero coroot");
  return g;
}

// Checked variants: reject functionals that are not roots of the datum.
inline Int epsilon_checked(const RootDatum& rd, const std::vector<Int>& root) {
  RootPair p;
  if (!is_root_of(rd, root, &p))
    throw std::invalid_argument("not a root of the datum");
  return epsilon(rd, p);
}

inline Int epsilon_dual_checked(const RootDatum& rd,
                                const std::vector<Int>& root) {
  RootPair p;
  if (!is_root_of(rd, root, &p))
    throw std::invalid_argument("not a root of the datum");
  return epsilon_dual(rd, p);
}

// {x : (alpha, x) in eps_alpha Z for every root}/Lambda: the closed form of
// the connected-level section torsion, computed from the datum alone.
inline FgAbGroup connected_sections_closed_form(const RootDatum& rd) {
  auto roots = all_roots(rd);
  if (roots.empty()) return fg_free(rd.n);
  IntMatrix x(int(roots.size()), rd.n);
  for (size_t i = 0; i < roots.size(); ++i) {
    Int e = epsilon(rd, roots[i]);
    for (int j = 0; j < rd.n; ++j) {
      if (roots[i].root[j] % e != 0)
        throw std::logic_error("root coordinate not divisible by eps");
      x.at(int(i), j) = roots[i].root[j] / e;
    }
  }
  auto s = snf(x);
  FgAbGroup g;
  int constrained = 0;
  for (const Int& dI : s.diag) {
    if (dI == 0) continue;
    ++constrained;
    if (dI >= 2) g.invariant_factors.push_back(dI);
  }
  g.rank = rd.n - constrained;
  std::sort(g.invariant_factors.begin(), g.invariant_factors.end());
  return g;
}

inline IntMatrix reflection(const RootDatum& rd, const RootPair& p) {
  return reflection_matrix(rd.n, p.root, p.coroot);
}

inline IntMatrix reflection_checked(const RootDatum& rd,
                                    const std::vector<Int>& root) {
  RootPair p;
  if (!is_root_of(rd, root, &p))
    throw std::invalid_argument("not a root of the datum");
  return reflection(rd, p);
}

// Compile a Weyl word (1-based simple reflection indices, applied right to
// left to vectors, so the product reads left to right) into a matrix.
inline IntMatrix weyl_word_matrix(const RootDatum& rd,
                                  const std::vector<int>& word) {
  IntMatrix m = IntMatrix::identity(rd.n);
  for (int idx : word) {
    if (idx < 1 || idx > rd.semisimple_rank())
      throw std::invalid_argument("weyl word index out of range");
    RootPair p{rd.simple_root(idx - 1), rd.simple_coroot(idx - 1), 0, false, 0};
    m = m * reflection(rd, p);
  }
  return m;
}

struct OrbitCapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::vector<std::vector<Int>> weyl_orbit(const RootDatum& rd,
                                                const std::vector<Int>& v,
                                                size_t cap = 2000000) {
  std::set<std::vector<Int>> seen{v};
  std::vector<std::vector<Int>> frontier{v};
  int l = rd.semisimple_rank();
  while (!frontier.empty()) {
    std::vector<std::vector<Int>> next;
    for (auto& x : frontier)
      for (int j = 0; j < l; ++j) {
        Int a = dot(rd.simple_root(j), x);
        auto y = x;
        for (int t = 0; t < rd.n; ++t) y[t] -= a * rd.simple_coroots.at(j, t);
        if (seen.size() >= cap && !seen.count(y))
          throw OrbitCapExceeded("weyl orbit cap exceeded");
        if (seen.insert(y).second) next.push_back(y);
      }
    frontier = std::move(next);
  }
  return std::vector<std::vector<Int>>(seen.begin(), seen.end());
}

// (|W| / |orbit|) * sum over the orbit; equals the full sum over W of w(v).
inline std::vector<Int> full_weyl_sum(const RootDatum& rd,
                                      const std::vector<Int>& v,
                                      size_t cap = 2000000) {
  auto orbit = weyl_orbit(rd, v, cap);
  std::vector<Int> s(rd.n, 0);
  for (auto& x : orbit)
    for (int t = 0; t < rd.n; ++t) s[t] += x[t];
  Int w = weyl_order(rd);
  Int m = w / Int(orbit.size());
  if (m * Int(orbit.size()) != w)
    throw std::logic_error("orbit size does not divide |W|");
  for (auto& x : s) x *= m;
  return s;
}

// ---------------------------------------------------------------------------
// pi1, center, duality.

inline FgAbGroup pi1(const RootDatum& rd) {
  // Lambda / coroot lattice: cokernel of the matrix whose columns are the
  // simple coroots
  IntMatrix m(rd.n, rd.semisimple_rank());
  for (int j = 0; j < rd.semisimple_rank(); ++j)
    for (int i = 0; i < rd.n; ++i) m.at(i, j) = rd.simple_coroots.at(j, i);
  return cokernel(m);
}

// Center at cocharacter level: {v in Lambda (x) Q : (alpha, v) in Z}/Lambda.
// Computed directly from root integrality (independent of the duality route).
inline FgAbGroup center(const RootDatum& rd) {
  int l = rd.semisimple_rank();
  if (l == 0) return fg_free(rd.n);
  SnfResult s = snf(rd.simple_roots);
  FgAbGroup g;
  g.rank = rd.n - int(s.diag.size());
  for (const Int& d : s.diag) {
    if (d == 0)
      ++g.rank;
    else if (d >= 2)
      g.invariant_factors.push_back(d);
  }
  std::sort(g.invariant_factors.begin(), g.invariant_factors.end());
  return g;
}

inline RootDatum langlands_dual(const RootDatum& rd) {
  RootDatum d = rd;
  d.simple_roots = rd.simple_coroots;
  d.simple_coroots = rd.simple_roots;
  for (auto& f : d.factors) {
    if (f.type == 'B')
      f.type = 'C';
    else if (f.type == 'C')
      f.type = 'B';
  }
  // classify the dual lattice position
  {
    FgAbGroup p = pi1(d);
    FgAbGroup z = center(d);
    bool p_triv = p.is_trivial();
    bool z_triv = z.rank == 0 && z.invariant_factors.empty();
    if (p_triv && z_triv)
      d.isogeny_label = "sc";  // also ad; self-dual lattice chain
    else if (p_triv)
      d.isogeny_label = "sc";
    else if (z_triv)
      d.isogeny_label = "ad";
    else
      d.isogeny_label = "int";
  }
  return d;
}

// Product datum: simple factors plus a split torus, cocharacter lattice is
// the direct sum. Central quotients are taken by enlarging the lattice.
inline RootDatum product_datum(const std::vector<RootDatum>& parts,
                               int torus_rank) {
  RootDatum out;
  for (const auto& p : parts) {
    if (!p.is_semisimple())
      throw std::invalid_argument("product factors must be semisimple");
    out.factors.insert(out.factors.end(), p.factors.begin(), p.factors.end());
    out.a1_flag = out.a1_flag || p.a1_flag;
  }
  out.torus_rank = torus_rank;
  int l = 0, n = 0;
  for (const auto& p : parts) l += p.semisimple_rank(), n += p.n;
  out.n = n + torus_rank;
  out.simple_roots = IntMatrix(l, out.n);
  out.simple_coroots = IntMatrix(l, out.n);
  out.isogeny_label = "product";
  int ro = 0, co = 0;
  for (const auto& p : parts) {
    for (int i = 0; i < p.semisimple_rank(); ++i)
      for (int j = 0; j < p.n; ++j) {
        out.simple_roots.at(ro + i, co + j) = p.simple_roots.at(i, j);
        out.simple_coroots.at(ro + i, co + j) = p.simple_coroots.at(i, j);
      }
    ro += p.semisimple_rank();
    co += p.n;
  }
  return out;
}

// Quotient of a (product) datum by a finite central subgroup whose generators
// are given as rational cocharacters (center elements: (alpha, v) in Z for all
// roots, given modulo the lattice with denominators dividing their order).
inline RootDatum central_quotient(const RootDatum& rd,
                                  const std::vector<std::vector<Rat>>& kgens) {
  // centrality: (alpha_i, v) in Z for every generator
  for (const auto& v : kgens) {
    if (int(v.size()) != rd.n) throw std::invalid_argument("bad K generator");
    for (int i = 0; i < rd.semisimple_rank(); ++i) {
      Rat s = 0;
      for (int j = 0; j < rd.n; ++j) s += Rat(rd.simple_roots.at(i, j)) * v[j];
      if (s.get_den() != 1)
        throw std::invalid_argument("K generator not central");
    }
  }
  // new lattice = old + K lifts; change coordinates
  Int den = 1;
  for (const auto& v : kgens)
    for (const auto& q : v) den = lcm(den, Int(q.get_den()));
  IntMatrix rows(rd.n + int(kgens.size()), rd.n);
  for (int i = 0; i < rd.n; ++i) rows.at(i, i) = den;
  for (size_t k = 0; k < kgens.size(); ++k)
    for (int j = 0; j < rd.n; ++j) {
      Rat q = kgens[k][j] * Rat(den);
      rows.at(rd.n + int(k), j) = q.get_num();
    }
  Lattice l = lattice_from_rows(rd.n, rows);
  // B = l.basis / den ; transform as in datum_from_cochar_basis
  RatMatrix b(rd.n, rd.n);
  for (int i = 0; i < rd.n; ++i)
    for (int j = 0; j < rd.n; ++j) b.at(i, j) = Rat(l.basis.at(i, j)) / Rat(den);
  RatMatrix binv = rat_inverse(b);
  RootDatum out = rd;
  out.isogeny_label = "quotient";
  for (int i = 0; i < rd.semisimple_rank(); ++i) {
    std::vector<Rat> r(rd.n), cvec(rd.n);
    for (int j = 0; j < rd.n; ++j) {
      Rat acc = 0;
      for (int t = 0; t < rd.n; ++t)
        acc += Rat(rd.simple_roots.at(i, t)) * b.at(j, t);
      r[j] = acc;
    }
    for (int j = 0; j < rd.n; ++j) {
      Rat acc = 0;
      for (int t = 0; t < rd.n; ++t)
        acc += Rat(rd.simple_coroots.at(i, t)) * binv.at(t, j);
      cvec[j] = acc;
    }
    for (int j = 0; j < rd.n; ++j) {
      if (r[j].get_den() != 1 || cvec[j].get_den() != 1)
        throw std::logic_error("central quotient produced non-integral datum");
      out.simple_roots.at(i, j) = r[j].get_num();
      out.simple_coroots.at(i, j) = cvec[j].get_num();
    }
  }
  return out;
}

// Fundamental coweights as rational vectors: (alpha_j, w_i) = delta_ij,
// orthogonal to nothing else (semisimple part only).
inline std::vector<std::vector<Rat>> fundamental_coweights(const RootDatum& rd) {
  int l = rd.semisimple_rank();
  RatMatrix r = RatMatrix::from_int(rd.simple_roots);
  std::vector<std::vector<Rat>> out;
  for (int i = 0; i < l; ++i) {
    std::vector<Rat> b(l);
    b[i] = 1;
    auto x = rat_solve(r, b);
    if (!x) throw std::logic_error("no fundamental coweight");
    out.push_back(*x);
  }
  return out;
}

// Group spec strings: "B3:sc", "C2:ad", "D4:int1", "A2" (defaults to sc).
inline RootDatum parse_group_spec(const std::string& s) {
  auto colon = s.find(':');
  std::string head = colon == std::string::npos ? s : s.substr(0, colon);
  std::string iso = colon == std::string::npos ? "sc" : s.substr(colon + 1);
  if (head.size() < 2) throw std::invalid_argument("bad group spec: " + s);
  char type = head[0];
  int rank = std::stoi(head.substr(1));
  return build_root_datum(type, rank, iso);
}

}  // namespace camlat
