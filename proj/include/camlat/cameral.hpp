#pragma once

// Combinatorial cameral covers: genus, handle monodromies, branch
// reflections. Builds the W-invariant local system on the punctured curve
// and its dual, validates the surface relation, monodromy surjectivity and
// branch genericity, and generates seeded random covers.

#include "camlat/rootdata.hpp"

#include <json.hpp>

#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace camlat {

struct CoverDatum {
  RootDatum datum;
  int genus = 0;
  std::vector<IntMatrix> handles;  // 2g matrices on Lambda
  std::vector<RootPair> branches;  // branch i has monodromy rho_{alpha_i}
  // original words when the cover came from a file (kept for reports)
  std::vector<std::vector<int>> handle_words;

  int b() const { return int(branches.size()); }
};

// Relator letters: positive index k means generator x_k (0-based over the
// 2g+b generators: handles first, then branch loops).
struct Letter {
  int idx = 0;
  bool inv = false;
};

inline std::vector<Letter> relator_word(int g, int b) {
  std::vector<Letter> w;
  for (int j = 0; j < g; ++j) {
    w.push_back({j, false});
    w.push_back({g + j, false});
    w.push_back({j, true});
    w.push_back({g + j, true});
  }
  for (int i = 0; i < b; ++i) w.push_back({2 * g + i, false});
  return w;
}

struct LocalSystem {
  int n = 0;
  int genus = 0;
  std::vector<IntMatrix> gen;      // 2g+b monodromies (handles then branches)
  std::vector<IntMatrix> gen_inv;  // cached inverses
  bool dualized = false;
  // per-branch data in this system's coefficient space
  std::vector<std::vector<Int>> branch_root;    // functional
  std::vector<std::vector<Int>> branch_coroot;  // vector; (root,coroot) = 2
  std::vector<Int> eps;                         // gcd of branch_root coords
  std::vector<Int> eps_dual;                    // gcd of branch_coroot coords

  int b() const { return int(branch_root.size()); }
  int m() const { return int(gen.size()); }
  std::vector<Letter> relator() const { return relator_word(genus, b()); }
};

inline IntMatrix contragredient(const IntMatrix& m) {
  return unimodular_inverse(m).transposed();
}

// The surface relation as a matrix product, left to right.
inline IntMatrix relation_product(const CoverDatum& cd) {
  int g = cd.genus;
  IntMatrix p = IntMatrix::identity(cd.datum.n);
  for (int j = 0; j < g; ++j) {
    const IntMatrix& a = cd.handles[j];
    const IntMatrix& b = cd.handles[g + j];
    p = p * a * b * unimodular_inverse(a) * unimodular_inverse(b);
  }
  for (const auto& br : cd.branches) p = p * reflection(cd.datum, br);
  return p;
}

struct CoverReport {
  bool relation_ok = false;
  bool surjective = false;
  bool generic = false;
  bool surjectivity_checked = true;  // false when |W| exceeds the cap
  Int subgroup_order = 0;
  Int weyl_group_order = 0;
  std::vector<Int> orbit_branch_counts;  // per length class of each factor
  std::vector<std::string> failures;

  bool valid() const {
    return relation_ok && surjective && generic && surjectivity_checked;
  }
};

inline std::string matrix_key(const IntMatrix& m) {
  std::ostringstream os;
  for (const Int& x : m.a) os << x.get_str() << ',';
  return os.str();
}

// Order of the subgroup generated by `gens`, by closure; stops at cap.
inline Int generated_group_order(const std::vector<IntMatrix>& gens, int n,
                                 const Int& cap, bool* capped) {
  *capped = false;
  std::set<std::string> seen;
  std::vector<IntMatrix> frontier{IntMatrix::identity(n)};
  seen.insert(matrix_key(frontier[0]));
  while (!frontier.empty()) {
    std::vector<IntMatrix> next;
    for (const auto& x : frontier)
      for (const auto& g : gens) {
        IntMatrix y = x * g;
        if (seen.insert(matrix_key(y)).second) {
          next.push_back(y);
          if (Int(seen.size()) > cap) {
            *capped = true;
            return Int(seen.size());
          }
        }
      }
    frontier = std::move(next);
  }
  return Int(seen.size());
}

inline CoverReport validate_cover(const CoverDatum& cd,
                                  const Int& group_cap = Int(2000000)) {
  CoverReport rep;
  const RootDatum& rd = cd.datum;
  rep.weyl_group_order = weyl_order(rd);
  if (int(cd.handles.size()) != 2 * cd.genus) {
    rep.failures.push_back("handle count is not 2*genus");
    return rep;
  }
  if (cd.genus < 1) {
    rep.failures.push_back("genus must be >= 1");
    return rep;
  }
  // every branch must carry an actual root of the datum
  auto roots = all_roots(rd);
  int nclasses = 0;
  for (const auto& p : roots)
    nclasses = std::max(nclasses, (p.factor + 1) * 100 + p.orbit);  // unused
  std::map<std::pair<int, int>, Int> class_counts;
  for (const auto& p : roots) class_counts[{p.factor, p.orbit}] = 0;
  for (const auto& br : cd.branches) {
    bool found = false;
    for (const auto& p : roots)
      if (p.root == br.root && p.coroot == br.coroot) {
        found = true;
        class_counts[{p.factor, p.orbit}] += 1;
        break;
      }
    if (!found) {
      rep.failures.push_back("branch entry is not a root of the datum");
      return rep;
    }
  }
  if (cd.b() % 2 != 0)
    rep.failures.push_back(
        "odd number of branches cannot satisfy the relation (reflections have "
        "determinant -1)");
  IntMatrix p = relation_product(cd);
  rep.relation_ok = p.is_identity();
  if (!rep.relation_ok) rep.failures.push_back("surface relation fails");
  // monodromy surjectivity onto W
  std::vector<IntMatrix> gens = cd.handles;
  for (const auto& br : cd.branches) gens.push_back(reflection(rd, br));
  if (rep.weyl_group_order > group_cap) {
    rep.surjectivity_checked = false;
    rep.failures.push_back("Weyl group too large for closure check (cap)");
  } else {
    bool capped = false;
    rep.subgroup_order = generated_group_order(gens, rd.n, group_cap, &capped);
    rep.surjective = !capped && rep.subgroup_order == rep.weyl_group_order;
    if (!rep.surjective)
      rep.failures.push_back("monodromy subgroup is a proper subgroup of W");
  }
  // genericity: every length class of every factor appears among branches
  rep.generic = true;
  for (auto& kv : class_counts) {
    rep.orbit_branch_counts.push_back(kv.second);
    if (kv.second == 0) rep.generic = false;
  }
  if (!rep.generic)
    rep.failures.push_back("some root length class has no branch point");
  return rep;
}

struct InvalidCover : std::runtime_error {
  CoverReport report;
  InvalidCover(const std::string& msg, CoverReport r)
      : std::runtime_error(msg), report(std::move(r)) {}
};

inline LocalSystem local_system(const CoverDatum& cd, bool require_valid = true) {
  if (require_valid) {
    CoverReport rep = validate_cover(cd);
    if (!rep.valid()) {
      std::string msg = "invalid cover:";
      for (auto& f : rep.failures) msg += " " + f + ";";
      throw InvalidCover(msg, rep);
    }
  }
  LocalSystem ls;
  ls.n = cd.datum.n;
  ls.genus = cd.genus;
  ls.gen = cd.handles;
  for (const auto& br : cd.branches) ls.gen.push_back(reflection(cd.datum, br));
  for (const auto& m : ls.gen) ls.gen_inv.push_back(unimodular_inverse(m));
  for (const auto& br : cd.branches) {
    ls.branch_root.push_back(br.root);
    ls.branch_coroot.push_back(br.coroot);
    ls.eps.push_back(epsilon(cd.datum, br));
    ls.eps_dual.push_back(epsilon_dual(cd.datum, br));
  }
  return ls;
}

// The dual system: contragredient matrices, branch root/coroot roles swap.
inline LocalSystem dual_local_system(const LocalSystem& ls) {
  LocalSystem d;
  d.n = ls.n;
  d.genus = ls.genus;
  d.dualized = !ls.dualized;
  for (const auto& m : ls.gen) d.gen.push_back(contragredient(m));
  for (const auto& m : d.gen) d.gen_inv.push_back(unimodular_inverse(m));
  d.branch_root = ls.branch_coroot;
  d.branch_coroot = ls.branch_root;
  d.eps = ls.eps_dual;
  d.eps_dual = ls.eps;
  return d;
}

inline LocalSystem dual_local_system(const CoverDatum& cd,
                                     bool require_valid = true) {
  return dual_local_system(local_system(cd, require_valid));
}

// ---------------------------------------------------------------------------
// Seeded random covers.
//
// Generation order (frozen; reports depend on it):
//   attempt 0: the canonical cover - identity handles; branch list = simple
//     roots ordered short-class-first (stable by index), each used twice in
//     adjacent slots, cycling until b slots are filled.
//   attempt t>=1: handle words of length rng()%4 with letters rng()%l+1;
//     branch slots filled with adjacent equal pairs of random roots except
//     for a final segment that spells a shortest reflection factorization of
//     the inverse handle-commutator defect; then validated.
// Deterministic in (inputs, seed): a single mt19937_64 stream drives all
// attempts.

struct InfeasibleCover : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::vector<RootPair> sorted_short_first_simples(const RootDatum& rd) {
  auto roots = all_roots(rd);
  std::vector<RootPair> simples;
  for (int i = 0; i < rd.semisimple_rank(); ++i)
    for (const auto& p : roots)
      if (p.root == rd.simple_root(i)) {
        simples.push_back(p);
        break;
      }
  std::stable_sort(simples.begin(), simples.end(),
                   [](const RootPair& a, const RootPair& b) {
                     if (a.factor != b.factor) return a.factor < b.factor;
                     return !a.is_long && b.is_long;
                   });
  return simples;
}

// Shortest factorization of target into reflections, by BFS over W.
// Returns root indices into `roots`; empty when target is the identity.
inline std::optional<std::vector<int>> reflection_factorization(
    const RootDatum& rd, const std::vector<RootPair>& roots,
    const IntMatrix& target, const Int& cap = Int(2000000)) {
  if (target.is_identity()) return std::vector<int>{};
  std::map<std::string, std::pair<std::string, int>> parent;  // key->(prev,root)
  std::vector<IntMatrix> frontier{IntMatrix::identity(rd.n)};
  std::string id_key = matrix_key(frontier[0]);
  std::string target_key = matrix_key(target);
  parent[id_key] = {"", -1};
  Int count = 1;
  while (!frontier.empty()) {
    std::vector<IntMatrix> next;
    for (const auto& x : frontier) {
      std::string xk = matrix_key(x);
      for (int ri = 0; ri < int(roots.size()); ++ri) {
        IntMatrix y = x * reflection(rd, roots[ri]);
        std::string yk = matrix_key(y);
        if (parent.count(yk)) continue;
        parent[yk] = {xk, ri};
        if (yk == target_key) {
          // walk back: reflections multiply left to right
          std::vector<int> seq;
          std::string cur = yk;
          while (cur != id_key) {
            seq.push_back(parent[cur].second);
            cur = parent[cur].first;
          }
          std::reverse(seq.begin(), seq.end());
          return seq;
        }
        next.push_back(y);
        count += 1;
        if (count > cap) return std::nullopt;
      }
    }
    frontier = std::move(next);
  }
  return std::nullopt;
}

inline CoverDatum random_cover(const RootDatum& rd, int g, int b,
                               unsigned long long seed, int retry_budget = 64) {
  if (g < 1) throw InfeasibleCover("genus must be >= 1");
  if (b < 0) throw InfeasibleCover("negative branch count");
  if (b % 2 != 0)
    throw InfeasibleCover(
        "odd branch count is infeasible: reflections have determinant -1");
  auto roots = all_roots(rd);
  auto simples = sorted_short_first_simples(rd);
  std::mt19937_64 rng(seed);
  auto word_matrix = [&](const std::vector<int>& w) {
    return weyl_word_matrix(rd, w);
  };
  for (int attempt = 0; attempt <= retry_budget; ++attempt) {
    CoverDatum cd;
    cd.datum = rd;
    cd.genus = g;
    if (attempt == 0) {
      cd.handles.assign(2 * g, IntMatrix::identity(rd.n));
      cd.handle_words.assign(2 * g, {});
      for (int k = 0; 2 * k < b; ++k) {
        const RootPair& p = simples[k % simples.size()];
        cd.branches.push_back(p);
        cd.branches.push_back(p);
      }
    } else {
      int l = rd.semisimple_rank();
      for (int j = 0; j < 2 * g; ++j) {
        int len = int(rng() % 4);
        std::vector<int> w;
        for (int t = 0; t < len; ++t) w.push_back(int(rng() % l) + 1);
        cd.handle_words.push_back(w);
        cd.handles.push_back(word_matrix(w));
      }
      IntMatrix h = IntMatrix::identity(rd.n);
      for (int j = 0; j < g; ++j) {
        const IntMatrix& a = cd.handles[j];
        const IntMatrix& bb = cd.handles[g + j];
        h = h * a * bb * unimodular_inverse(a) * unimodular_inverse(bb);
      }
      auto fact = reflection_factorization(rd, roots, unimodular_inverse(h));
      if (!fact || int(fact->size()) > b) continue;  // next attempt
      int pairs = (b - int(fact->size())) / 2;
      if ((b - int(fact->size())) % 2 != 0) continue;  // parity mismatch
      for (int k = 0; k < pairs; ++k) {
        // cycle length classes first so genericity tends to hold
        const RootPair* pick = nullptr;
        if (k < int(simples.size())) {
          pick = &simples[k % simples.size()];
        } else {
          pick = &roots[rng() % roots.size()];
        }
        cd.branches.push_back(*pick);
        cd.branches.push_back(*pick);
      }
      for (int ri : *fact) cd.branches.push_back(roots[ri]);
    }
    CoverReport rep = validate_cover(cd);
    // unramified covers cannot be generic; the relation is all that is asked
    if (b == 0 ? rep.relation_ok : rep.valid()) return cd;
  }
  throw InfeasibleCover("no valid cover found within the retry budget");
}

// ---------------------------------------------------------------------------
// Cover files (JSON).
//
// { "group": {"type": "B", "rank": 2, "isogeny": "sc"},
//   "genus": 2,
//   "handles": [ [], [], [], [] ],
//   "branches": [ {"root": [0,1]}, {"root": [0,1]},
//                 {"root": [1,0]}, {"root": [1,0]} ] }
// Branch roots are coefficient vectors over the simple roots; a branch may
// instead give {"conjugate": {"base": [...], "word": [...]}} meaning w(alpha)
// for the Weyl word w (1-based simple reflection indices, leftmost applied
// last to vectors).

using json = nlohmann::ordered_json;

inline std::vector<Int> root_from_coeffs(const RootDatum& rd,
                                         const std::vector<long>& coeffs) {
  if (int(coeffs.size()) != rd.semisimple_rank())
    throw std::invalid_argument("root coefficient length != semisimple rank");
  std::vector<Int> r(rd.n, 0);
  for (int i = 0; i < rd.semisimple_rank(); ++i)
    for (int j = 0; j < rd.n; ++j)
      r[j] += Int(long(coeffs[i])) * rd.simple_roots.at(i, j);
  return r;
}

inline Rat parse_rational(const json& v) {
  if (v.is_number_integer()) return Rat(long(v.get<long long>()));
  std::string s = v.get<std::string>();
  auto slash = s.find('/');
  if (slash == std::string::npos) return Rat(Int(s));
  return Rat(Int(s.substr(0, slash))) / Rat(Int(s.substr(slash + 1)));
}

inline CoverDatum cover_from_json(const json& j) {
  CoverDatum cd;
  const auto& grp = j.at("group");
  std::string type = grp.at("type").get<std::string>();
  int rank = grp.at("rank").get<int>();
  std::string iso = grp.value("isogeny", "sc");
  if (iso == "explicit" || grp.contains("lattice")) {
    // generators of the cocharacter lattice, rows of rationals in coroot
    // coordinates; "1/2" strings or plain integers
    std::vector<std::vector<Rat>> gens;
    for (const auto& row : grp.at("lattice")) {
      std::vector<Rat> g;
      for (const auto& v : row) g.push_back(parse_rational(v));
      gens.push_back(g);
    }
    cd.datum = build_root_datum_explicit(type.at(0), rank, gens);
  } else {
    cd.datum = build_root_datum(type.at(0), rank, iso);
  }
  cd.genus = j.at("genus").get<int>();
  for (const auto& hw : j.at("handles")) {
    std::vector<int> w = hw.get<std::vector<int>>();
    cd.handle_words.push_back(w);
    cd.handles.push_back(weyl_word_matrix(cd.datum, w));
  }
  auto roots = all_roots(cd.datum);
  auto lookup = [&](const std::vector<Int>& rv) -> RootPair {
    for (const auto& p : roots)
      if (p.root == rv) return p;
    throw std::invalid_argument("branch vector is not a root");
  };
  for (const auto& br : j.at("branches")) {
    std::vector<Int> rv;
    if (br.contains("root")) {
      rv = root_from_coeffs(cd.datum, br.at("root").get<std::vector<long>>());
    } else if (br.contains("conjugate")) {
      const auto& c = br.at("conjugate");
      auto base =
          root_from_coeffs(cd.datum, c.at("base").get<std::vector<long>>());
      auto word = c.at("word").get<std::vector<int>>();
      IntMatrix w = weyl_word_matrix(cd.datum, word);
      // action on functionals: alpha . w^{-1}
      IntMatrix winv = unimodular_inverse(w);
      std::vector<Int> conj(cd.datum.n, 0);
      for (int jcol = 0; jcol < cd.datum.n; ++jcol)
        for (int t = 0; t < cd.datum.n; ++t)
          conj[jcol] += base[t] * winv.at(t, jcol);
      rv = conj;
    } else {
      throw std::invalid_argument("branch needs 'root' or 'conjugate'");
    }
    cd.branches.push_back(lookup(rv));
  }
  return cd;
}

inline json cover_to_json(const CoverDatum& cd) {
  json j;
  const auto& f = cd.datum.factors.at(0);
  j["group"] = {{"type", std::string(1, f.type)},
                {"rank", f.rank},
                {"isogeny", cd.datum.isogeny_label}};
  j["genus"] = cd.genus;
  json hw = json::array();
  for (size_t i = 0; i < cd.handles.size(); ++i) {
    if (i < cd.handle_words.size())
      hw.push_back(cd.handle_words[i]);
    else
      hw.push_back(json::array());
  }
  j["handles"] = hw;
  json br = json::array();
  // express each branch root in simple-root coefficients
  RatMatrix rt(cd.datum.semisimple_rank(), cd.datum.n);
  for (int i = 0; i < cd.datum.semisimple_rank(); ++i)
    for (int t = 0; t < cd.datum.n; ++t)
      rt.at(i, t) = Rat(cd.datum.simple_roots.at(i, t));
  // solve coeffs^T * simple_roots = root  (transpose solve)
  RatMatrix rtt(cd.datum.n, cd.datum.semisimple_rank());
  for (int i = 0; i < rt.rows; ++i)
    for (int t = 0; t < rt.cols; ++t) rtt.at(t, i) = rt.at(i, t);
  for (const auto& p : cd.branches) {
    auto sol = rat_solve(rtt, to_rat(p.root));
    if (!sol) throw std::logic_error("branch root outside root lattice span");
    std::vector<long> coeffs;
    for (const auto& q : *sol) {
      if (q.get_den() != 1) throw std::logic_error("non-integer root coeff");
      coeffs.push_back(q.get_num().get_si());
    }
    br.push_back({{"root", coeffs}});
  }
  j["branches"] = br;
  return j;
}

}  // namespace camlat
