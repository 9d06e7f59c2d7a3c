#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "camlat/rootdata.hpp"

using namespace camlat;

TEST_CASE("cartan pairing axiom holds for every datum") {
  for (std::string spec : {"A2:sc", "A2:ad", "B2:sc", "B2:ad", "C3:sc",
                           "C3:ad", "D4:sc", "D4:ad", "G2:sc", "F4:sc",
                           "E6:sc", "E6:ad"}) {
    RootDatum rd = parse_group_spec(spec);
    for (int i = 0; i < rd.semisimple_rank(); ++i)
      CHECK(dot(rd.simple_root(i), rd.simple_coroot(i)) == 2);
  }
}

TEST_CASE("type C sc lattices match the classical description") {
  // Sp(r): root lattice has generators e1-e2, ..., 2er; weight lattice has
  // generators e1..er. At cocharacter level: (alpha, Lambda) = 2Z exactly for
  // the long roots.
  RootDatum sp3 = build_root_datum('C', 3, "sc");
  auto roots = all_roots(sp3);
  CHECK(int(roots.size()) == 18);
  int n_eps2 = 0;
  for (const auto& p : roots) {
    Int e = epsilon(sp3, p);
    if (p.is_long) {
      CHECK(e == 2);
      ++n_eps2;
    } else {
      CHECK(e == 1);
    }
  }
  CHECK(n_eps2 == 6);  // +-2e_i
}

TEST_CASE("root counts by type") {
  CHECK(all_roots(build_root_datum('A', 2, "sc")).size() == 6);
  auto b2 = all_roots(build_root_datum('B', 2, "sc"));
  CHECK(b2.size() == 8);
  int nlong = 0, nshort = 0;
  for (auto& p : b2) (p.is_long ? nlong : nshort)++;
  CHECK(nlong == 4);
  CHECK(nshort == 4);
  CHECK(all_roots(build_root_datum('G', 2, "sc")).size() == 12);
  CHECK(all_roots(build_root_datum('F', 4, "sc")).size() == 48);
  CHECK(all_roots(build_root_datum('D', 4, "sc")).size() == 24);
}

TEST_CASE("A2 adjoint vs simply connected index") {
  RootDatum ad = build_root_datum('A', 2, "ad");
  // coroot lattice inside the adjoint cocharacter lattice has index 3
  IntMatrix m(2, 2);
  for (int j = 0; j < 2; ++j)
    for (int i = 0; i < 2; ++i) m.at(i, j) = ad.simple_coroots.at(j, i);
  auto q = cokernel(m);
  CHECK(q.rank == 0);
  CHECK(q.order() == 3);
}

TEST_CASE("epsilon tables") {
  // epsilon = 2 only for Sp(r) long roots; dual statement for SO(2r+1)
  for (std::string spec : {"B3:sc", "B3:ad", "C3:sc", "C3:ad"}) {
    RootDatum rd = parse_group_spec(spec);
    bool is_sp = (spec == "C3:sc");
    bool is_so = (spec == "B3:ad");
    for (const auto& p : all_roots(rd)) {
      Int e = epsilon(rd, p);
      Int ed = epsilon_dual(rd, p);
      CHECK(e * ed <= 2);  // product divides 2
      CHECK((e == 2) == (is_sp && p.is_long));
      CHECK((ed == 2) == (is_so && !p.is_long));
    }
  }
  // epsilon computed via the dual datum agrees with epsilon_dual
  RootDatum so5 = build_root_datum('B', 2, "ad");
  RootDatum dual = langlands_dual(so5);
  auto roots = all_roots(so5);
  auto droots = all_roots(dual);
  for (const auto& p : roots) {
    RootPair q;
    bool found = false;
    for (const auto& d : droots)
      if (d.root == p.coroot) {
        q = d;
        found = true;
        break;
      }
    REQUIRE(found);
    CHECK(epsilon(dual, q) == epsilon_dual(so5, p));
  }
}

TEST_CASE("F4 epsilon product divides 2") {
  RootDatum f4 = build_root_datum('F', 4, "sc");
  for (const auto& p : all_roots(f4))
    CHECK((epsilon(f4, p) * epsilon_dual(f4, p)) <= 2);
}

TEST_CASE("langlands dual basics") {
  RootDatum b3 = build_root_datum('B', 3, "sc");
  RootDatum d = langlands_dual(b3);
  CHECK(d.factors[0].type == 'C');
  CHECK(d.isogeny_label == "ad");
  CHECK(langlands_dual(d) == b3);

  // involution across a sample of data
  for (std::string spec :
       {"A3:sc", "A3:ad", "C2:sc", "D4:ad", "G2:sc", "F4:sc"}) {
    RootDatum rd = parse_group_spec(spec);
    CHECK(langlands_dual(langlands_dual(rd)) == rd);
  }
}

TEST_CASE("pi1 and center") {
  CHECK(pi1(build_root_datum('A', 2, "sc")).is_trivial());
  CHECK(pi1(build_root_datum('E', 8, "sc")).is_trivial());

  auto so5 = build_root_datum('B', 2, "ad");
  CHECK(pi1(so5).invariant_factors == std::vector<Int>{2});
  CHECK(center(so5).is_trivial());

  auto sp2 = build_root_datum('C', 2, "sc");
  CHECK(center(sp2).invariant_factors == std::vector<Int>{2});
  CHECK(pi1(sp2).is_trivial());

  auto pgl3 = build_root_datum('A', 2, "ad");
  CHECK(pi1(pgl3).invariant_factors == std::vector<Int>{3});

  // pi1(dual) = center^dual as groups, both computed independently
  for (std::string spec : {"A2:sc", "A2:ad", "B3:sc", "B3:ad", "C3:sc",
                           "D4:sc", "D4:ad", "G2:sc", "E6:sc", "E6:ad"}) {
    RootDatum rd = parse_group_spec(spec);
    CHECK(iso_test(pi1(langlands_dual(rd)), pontryagin_dual(center(rd))));
  }
}

TEST_CASE("reflections") {
  RootDatum b2 = build_root_datum('B', 2, "sc");
  auto roots = all_roots(b2);
  for (const auto& p : roots) {
    IntMatrix r = reflection(b2, p);
    CHECK((r * r).is_identity());
    auto neg = mul(r, p.coroot);
    for (int t = 0; t < b2.n; ++t) CHECK(neg[t] == -p.coroot[t]);
    // fixes vectors on the reflection hyperplane
    for (const auto& q : roots) {
      if (dot(p.root, q.coroot) == 0) {
        CHECK(mul(r, q.coroot) == q.coroot);
        break;
      }
    }
  }
  CHECK_THROWS(reflection_checked(b2, std::vector<Int>{Int(7), Int(7)}));
}

TEST_CASE("weyl orbits and full sums") {
  RootDatum b2 = build_root_datum('B', 2, "sc");
  auto roots = all_roots(b2);
  const RootPair* sh = nullptr;
  for (const auto& p : roots)
    if (!p.is_long) sh = &p;
  REQUIRE(sh != nullptr);
  auto orb = weyl_orbit(b2, sh->coroot);
  CHECK(orb.size() == 4);

  CHECK(weyl_orbit(b2, std::vector<Int>{Int(0), Int(0)}).size() == 1);

  Int w = weyl_order(b2);
  CHECK(w == 8);
  CHECK(w % Int(orb.size()) == 0);

  // semisimple: full Weyl sum vanishes
  for (std::string spec : {"A2:ad", "B2:sc", "G2:sc", "D4:ad"}) {
    RootDatum rd = parse_group_spec(spec);
    for (const auto& w0 : fundamental_coweights(rd)) {
      bool integral = true;
      for (const auto& q : w0)
        if (q.get_den() != 1) integral = false;
      std::vector<Int> v;
      if (integral)
        v = to_int(w0);
      else
        v = rd.simple_coroot(0);
      auto s = full_weyl_sum(rd, v);
      for (const auto& x : s) CHECK(x == 0);
    }
  }

  CHECK_THROWS_AS(weyl_orbit(b2, sh->coroot, 2), OrbitCapExceeded);
}

TEST_CASE("isogeny enumeration") {
  auto a3 = enumerate_isogeny_lattices('A', 3);
  CHECK(a3.size() == 3);  // sc, int, ad
  CHECK(a3.front().label == "sc");
  CHECK(a3.back().label == "ad");
  auto d4 = enumerate_isogeny_lattices('D', 4);
  CHECK(d4.size() == 5);  // sc, three Z/2, ad
  auto g2 = enumerate_isogeny_lattices('G', 2);
  CHECK(g2.size() == 1);
  // every enumerated lattice builds a valid datum
  for (auto& il : d4) {
    RootDatum rd = datum_from_cochar_basis('D', 4, il.basis, il.label);
    CHECK(iso_test(pi1(langlands_dual(rd)), pontryagin_dual(center(rd))));
  }
}

TEST_CASE("so labels") {
  RootDatum so7 = build_root_datum('B', 3, "so");
  CHECK(so7.isogeny_label == "ad");
  RootDatum so8 = build_root_datum('D', 4, "so");
  CHECK(pi1(so8).invariant_factors == std::vector<Int>{2});
  CHECK(center(so8).invariant_factors == std::vector<Int>{2});
}

TEST_CASE("product datum and central quotient") {
  RootDatum sl2 = build_root_datum('A', 1, "sc");
  RootDatum prod = product_datum({sl2, sl2}, 0);
  CHECK(prod.n == 2);
  CHECK(pi1(prod).is_trivial());
  auto z = center(prod);
  CHECK(z.invariant_factors == std::vector<Int>{2, 2});

  // (SL2 x SL2)/diagonal mu_2
  std::vector<std::vector<Rat>> k = {{Rat(1, 2), Rat(1, 2)}};
  RootDatum q = central_quotient(prod, k);
  auto p = pi1(q);
  CHECK(p.rank == 0);
  CHECK(p.invariant_factors == std::vector<Int>{2});

  // GL_3 as (SL_3 x Gm)/mu_3: pi1 = Z
  RootDatum sl3 = build_root_datum('A', 2, "sc");
  RootDatum slgm = product_datum({sl3}, 1);
  CHECK(pi1(slgm).rank == 1);
  std::vector<std::vector<Rat>> k3 = {{Rat(2, 3), Rat(1, 3), Rat(1, 3)}};
  RootDatum gl3 = central_quotient(slgm, k3);
  auto pg = pi1(gl3);
  CHECK(pg.rank == 1);
  CHECK(pg.invariant_factors.empty());

  // non-central generator rejected
  std::vector<std::vector<Rat>> bad = {{Rat(1, 2), Rat(0), Rat(0)}};
  CHECK_THROWS(central_quotient(slgm, bad));
}

TEST_CASE("checked epsilon rejects non-roots") {
  RootDatum b2 = build_root_datum('B', 2, "sc");
  CHECK(epsilon_checked(b2, b2.simple_root(0)) == 2);  // B2:sc = Sp(2), long
  CHECK(epsilon_dual_checked(b2, b2.simple_root(1)) == 1);
  CHECK_THROWS_AS(epsilon_checked(b2, std::vector<Int>{Int(5), Int(5)}),
                  std::invalid_argument);
  CHECK_THROWS_AS(epsilon_dual_checked(b2, std::vector<Int>{Int(0), Int(0)}),
                  std::invalid_argument);
}

TEST_CASE("connected-level closed form across data") {
  // 0 for Sp-like, center otherwise
  CHECK(connected_sections_closed_form(parse_group_spec("C3:sc")).is_trivial());
  CHECK(connected_sections_closed_form(parse_group_spec("B2:sc")).is_trivial());
  CHECK(iso_test(connected_sections_closed_form(parse_group_spec("B3:sc")),
                 center(parse_group_spec("B3:sc"))));
  CHECK(iso_test(connected_sections_closed_form(parse_group_spec("A3:ad")),
                 center(parse_group_spec("A3:ad"))));
  CHECK(iso_test(connected_sections_closed_form(parse_group_spec("D4:so")),
                 center(parse_group_spec("D4:so"))));
  CHECK(iso_test(connected_sections_closed_form(parse_group_spec("G2:sc")),
                 center(parse_group_spec("G2:sc"))));
}

TEST_CASE("A1 flag and invalid types") {
  CHECK(build_root_datum('A', 1, "sc").a1_flag);
  CHECK(!build_root_datum('A', 2, "sc").a1_flag);
  CHECK_THROWS(build_root_datum('B', 1, "sc"));
  CHECK_THROWS(build_root_datum('D', 3, "sc"));
  CHECK_THROWS(build_root_datum('E', 9, "sc"));
  CHECK_THROWS(build_root_datum('H', 4, "sc"));
  CHECK_THROWS(parse_group_spec("B3:nope"));
}
