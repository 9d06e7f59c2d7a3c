#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "camlat/cameral.hpp"

using namespace camlat;

static CoverDatum b2_ssll(const std::string& iso = "sc") {
  // genus 2, identity handles, branches [s, s, l, l]
  RootDatum rd = build_root_datum('B', 2, iso);
  CoverDatum cd;
  cd.datum = rd;
  cd.genus = 2;
  cd.handles.assign(4, IntMatrix::identity(rd.n));
  auto simples = sorted_short_first_simples(rd);
  cd.branches = {simples[0], simples[0], simples[1], simples[1]};
  return cd;
}

TEST_CASE("b2 ssll cover is valid and generic") {
  CoverDatum cd = b2_ssll();
  auto rep = validate_cover(cd);
  CHECK(rep.relation_ok);
  CHECK(rep.surjective);
  CHECK(rep.generic);
  CHECK(rep.valid());
  CHECK(rep.subgroup_order == 8);
  // short simple first, long simple second
  CHECK(!cd.branches[0].is_long);
  CHECK(cd.branches[2].is_long);
}

TEST_CASE("single branch fails the relation") {
  RootDatum rd = build_root_datum('B', 2, "sc");
  CoverDatum cd;
  cd.datum = rd;
  cd.genus = 1;
  cd.handles.assign(2, IntMatrix::identity(rd.n));
  cd.branches = {sorted_short_first_simples(rd)[0]};
  auto rep = validate_cover(cd);
  CHECK(!rep.relation_ok);
  CHECK(!rep.valid());
}

TEST_CASE("all-long branches fail genericity") {
  RootDatum rd = build_root_datum('B', 2, "sc");
  CoverDatum cd;
  cd.datum = rd;
  cd.genus = 2;
  cd.handles.assign(4, IntMatrix::identity(rd.n));
  auto simples = sorted_short_first_simples(rd);
  const RootPair& l = simples[1];
  REQUIRE(l.is_long);
  cd.branches = {l, l, l, l};
  auto rep = validate_cover(cd);
  CHECK(rep.relation_ok);
  CHECK(!rep.generic);
  CHECK(!rep.valid());
}

TEST_CASE("local system structure") {
  CoverDatum cd = b2_ssll();
  LocalSystem ls = local_system(cd);
  CHECK(ls.m() == 8);
  CHECK(ls.b() == 4);
  for (int i = 0; i < 4; ++i) {
    const IntMatrix& r = ls.gen[4 + i];
    CHECK((r * r).is_identity());
    CHECK(r == reflection(cd.datum, cd.branches[i]));
  }
  // B2:sc is Sp(2) under the rank-2 coincidence: long roots have eps = 2
  CHECK(ls.eps[0] == 1);
  CHECK(ls.eps[2] == 2);
  CHECK(ls.eps_dual[0] == 1);
  CHECK(ls.eps_dual[2] == 1);

  // dual of dual is the original
  LocalSystem dd = dual_local_system(dual_local_system(ls));
  for (int k = 0; k < ls.m(); ++k) CHECK(dd.gen[k] == ls.gen[k]);
  CHECK(dd.branch_root == ls.branch_root);

  // trivial g=1 b=0 cover: all matrices identity
  RootDatum a2 = build_root_datum('A', 2, "sc");
  CoverDatum triv;
  triv.datum = a2;
  triv.genus = 1;
  triv.handles.assign(2, IntMatrix::identity(2));
  auto rep = validate_cover(triv);
  CHECK(rep.relation_ok);
  CHECK(!rep.surjective);  // trivial monodromy is not all of W
  LocalSystem tls = local_system(triv, false);
  for (auto& m : tls.gen) CHECK(m.is_identity());
}

TEST_CASE("invalid covers are rejected by local_system") {
  RootDatum rd = build_root_datum('B', 2, "sc");
  CoverDatum cd;
  cd.datum = rd;
  cd.genus = 1;
  cd.handles.assign(2, IntMatrix::identity(rd.n));
  cd.branches = {sorted_short_first_simples(rd)[0]};
  CHECK_THROWS_AS(local_system(cd), InvalidCover);
}

TEST_CASE("relation invariant under global conjugation") {
  CoverDatum cd = b2_ssll();
  auto roots = all_roots(cd.datum);
  IntMatrix w = reflection(cd.datum, roots[2]) * reflection(cd.datum, roots[5]);
  IntMatrix winv = unimodular_inverse(w);
  CoverDatum conj = cd;
  for (auto& h : conj.handles) h = w * h * winv;
  for (auto& br : conj.branches) {
    std::vector<Int> nr(cd.datum.n, 0);
    for (int j = 0; j < cd.datum.n; ++j)
      for (int t = 0; t < cd.datum.n; ++t)
        nr[j] += br.root[t] * winv.at(t, j);
    auto nc = mul(w, br.coroot);
    bool found = false;
    for (const auto& p : roots)
      if (p.root == nr && p.coroot == nc) {
        br = p;
        found = true;
        break;
      }
    REQUIRE(found);
  }
  auto rep = validate_cover(conj);
  CHECK(rep.valid());
}

TEST_CASE("random covers are valid and deterministic") {
  for (std::string spec : {"B2:sc", "A2:ad", "C3:sc", "G2:sc", "D4:so"}) {
    RootDatum rd = parse_group_spec(spec);
    for (unsigned long long seed = 0; seed < 6; ++seed) {
      int g = 1 + int(seed % 3);
      int b = 4 + 2 * int(seed % 3);
      CoverDatum cd = random_cover(rd, g, b, seed);
      auto rep = validate_cover(cd);
      CHECK(rep.valid());
      CoverDatum cd2 = random_cover(rd, g, b, seed);
      CHECK(cd.handles.size() == cd2.handles.size());
      for (size_t i = 0; i < cd.handles.size(); ++i)
        CHECK(cd.handles[i] == cd2.handles[i]);
      CHECK(cd.branches.size() == cd2.branches.size());
      for (size_t i = 0; i < cd.branches.size(); ++i)
        CHECK(cd.branches[i].root == cd2.branches[i].root);
    }
  }
}

TEST_CASE("seed zero gives the canonical cover") {
  RootDatum rd = build_root_datum('B', 2, "sc");
  CoverDatum cd = random_cover(rd, 2, 4, 0);
  for (auto& h : cd.handles) CHECK(h.is_identity());
  CHECK(!cd.branches[0].is_long);
  CHECK(!cd.branches[1].is_long);
  CHECK(cd.branches[2].is_long);
  CHECK(cd.branches[3].is_long);
  CHECK(cd.branches[0].root == cd.branches[1].root);
}

TEST_CASE("odd branch count infeasible") {
  RootDatum rd = build_root_datum('B', 2, "sc");
  CHECK_THROWS_AS(random_cover(rd, 1, 1, 0), InfeasibleCover);
  CHECK_THROWS_AS(random_cover(rd, 0, 4, 0), InfeasibleCover);
  // b=0 with any genus: identity handles accepted (relation holds)
  CoverDatum cd = random_cover(build_root_datum('A', 2, "sc"), 2, 0, 1);
  auto rep = validate_cover(cd);
  CHECK(rep.relation_ok);
}

TEST_CASE("oversized Weyl groups report an unchecked closure") {
  RootDatum e8 = build_root_datum('E', 8, "sc");
  CoverDatum cd;
  cd.datum = e8;
  cd.genus = 1;
  cd.handles.assign(2, IntMatrix::identity(8));
  auto simples = sorted_short_first_simples(e8);
  for (int i = 0; i < 8; ++i) {
    cd.branches.push_back(simples[i]);
    cd.branches.push_back(simples[i]);
  }
  auto rep = validate_cover(cd);
  CHECK(rep.relation_ok);
  CHECK(!rep.surjectivity_checked);
  CHECK(!rep.valid());
}

TEST_CASE("cover json round trip") {
  CoverDatum cd = b2_ssll();
  json j = cover_to_json(cd);
  CHECK(j["group"]["type"] == "B");
  CHECK(j["group"]["rank"] == 2);
  CHECK(j["group"]["isogeny"] == "sc");
  CHECK(j["genus"] == 2);
  CHECK(j["handles"].size() == 4);
  CHECK(j["branches"].size() == 4);
  CoverDatum back = cover_from_json(j);
  CHECK(back.datum == cd.datum);
  CHECK(back.genus == cd.genus);
  for (size_t i = 0; i < cd.branches.size(); ++i)
    CHECK(back.branches[i].root == cd.branches[i].root);
  auto rep = validate_cover(back);
  CHECK(rep.valid());
}

TEST_CASE("cover json with conjugated roots and handle words") {
  json j = json::parse(R"({
    "group": {"type": "B", "rank": 2, "isogeny": "sc"},
    "genus": 1,
    "handles": [ [1], [1] ],
    "branches": [ {"root": [0,1]},
                  {"conjugate": {"base": [0,1], "word": [1]}},
                  {"conjugate": {"base": [0,1], "word": [1]}},
                  {"root": [0,1]},
                  {"root": [1,0]}, {"root": [1,0]} ]
  })");
  CoverDatum cd = cover_from_json(j);
  CHECK(cd.genus == 1);
  CHECK(!cd.handles[0].is_identity());
  CHECK(cd.branches[0].root != cd.branches[1].root);
  CHECK(cd.branches[1].root == cd.branches[2].root);
}

TEST_CASE("explicit lattice in a cover file") {
  // SL(4)/mu_2 given by an explicit generator: half the sum of the odd
  // coroots; matches the enumerated intermediate class
  json j = json::parse(R"({
    "group": {"type": "A", "rank": 3, "isogeny": "explicit",
              "lattice": [["1/2", 0, "1/2"]]},
    "genus": 2,
    "handles": [ [], [], [], [] ],
    "branches": [ {"root": [1,0,0]}, {"root": [1,0,0]},
                  {"root": [0,1,0]}, {"root": [0,1,0]},
                  {"root": [0,0,1]}, {"root": [0,0,1]} ]
  })");
  CoverDatum cd = cover_from_json(j);
  CHECK(pi1(cd.datum).invariant_factors == std::vector<Int>{2});
  RootDatum viaenum = build_root_datum('A', 3, "int0");
  CHECK(iso_test(pi1(cd.datum), pi1(viaenum)));
  CHECK(validate_cover(cd).valid());
  // generators outside the coweight lattice are rejected
  json bad = j;
  bad["group"]["lattice"] = {{"1/3", 0, 0}};
  CHECK_THROWS(cover_from_json(bad));
}

TEST_CASE("unknown branch vectors rejected") {
  json j = json::parse(R"({
    "group": {"type": "A", "rank": 2, "isogeny": "sc"},
    "genus": 1,
    "handles": [ [], [] ],
    "branches": [ {"root": [5,5]} ]
  })");
  CHECK_THROWS(cover_from_json(j));
}
