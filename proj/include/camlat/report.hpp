#pragma once

// JSON report generation shared by the command line tool and the test
// suites. Reports are deterministic: ordered keys, fixed field sets, big
// integers rendered as decimal strings.

#include "camlat/hecke.hpp"
#include "camlat/prym.hpp"

#include <string>

namespace camlat {

inline const char* kVersion = "1.0.0";
// Identifier of the frozen orientation/sign conventions of the pairing and
// relator (see README); reports from different conventions are not
// comparable bit for bit.
inline const char* kConvention = "relator-bar-cup-v1";

inline json report_shell(const std::string& subcommand, const json& input) {
  json j;
  j["version"] = kVersion;
  j["convention"] = kConvention;
  j["input"] = json{{"subcommand", subcommand}};
  for (auto& [k, v] : input.items()) j["input"][k] = v;
  j["results"] = json::object();
  j["verdict"] = "";
  return j;
}

inline json fg_json(const FgAbGroup& g) {
  json j;
  j["rank"] = g.rank;
  json f = json::array();
  for (const Int& d : g.invariant_factors) f.push_back(d.get_str());
  j["invariant_factors"] = f;
  j["name"] = fg_to_string(g);
  return j;
}

inline json matrix_json(const IntMatrix& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows; ++i) {
    json r = json::array();
    for (int j = 0; j < m.cols; ++j) r.push_back(m.at(i, j).get_str());
    rows.push_back(r);
  }
  return rows;
}

inline json qlattice_json(const QLattice& q) {
  json j;
  j["denominator"] = q.den.get_str();
  j["basis"] = matrix_json(q.lat.basis);
  return j;
}

inline json vec_json(const std::vector<Int>& v) {
  json r = json::array();
  for (const Int& x : v) r.push_back(x.get_str());
  return r;
}

// ---------------------------------------------------------------------------

inline json report_dual(const std::string& spec) {
  RootDatum rd = parse_group_spec(spec);
  RootDatum dl = langlands_dual(rd);
  json j = report_shell("dual", {{"group", spec}});
  j["results"]["group"] = rd.type_string();
  j["results"]["dual"] = dl.type_string();
  j["results"]["pi1"] = fg_json(pi1(rd));
  j["results"]["dual_pi1"] = fg_json(pi1(dl));
  j["results"]["involutive"] = (langlands_dual(dl) == rd);
  j["verdict"] = dl.type_string();
  return j;
}

inline json report_epsilon(const std::string& spec) {
  RootDatum rd = parse_group_spec(spec);
  json j = report_shell("epsilon", {{"group", spec}});
  json table = json::array();
  bool sp = false, so = false;
  for (const auto& p : all_roots(rd)) {
    Int e = epsilon(rd, p);
    Int ed = epsilon_dual(rd, p);
    if (e == 2) sp = true;
    if (ed == 2) so = true;
    json row;
    row["root"] = vec_json(p.root);
    row["coroot"] = vec_json(p.coroot);
    row["length"] = p.is_long ? "long" : "short";
    row["eps"] = e.get_str();
    row["eps_dual"] = ed.get_str();
    table.push_back(row);
  }
  j["results"]["roots"] = table;
  j["results"]["sp_like"] = sp;
  j["results"]["so_odd_like"] = so;
  j["verdict"] = "ok";
  return j;
}

inline json report_pi1(const std::string& spec) {
  RootDatum rd = parse_group_spec(spec);
  json j = report_shell("pi1", {{"group", spec}});
  FgAbGroup p = pi1(rd);
  j["results"]["pi1"] = fg_json(p);
  j["verdict"] = fg_to_string(p);
  return j;
}

inline json report_center(const std::string& spec) {
  RootDatum rd = parse_group_spec(spec);
  json j = report_shell("center", {{"group", spec}});
  FgAbGroup z = center(rd);
  j["results"]["center"] = fg_json(z);
  // cross identification with the dual pi1
  j["results"]["dual_pi1"] = fg_json(pi1(langlands_dual(rd)));
  j["results"]["matches_dual_pi1"] =
      iso_test(pontryagin_dual(z), pi1(langlands_dual(rd)));
  j["verdict"] = fg_to_string(z);
  return j;
}

inline json cover_report_json(const CoverReport& rep) {
  json j;
  j["relation"] = rep.relation_ok;
  j["surjective"] = rep.surjective;
  j["generic"] = rep.generic;
  j["surjectivity_checked"] = rep.surjectivity_checked;
  j["subgroup_order"] = rep.subgroup_order.get_str();
  j["weyl_order"] = rep.weyl_group_order.get_str();
  json counts = json::array();
  for (const auto& c : rep.orbit_branch_counts) counts.push_back(c.get_str());
  j["branch_counts_per_orbit"] = counts;
  j["failures"] = rep.failures;
  return j;
}

inline json report_validate(const CoverDatum& cd, const json& input) {
  json j = report_shell("validate", input);
  CoverReport rep = validate_cover(cd);
  j["results"] = cover_report_json(rep);
  j["verdict"] = rep.valid() ? "valid" : "invalid";
  return j;
}

inline json report_cohomology(const CoverDatum& cd, const json& input) {
  json j = report_shell("cohomology", input);
  LocalSystem ls = local_system(cd);
  LocalSystem dual = dual_local_system(ls);
  auto open = h1_open(ls);
  auto push = h1_pushforward(ls);
  auto tor = h1_torsion(ls);
  j["results"]["h1_open"] = fg_json(open.group);
  j["results"]["h1_pushforward"] = fg_json(push.group);
  j["results"]["h0_pushforward"] = fg_json(h0_pushforward(ls));
  j["results"]["h2_pushforward"] = fg_json(h2_pushforward(ls));
  j["results"]["h1_open_torsion"] = fg_json(tor.open_torsion);
  j["results"]["h1_pushforward_torsion"] = fg_json(tor.pushforward_torsion);
  j["results"]["saturation_index_open"] = tor.open_saturation_index.get_str();
  j["results"]["saturation_index_pushforward"] =
      tor.pushforward_saturation_index.get_str();
  check_open_perfectness(ls);
  check_open_perfectness(dual);
  PairingMatrix pm = pairing_gram(ls);
  j["results"]["gram"] = matrix_json(pm.gram);
  j["results"]["gram_det"] = pm.det_abs.get_str();
  j["verdict"] = "ok";
  return j;
}

inline json report_prym(const CoverDatum& cd, const json& input) {
  json j = report_shell("prym", input);
  SandwichLattice s = prym_sandwich(cd);
  j["results"]["dim"] = s.dim;
  j["results"]["l0"] = qlattice_json(s.l0);
  j["results"]["l"] = qlattice_json(s.l);
  j["results"]["l1"] = qlattice_json(s.l1);
  j["results"]["gram_det"] = Int(abs(det(s.gram))).get_str();
  j["results"]["index_l1_l0"] = qlattice_quotient(s.l0, s.l1).order().get_str();
  j["results"]["quotient_l1_l0"] = fg_json(qlattice_quotient(s.l0, s.l1));
  LevelTriple pi0 = component_groups(cd);
  LevelTriple h0 = automorphism_groups(cd);
  j["results"]["pi0"] = {{"connected", fg_json(pi0.connected)},
                         {"middle", fg_json(pi0.middle)},
                         {"top", fg_json(pi0.top)}};
  j["results"]["h0"] = {{"connected", fg_json(h0.connected)},
                        {"middle", fg_json(h0.middle)},
                        {"top", fg_json(h0.top)}};
  j["verdict"] = "ok";
  return j;
}

inline json duality_report_json(const DualityReport& rep) {
  json j;
  j["group"] = rep.group;
  j["dual_group"] = rep.dual_group;
  json checks = json::array();
  for (const auto& c : rep.checks) {
    checks.push_back(json{
        {"name", c.name}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"pass", c.pass}});
  }
  j["checks"] = checks;
  j["verdict"] = rep.verdict ? "pass" : "fail";
  return j;
}

inline json report_verify_duality(const CoverDatum& cd, const json& input,
                                  bool force_a1 = false) {
  json j = report_shell("verify-duality", input);
  DualityReport rep = verify_duality(cd, force_a1);
  j["results"] = duality_report_json(rep);
  j["verdict"] = rep.verdict ? "pass" : "fail";
  return j;
}

inline json report_hecke(const std::string& spec, const std::vector<Int>& lambda,
                         size_t orbit_cap) {
  RootDatum rd = parse_group_spec(spec);
  json input = {{"group", spec}, {"lambda", vec_json(lambda)}};
  json j = report_shell("hecke", input);
  auto cc = characteristic_class({rd, lambda, "pt"}, orbit_cap);
  j["results"]["characteristic_class"] = vec_json(cc.value);
  j["results"]["topologically_trivial"] = cc.trivial;
  j["results"]["component_shift"] = vec_json(component_shift(rd, lambda));
  j["results"]["pi1"] = fg_json(pi1(rd));
  j["results"]["shift_transitive"] = shift_transitivity(rd);
  j["verdict"] = cc.trivial ? "trivial" : "nontrivial";
  return j;
}

struct SweepConfig {
  char type = 'B';
  int rank = 2;
  std::string isogeny = "sc";
  int count = 5;
  unsigned long long seed = 0;
  int genus = 2;
  int branches = -1;  // default: 2 * semisimple rank
};

inline json report_sweep(const SweepConfig& cfg) {
  RootDatum rd = build_root_datum(cfg.type, cfg.rank, cfg.isogeny);
  int b = cfg.branches >= 0 ? cfg.branches : 2 * rd.semisimple_rank();
  json input = {{"group", rd.type_string()},
                {"count", cfg.count},
                {"seed", cfg.seed},
                {"genus", cfg.genus},
                {"branches", b}};
  json j = report_shell("sweep", input);
  json runs = json::array();
  bool all = true;
  for (int i = 0; i < cfg.count; ++i) {
    unsigned long long seed_i = cfg.seed + (unsigned long long)i;
    CoverDatum cd = random_cover(rd, cfg.genus, b, seed_i);
    DualityReport rep = verify_duality(cd);
    json run;
    run["seed"] = seed_i;
    run["cover"] = cover_to_json(cd);
    run["duality"] = duality_report_json(rep);
    runs.push_back(run);
    all = all && rep.verdict;
  }
  j["results"]["runs"] = runs;
  j["verdict"] = all ? "pass" : "fail";
  return j;
}

}  // namespace camlat
