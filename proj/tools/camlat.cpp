// Command line front end: root datum queries, cover validation, cohomology
// and Prym computations, duality verification, and seeded sweeps.
//
// Exit codes: 0 success; 1 validation failure (bad input data); 2 internal
// invariant violation (a gate tripped: the mathematics disagrees with the
// implementation); 64 usage errors.

#include "camlat/report.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace camlat;

namespace {

CoverDatum load_cover(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open cover file: " + path);
  json j = json::parse(in);
  return cover_from_json(j);
}

std::vector<Int> parse_vector(const std::string& s) {
  std::vector<Int> out;
  std::string cur;
  for (char c : s) {
    if (c == ',' || c == ' ') {
      if (!cur.empty()) out.push_back(Int(cur)), cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(Int(cur));
  return out;
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lattice invariants of cameral covers and their duality"};
  app.require_subcommand(1);

  std::string group, cover_path, lambda_str, out_path;
  bool force_a1 = false;
  unsigned long long seed = 0;
  int count = 5, genus = 2, branches = -1, rank = 2;
  std::string type = "B", isogeny = "sc";
  size_t orbit_cap = 2000000;

  auto* dual = app.add_subcommand("dual", "Langlands dual of a root datum");
  dual->add_option("group", group)->required();

  auto* eps = app.add_subcommand("epsilon", "epsilon invariants of all roots");
  eps->add_option("group", group)->required();

  auto* p1 = app.add_subcommand("pi1", "fundamental group of the datum");
  p1->add_option("group", group)->required();

  auto* ctr = app.add_subcommand("center", "center of the datum");
  ctr->add_option("group", group)->required();

  auto* val = app.add_subcommand("validate", "validate a cover file");
  val->add_option("cover", cover_path)->required();

  auto* coh = app.add_subcommand("cohomology", "cohomology of a cover");
  coh->add_option("cover", cover_path)->required();

  auto* prym = app.add_subcommand("prym", "Prym sandwich and level groups");
  prym->add_option("cover", cover_path)->required();

  auto* vd = app.add_subcommand("verify-duality", "duality checks for a cover");
  vd->add_option("cover", cover_path)->required();
  vd->add_flag("--force-a1", force_a1, "allow type A1");

  auto* hk = app.add_subcommand("hecke", "translation class of a cocharacter");
  hk->add_option("group", group)->required();
  hk->add_option("--lambda", lambda_str, "comma separated cocharacter")
      ->required();
  hk->add_option("--orbit-cap", orbit_cap);

  auto* sw = app.add_subcommand("sweep", "seeded random duality sweep");
  sw->add_option("--type", type)->required();
  sw->add_option("--rank", rank)->required();
  sw->add_option("--isogeny", isogeny);
  sw->add_option("--count", count);
  sw->add_option("--seed", seed);
  sw->add_option("--genus", genus);
  sw->add_option("--branches", branches);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 64;
  }

  try {
    if (*dual) emit(report_dual(group));
    if (*eps) emit(report_epsilon(group));
    if (*p1) emit(report_pi1(group));
    if (*ctr) emit(report_center(group));
    if (*val) {
      CoverDatum cd = load_cover(cover_path);
      json rep = report_validate(cd, {{"cover", cover_path}});
      emit(rep);
      return rep["verdict"] == "valid" ? 0 : 1;
    }
    if (*coh) emit(report_cohomology(load_cover(cover_path),
                                     {{"cover", cover_path}}));
    if (*prym) emit(report_prym(load_cover(cover_path),
                                {{"cover", cover_path}}));
    if (*vd) {
      json rep = report_verify_duality(load_cover(cover_path),
                                       {{"cover", cover_path}}, force_a1);
      emit(rep);
      return rep["verdict"] == "pass" ? 0 : 2;
    }
    if (*hk) emit(report_hecke(group, parse_vector(lambda_str), orbit_cap));
    if (*sw) {
      SweepConfig cfg;
      cfg.type = type.at(0);
      cfg.rank = rank;
      cfg.isogeny = isogeny;
      cfg.count = count;
      cfg.seed = seed;
      cfg.genus = genus;
      cfg.branches = branches;
      json rep = report_sweep(cfg);
      emit(rep);
      return rep["verdict"] == "pass" ? 0 : 2;
    }
  } catch (const GateFailure& e) {
    std::cerr << "gate failure: " << e.what() << "\n";
    return 2;
  } catch (const InvalidCover& e) {
    std::cerr << "invalid cover: " << e.what() << "\n";
    return 1;
  } catch (const InfeasibleCover& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 1;
  } catch (const A1Refused& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const OrbitCapExceeded& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const QuotientError& e) {
    std::cerr << "lattice error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "bad input: " << e.what() << "\n";
    return 1;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "bad input: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal invariant violation: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
