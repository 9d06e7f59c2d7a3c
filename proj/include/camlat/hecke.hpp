#pragma once

// The combinatorial shadow of the abelianized Hecke operators: the
// characteristic class of the translation bundle (a full Weyl-group average)
// and the component shift on pi1.

#include "camlat/rootdata.hpp"

namespace camlat {

struct HeckeClass {
  RootDatum datum;
  std::vector<Int> lambda;  // cocharacter
  std::string point_label;  // opaque; the class does not depend on it
};

struct CharacteristicClass {
  std::vector<Int> value;  // in H^2 of the cameral curve = Lambda
  bool trivial = false;
};

inline CharacteristicClass characteristic_class(const HeckeClass& hc,
                                                size_t cap = 2000000) {
  CharacteristicClass out;
  out.value = full_weyl_sum(hc.datum, hc.lambda, cap);
  out.trivial = true;
  for (const Int& x : out.value)
    if (x != 0) out.trivial = false;
  return out;
}

// Image of lambda in pi1 = Lambda / coroot lattice, in canonical coordinates.
inline std::vector<Int> component_shift(const RootDatum& rd,
                                        const std::vector<Int>& lambda) {
  FgAbGroup p = pi1(rd);
  return fg_project(p, lambda);
}

// The shifts of a generating set of Lambda generate pi1: the projection is
// onto, so this is a tautology made checkable.
inline bool shift_transitivity(const RootDatum& rd) {
  FgAbGroup p = pi1(rd);
  IntMatrix gens = IntMatrix::identity(rd.n);
  FgAbGroup quot = fg_quotient_by(p, gens);
  return quot.is_trivial();
}

}  // namespace camlat
