#pragma once
// Finitely generated abelian group presentations in invariant-factor form.

#include <string>

#include "qp/matrix.hpp"

namespace qp {

struct AbelianGroupPresentation {
  std::vector<Int> invariant_factors;  // n_1 | n_2 | ... , each > 1
  std::vector<std::string> generators;  // opaque handles into producing context

  Int order() const {
    Int o = 1;
    for (auto& n : invariant_factors) o *= n;
    return o;
  }
  bool operator==(const AbelianGroupPresentation& o) const {
    return invariant_factors == o.invariant_factors;
  }
  std::string str() const {
    if (invariant_factors.empty()) return "trivial";
    std::string s;
    for (size_t i = 0; i < invariant_factors.size(); ++i) {
      if (i) s += " x ";
      s += "Z/" + invariant_factors[i].get_str();
    }
    return s;
  }
};

// Structure of Z^n / (row space of rel); infinite factors are dropped
// (callers in this project only present finite groups).
inline AbelianGroupPresentation group_from_relations(const std::vector<std::vector<Int>>& rel,
                                                     size_t ngens) {
  AbelianGroupPresentation g;
  if (rel.empty()) return g;
  auto sf = smith_normal_form(rel);
  size_t n = sf.diag.size();
  for (size_t i = 0; i < n; ++i)
    if (sf.diag[i] > 1) g.invariant_factors.push_back(sf.diag[i]);
  // free rank = ngens - rank(rel); not represented here
  (void)ngens;
  std::sort(g.invariant_factors.begin(), g.invariant_factors.end());
  return g;
}

}  // namespace qp
