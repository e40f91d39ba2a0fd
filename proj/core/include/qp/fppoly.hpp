#pragma once
// Factorization machinery over finite fields F_{p^k}.

#include "qp/poly.hpp"

namespace qp {

using FqPoly = Poly<FqField>;

// Distinct-degree / equal-degree (Cantor-Zassenhaus) factorization.
// Returns monic irreducible factors with multiplicity.
std::vector<std::pair<FqPoly, unsigned>> fq_factor(FqPoly f, const FqField& F);

// Roots of f in F itself (no multiplicity).
std::vector<FqField::Elt> fq_roots(const FqPoly& f, const FqField& F);

bool fq_is_irreducible(const FqPoly& f, const FqField& F);

// A monic irreducible polynomial of degree k over F_p (deterministic scan).
std::vector<uint64_t> irreducible_poly(uint64_t p, unsigned k);

// Square roots in F_q (q odd); nullopt if a is a non-square.
std::optional<FqField::Elt> fq_sqrt(const FqField::Elt& a, const FqField& F);

}  // namespace qp
