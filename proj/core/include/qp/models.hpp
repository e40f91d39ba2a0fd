#pragma once
// Diagonalised canonical models of X_0(N): ideal generators, Atkin-Lehner
// sign vectors, the j-map with certified precision, cusp places, quotient
// maps, plane models, and the good-reduction test.

#include "qp/homopoly.hpp"
#include "qp/modforms.hpp"
#include "qp/numberfield.hpp"
#include "qp/quadfield.hpp"
#include "qp/zfactor.hpp"

namespace qp {

struct ALAction {
  std::vector<long> group;                     // all Q || N, Q > 1
  std::map<long, std::vector<int>> signs;      // Q -> (+-1)^g
  Mat<RatField> change;                        // diagonal basis = change * raw basis
};

struct JMapPair {
  int r = 0;      // common degree of the two forms
  long m = 0;     // certified precision
  ZHPoly F, G;
};

struct JMap {
  Int d_j;
  Int degree_bound;                 // (2g-2) r for the primary pair
  std::vector<JMapPair> pairs;      // primary first; alternates for base points
  const JMapPair& primary() const { return pairs.at(0); }
};

struct CuspOrbitPlaces {
  QPoly minpoly;                // monic irreducible over Q, deg = orbit size
  std::vector<QPoly> coords;    // projective coordinates as polys in the root
  long width = 1;
  bool at_infinity = false;     // the distinguished cusp q -> 0
};

struct CanonicalModel {
  long N = 0;
  size_t g = 0;
  std::vector<ZHPoly> gens;        // degree-2 generators first, then 3 (and 4 for g=3)
  ALAction al;
  std::vector<ZSeries> coords;     // diagonalised integral coordinate expansions
  JMap jmap;
  std::vector<CuspOrbitPlaces> cusps;
  CuspformBasis basis;

  std::vector<const ZHPoly*> gens_of_degree(int d) const {
    std::vector<const ZHPoly*> out;
    for (auto& q : gens)
      if (q.degree == d) out.push_back(&q);
    return out;
  }
};

// simultaneous +-1 eigenbasis of the Atkin-Lehner operators
std::pair<std::vector<ZSeries>, ALAction> diagonalise(const CuspformBasis& basis);

// canonical ideal of the diagonalised model (quadrics, plus cubics/quartics
// where the quadrics do not cut out the curve); Sturm-certified
CanonicalModel canonical_ideal(const CuspformBasis& basis);

// j = F/G fit with certified precision; fills model.jmap
void fit_jmap(CanonicalModel& model);

// ---------------------------------------------------------------- plane model
struct PlaneModel {
  std::array<size_t, 3> proj;      // coordinate indices (u : v : w)
  ZHPoly curve;                    // irreducible plane curve, 3 variables
  // inverse rational maps x_m = A_m / B on the curve, when a low-degree
  // exact fit exists; otherwise the inverse is fitted modulo each working
  // prime (see reduce_model), which certifies birationality just as well
  bool has_exact_inverse = false;
  std::vector<ZHPoly> inv_num;     // A_m, degree db+1, in (u, v, w)
  ZHPoly inv_den;                  // B, degree db
  mutable int db_hint = 0;         // denominator degree found at some prime
};

PlaneModel plane_model(const CanonicalModel& model, int max_attempts = 12);

// inverse maps of the plane projection fitted modulo p (coefficients in
// [0, p)); used by the reduction when no low-degree exact inverse exists
std::pair<std::vector<ZHPoly>, ZHPoly> plane_inverse_mod_p(const CanonicalModel& model,
                                                           const PlaneModel& pm, long p);

// cusp places (pole locus of j), with widths summing to psi(N); the plane
// model drives the reductions used for non-squarefree levels
void cusp_places(CanonicalModel& model, const PlaneModel& pm);

// ------------------------------------------------------------ quotient maps
struct QuotientMap {
  long d = 0;                      // the involution w_d
  bool hyperelliptic = false;
  std::vector<size_t> proj;        // chosen coordinate indices
  long target_genus = 0;
  // Case 1: canonical model of the quotient on the projected coordinates
  std::optional<CanonicalModel> target;
  // Case 2: image model in P^{t-1} (relations among projected coordinates)
  std::vector<ZHPoly> image_gens;
  // Case 2: standard form y^2 = h(x), with x = coord[x_num]/coord[x_den] and
  // y fitted as a ratio of forms on the big model
  QPoly hpoly;
  size_t x_num = 0, x_den = 0;
  ZHPoly y_num, y_den;             // y = y_num / y_den on the big model
};

QuotientMap quotient_map(const CanonicalModel& model, long d);

// ---------------------------------------------------------- good reduction
enum class ReductionStatus { Good, Bad, Unknown };

struct ReductionCertificate {
  ReductionStatus status = ReductionStatus::Unknown;
  long p = 0;
  std::vector<Int> smooth_point;   // a nonsingular F_p-point (TRUE case)
  std::string detail;
};

ReductionCertificate good_reduction(const CanonicalModel& model, long p);

}  // namespace qp
