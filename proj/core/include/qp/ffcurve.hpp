#pragma once
// Reductions of canonical models mod p: point enumeration over F_{p^k}
// (plane-model driven, with fiber fallbacks), degree-2 symmetric places,
// and local expansions at smooth points.

#include "qp/fppoly.hpp"
#include "qp/models.hpp"

namespace qp {

// sparse multivariate polynomial over F_p (coefficients reduced)
struct FpMPoly {
  int degree = 0;
  size_t nvars = 0;
  std::vector<std::pair<Expo, uint64_t>> terms;

  static FpMPoly reduce(const ZHPoly& p, const FpField& f) {
    FpMPoly out;
    out.degree = p.degree;
    out.nvars = p.nvars;
    for (auto& [e, c] : p.terms) {
      uint64_t r = f.from_int(c);
      if (r) out.terms.emplace_back(e, r);
    }
    return out;
  }
  // evaluation over an extension field
  FqField::Elt eval(const std::vector<FqField::Elt>& x, const FqField& F) const {
    auto acc = F.zero();
    for (auto& [e, c] : terms) {
      auto t = F.from_fp(c % F.fp.p);
      for (size_t i = 0; i < e.size(); ++i)
        for (uint8_t k = 0; k < e[i]; ++k) t = F.mul(t, x[i]);
      acc = F.add(acc, t);
    }
    return acc;
  }
  FpMPoly derivative(size_t var) const {
    FpMPoly out;
    out.degree = degree > 0 ? degree - 1 : 0;
    out.nvars = nvars;
    for (auto& [e, c] : terms) {
      if (e[var] == 0) continue;
      Expo e2 = e;
      e2[var]--;
      out.terms.emplace_back(e2, c * e[var]);  // caller reduces via eval's % p
    }
    return out;
  }
};

using FqPoint = std::vector<FqField::Elt>;  // normalized projective coordinates

struct ReducedModel {
  long N = 0, p = 0;
  size_t g = 0;
  std::vector<FpMPoly> gens;
  std::map<long, std::vector<int>> signs;  // Atkin-Lehner sign vectors
  // plane model data mod p
  std::array<size_t, 3> proj{};
  FpMPoly plane, inv_den;
  std::vector<FpMPoly> inv_num;
  // enumerated points (filled on demand)
  std::map<unsigned, std::vector<FqPoint>> points;  // field degree k -> X(F_{p^k})
  std::map<unsigned, FqField> fields;               // degree k -> F_{p^k}
  const CanonicalModel* model = nullptr;
};

ReducedModel reduce_model(const CanonicalModel& model, const PlaneModel& pm, long p);

// field of degree k over F_p (cached in rm)
const FqField& extension_field(ReducedModel& rm, unsigned k);

// all points of X(F_{p^k}); complete, deterministic order. For k >= 3 the
// rare fibers over singular-or-denominator-zero plane points are skipped
// (consumers at those degrees tolerate gaps; exact counts live at k <= 2)
const std::vector<FqPoint>& enumerate_points(ReducedModel& rm, unsigned k);

// independent chart-wise depth-first enumeration (cross-check path, small k)
std::vector<FqPoint> enumerate_points_dfs(ReducedModel& rm, unsigned k);

// apply an Atkin-Lehner sign vector to a point, renormalized
FqPoint apply_signs(const ReducedModel& rm, long q, const FqPoint& pt, const FqField& F);

// degree-2 places of the reduction
struct DegreeTwoPlace {
  enum Kind { Split, Doubled, Inert } kind;
  FqPoint a, b;  // split: two F_p points; doubled: a = b; inert: a over F_{p^2},
                 // b its Frobenius conjugate
};

std::vector<DegreeTwoPlace> symmetric_points(ReducedModel& rm);

// jets of the affine coordinates along a local parameter at a smooth point:
// result[m][o] = o-th coefficient of x_m/x_chart, orders 0..order
struct LocalJets {
  size_t chart;        // coordinate normalized to 1
  size_t uniformizer;  // coordinate whose affine function is the parameter
  std::vector<std::vector<FqField::Elt>> jets;
};

LocalJets local_jets(const ReducedModel& rm, const FqPoint& pt, const FqField& F,
                     unsigned order);

// local expansions (a0, a1) of the annihilating differentials at an F_p or
// F_{p^2} point: differential index i gives x_i(t) dt in the chart
struct LocalExpansion {
  std::vector<FqField::Elt> a0, a1;  // per requested differential index
};

LocalExpansion local_expansion(const ReducedModel& rm, const FqPoint& pt, const FqField& F,
                               const std::vector<size_t>& diff_indices);

// canonical normalization of a projective point (first nonzero coord = 1)
FqPoint normalize_point(FqPoint pt, const FqField& F);

bool on_curve(const ReducedModel& rm, const FqPoint& pt, const FqField& F);

FqPoint frobenius_point(const FqPoint& pt, const FqField& F);

}  // namespace qp
