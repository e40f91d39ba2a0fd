#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qp/ffcurve.hpp"

using namespace qp;

static NewformSource data_source() {
  NewformSource src;
  src.cache_dir = std::filesystem::path(QP_DATA_DIR) / "newforms";
  src.offline = true;
  return src;
}

static CanonicalModel& model74() {
  static CanonicalModel m = [] {
    auto src = data_source();
    auto basis = assemble_basis(ingest_newforms(src, 74, 376), 74, 376);
    return canonical_ideal(basis);
  }();
  return m;
}

static PlaneModel& plane74() {
  static PlaneModel pm = plane_model(model74());
  return pm;
}

TEST_CASE("plane model of X_0(74): degree and curve relation") {
  auto& m = model74();
  auto& pm = plane74();
  CHECK(pm.curve.degree >= 8);  // at least g, Castelnuovo-type bound
  // the plane relation vanishes identically on the projection expansions
  std::vector<ZSeries> xyz{m.coords[pm.proj[0]], m.coords[pm.proj[1]], m.coords[pm.proj[2]]};
  auto rel = hpoly_eval_series(pm.curve, xyz);
  for (int n = rel.start; n < std::min(rel.prec, 250); ++n) CHECK(rel.at(n) == 0);
  if (pm.has_exact_inverse) {
    auto B = hpoly_eval_series(pm.inv_den, xyz);
    CHECK(!B.is_zero_to_prec());
    for (size_t mm = 0; mm < m.g; ++mm) {
      auto A = hpoly_eval_series(pm.inv_num[mm], xyz);
      auto rhs = series_mul(B, m.coords[mm]);
      auto diff = series_sub(A, rhs);
      for (int n = diff.start; n < std::min(diff.prec, 120); ++n) CHECK(diff.at(n) == 0);
    }
  }
}

TEST_CASE("point counts over F_3 and F_9 match Eichler-Shimura") {
  auto rm = reduce_model(model74(), plane74(), 3);
  auto& p1 = enumerate_points(rm, 1);
  CHECK(p1.size() == 6);  // 3 + 1 - tr T_3 = 4 - (-2)
  auto& p2 = enumerate_points(rm, 2);
  CHECK(p2.size() == 24);
  // the DFS route gives the same sets
  auto dfs1 = enumerate_points_dfs(rm, 1);
  CHECK(dfs1 == p1);
  // involutions permute the sets
  const FqField& F1 = extension_field(rm, 1);
  for (long q : {2L, 37L, 74L}) {
    std::vector<FqPoint> img;
    for (auto& pt : p1) img.push_back(apply_signs(rm, q, pt, F1));
    std::sort(img.begin(), img.end());
    CHECK(img == p1);
  }
  auto sym = symmetric_points(rm);
  CHECK(sym.size() == (6 * 6 + 24) / 2);
}

TEST_CASE("local jets satisfy the generators to higher order") {
  auto rm = reduce_model(model74(), plane74(), 5);
  auto& p1 = enumerate_points(rm, 1);
  REQUIRE(!p1.empty());
  const FqField& F = extension_field(rm, 1);
  for (auto& pt : p1) {
    auto lj = local_jets(rm, pt, F, 3);
    // plug jets into each generator: coefficients of t^0..t^3 vanish
    for (auto& gen : rm.gens) {
      std::vector<FqField::Elt> total(4, F.zero());
      for (auto& [e, c] : gen.terms) {
        std::vector<FqField::Elt> term{F.from_fp(c % F.fp.p)};
        for (size_t v = 0; v < rm.g; ++v)
          for (uint8_t k = 0; k < e[v]; ++k) {
            std::vector<FqField::Elt> nt(4, F.zero());
            for (size_t a = 0; a < term.size() && a < 4; ++a) {
              if (F.is_zero(term[a])) continue;
              for (size_t b = 0; a + b < 4; ++b)
                nt[a + b] = F.add(nt[a + b], F.mul(term[a], lj.jets[v][b]));
            }
            term = std::move(nt);
          }
        for (size_t a = 0; a < 4; ++a) total[a] = F.add(total[a], term[a]);
      }
      for (size_t a = 0; a < 4; ++a) CHECK(F.is_zero(total[a]));
    }
  }
}

TEST_CASE("frobenius preserves the curve and fixes only rational points") {
  auto rm = reduce_model(model74(), plane74(), 3);
  auto& p2 = enumerate_points(rm, 2);
  const FqField& F2 = extension_field(rm, 2);
  size_t fixed = 0;
  for (auto& pt : p2) {
    auto fr = frobenius_point(pt, F2);
    CHECK(on_curve(rm, fr, F2));
    if (fr == pt) ++fixed;
  }
  CHECK(fixed == enumerate_points(rm, 1).size());
}
