#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qp/models.hpp"

using namespace qp;

static NewformSource data_source() {
  NewformSource src;
  src.cache_dir = std::filesystem::path(QP_DATA_DIR) / "newforms";
  src.offline = true;
  return src;
}

static CanonicalModel build_model(long N) {
  auto src = data_source();
  size_t nmax = 0;
  {
    long g = ManinSymbols::genus_formula(N);
    long psi = psi_index(Int(N)).get_si();
    long twog2 = 2 * (g - 1);
    long r = (2 * psi + twog2) / (2 * twog2) + 1;
    long m = twog2 * r + 1 + psi;
    nmax = size_t(std::max(5 * N, m + 10) + 2);
  }
  auto basis = assemble_basis(ingest_newforms(src, N, nmax), N, int(nmax));
  return canonical_ideal(basis);
}

TEST_CASE("diagonalised model of X_0(74): structure") {
  auto model = build_model(74);
  CHECK(model.g == 8);
  // dim I_2 = 36 - 21 = 15
  CHECK(model.gens.size() == 15);
  for (auto& q : model.gens) CHECK(q.degree == 2);
  // w_37 sign vector has four +1 entries (quotient genus 4)
  auto& s37 = model.al.signs.at(37);
  int plus = 0;
  for (int s : s37)
    if (s == 1) ++plus;
  CHECK(plus == 4);
  // every generator vanishes on the coordinate expansions
  for (auto& q : model.gens) {
    auto s = hpoly_eval_series(q, model.coords);
    for (int n = s.start; n < s.prec; ++n) CHECK(s.at(n) == 0);
  }
  // sign vectors multiply by the group law
  auto& s2 = model.al.signs.at(2);
  auto& s74 = model.al.signs.at(74);
  for (size_t i = 0; i < model.g; ++i) CHECK(s2[i] * s37[i] == s74[i]);
  // ideal is sign-stable: every generator is sign-isotypic
  for (auto& q : model.gens) {
    for (long w : model.al.group) {
      int ref = 0;
      for (auto& [e, c] : q.terms) {
        int sg = 1;
        for (size_t i = 0; i < model.g; ++i)
          if (e[i] % 2) sg *= model.al.signs.at(w)[i];
        if (ref == 0) ref = sg;
        CHECK(sg == ref);
      }
    }
  }
}

TEST_CASE("graded dimensions for the genus-10 and genus-7 levels") {
  auto m127 = build_model(127);
  CHECK(m127.g == 10);
  CHECK(m127.gens.size() == 28);  // 55 - 27
  auto m85 = build_model(85);
  CHECK(m85.g == 7);
  CHECK(m85.gens.size() == 10);  // 28 - 18
  // joint signs of (w_5, w_17) partition the 7 coordinates into 4 classes
  std::map<std::pair<int, int>, int> cls;
  for (size_t i = 0; i < 7; ++i)
    cls[{m85.al.signs.at(5)[i], m85.al.signs.at(17)[i]}]++;
  CHECK(cls.size() == 4);
  long sum = 0;
  for (auto& [k, v] : cls) sum += v;
  CHECK(sum == 7);
}

TEST_CASE("j-map on X_0(74): starting degree, certification, and j-expansion") {
  auto model = build_model(74);
  fit_jmap(model);
  auto& pair = model.jmap.primary();
  CHECK(pair.r == 9);           // smallest integer > 114/14 + 1/2
  CHECK(pair.m == 14 * 9 + 1 + 114);  // = 241
  CHECK(model.jmap.d_j == 114);
  // residual F(f) - j G(f) vanishes identically through m-1, exactly
  auto Ff = hpoly_eval_series(pair.F, model.coords);
  auto Gf = hpoly_eval_series(pair.G, model.coords);
  auto j = classical_series("j", int(pair.m) + 1);
  auto prod = series_mul(to_qseries(j), to_qseries(Gf));
  auto resid = series_sub(to_qseries(Ff), prod);
  for (int n = resid.start; n < std::min(resid.prec, int(pair.m)); ++n)
    CHECK(resid.at(n) == 0);
  // the fitted map reproduces 1/q + 744 + 196884 q
  // (j = F(f)/G(f) as series)
  auto ginv = series_inv(to_qseries(Gf));
  auto jfit = series_mul(to_qseries(Ff), ginv);
  CHECK(jfit.at(-1) == 1);
  CHECK(jfit.at(0) == 744);
  CHECK(jfit.at(1) == 196884);
}

TEST_CASE("j-map starting degree for the prime level 97") {
  // r = smallest integer > 98/12 + 1/2 = 9.6... -> 10? No: 98/12 = 8.1667,
  // + 0.5 = 8.667 -> r = 9
  long psi = 98, twog2 = 12;
  long r = (2 * psi + twog2) / (2 * twog2) + 1;
  CHECK(r == 9);
}

TEST_CASE("cusp places: squarefree level 74 and reconstruction level 100") {
  auto m74 = build_model(74);
  fit_jmap(m74);
  auto pm74 = plane_model(m74);
  cusp_places(m74, pm74);
  CHECK(m74.cusps.size() == 4);
  for (auto& c : m74.cusps) CHECK(c.minpoly.deg() == 1);  // all rational

  auto m100 = build_model(100);
  fit_jmap(m100);
  auto pm100 = plane_model(m100);
  cusp_places(m100, pm100);
  // 6 rational cusps + 3 quartic orbits
  long rational = 0, quartic = 0;
  for (auto& c : m100.cusps) {
    if (c.minpoly.deg() == 1) ++rational;
    if (c.minpoly.deg() == 4) ++quartic;
  }
  CHECK(rational == 6);
  CHECK(quartic == 3);
}
