#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qp/modforms.hpp"
#include "qp/numberfield.hpp"
#include "qp/zfactor.hpp"
#include <fstream>
#include <sstream>

using namespace qp;

static NewformSource data_source() {
  NewformSource src;
  src.cache_dir = std::filesystem::path(QP_DATA_DIR) / "newforms";
  src.offline = true;
  return src;
}

TEST_CASE("level invariants") {
  auto li74 = level_invariants(74);
  CHECK(li74.psi == 114);
  CHECK(li74.genus == 8);
  CHECK(li74.cusp_orbits.size() == 4);  // all rational for squarefree 2*37
  long width_sum = 0;
  for (auto& c : li74.cusp_orbits) width_sum += c.width * c.degree;
  CHECK(width_sum == 114);

  auto li97 = level_invariants(97);
  CHECK(li97.psi == 98);
  auto li80 = level_invariants(80);
  CHECK(li80.genus == 7);
  long quad = 0;
  for (auto& c : li80.cusp_orbits)
    if (c.degree == 2) ++quad;
  CHECK(quad == 2);  // two quadratic cusp orbits
  CHECK(li80.al_group == std::vector<long>{5, 16, 80});
}

TEST_CASE("newform record round trip is byte exact") {
  auto src = data_source();
  auto path = src.cache_dir / "N=74,n=376.nft";
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  std::string text = ss.str();
  auto orbits = parse_newform_records(text);
  CHECK(write_newform_records(orbits) == text);
}

TEST_CASE("ingest validates and covers all divisor levels") {
  auto src = data_source();
  auto orbits97 = ingest_newforms(src, 97, 98);
  long dim = 0;
  for (auto& f : orbits97) dim += f.dim;
  CHECK(dim == 7);
  for (auto& f : orbits97) CHECK(f.level == 97);

  auto orbits74 = ingest_newforms(src, 74, 300);
  long total = 0;
  for (auto& f : orbits74) total += long(divisors(Int(74 / f.level)).size()) * long(f.dim);
  CHECK(total == 8);

  CHECK(ingest_newforms(src, 1, 10).empty());
}

TEST_CASE("assembled basis dimension equals the genus for all fifteen levels") {
  auto src = data_source();
  std::vector<std::pair<long, long>> table = {{58, 6},  {68, 7},  {74, 8},  {76, 8},
                                              {80, 7},  {85, 7},  {97, 7},  {98, 7},
                                              {100, 7}, {103, 8}, {107, 9}, {109, 8},
                                              {113, 9}, {121, 6}, {127, 10}};
  for (auto& [N, g] : table) {
    auto basis = assemble_basis(ingest_newforms(src, N, 80), N, 80);
    CHECK(basis.g == size_t(g));
    for (auto& b : basis.basis) CHECK(b.valuation() >= 1);
  }
}

TEST_CASE("level 58 basis contains stretched level-29 embeddings") {
  auto src = data_source();
  auto basis = assemble_basis(ingest_newforms(src, 58, 120), 58, 120);
  CHECK(basis.g == 6);
  int stretched = 0;
  for (auto& r : basis.raw)
    if (r.t == 2) ++stretched;
  CHECK(stretched == 2);  // dim S2(29) = 2 embeds twice
}

TEST_CASE("atkin-lehner matrices: involution, commutation, group law") {
  auto src = data_source();
  RatField Q;
  for (long N : {74L, 85L, 80L}) {
    auto basis = assemble_basis(ingest_newforms(src, N, 200), N, 200);
    auto li = level_invariants(N);
    std::vector<Mat<RatField>> ws;
    for (long q : li.al_group) {
      auto w = atkin_lehner_matrix(basis, q);
      auto w2 = mat_mul(w, w, Q);
      CHECK(w2.a == Mat<RatField>::identity(basis.g, Q).a);
      ws.push_back(w);
    }
    // group law: w_{Q1} w_{Q2} = w_{Q1 Q2 / gcd^2}
    for (size_t i = 0; i < li.al_group.size(); ++i)
      for (size_t j = 0; j < li.al_group.size(); ++j) {
        long q1 = li.al_group[i], q2 = li.al_group[j];
        Int g2 = gcd(Int(q1), Int(q2));
        long q3 = long(q1 * q2 / (g2.get_si() * g2.get_si()));
        auto prod = mat_mul(ws[i], ws[j], Q);
        if (q3 == 1)
          CHECK(prod.a == Mat<RatField>::identity(basis.g, Q).a);
        else
          CHECK(prod.a == atkin_lehner_matrix(basis, q3).a);
      }
    // Hecke commutation at ell = 3 (or 7 when 3 | N)
    long ell = (N % 3) ? 3 : 7;
    auto t = hecke_matrix(basis, ell);
    for (auto& w : ws) CHECK(mat_mul(t, w, Q).a == mat_mul(w, t, Q).a);
  }
}

TEST_CASE("hecke eigenvalue on an eigenform component (prime level)") {
  auto src = data_source();
  auto basis = assemble_basis(ingest_newforms(src, 109, 150), 109, 150);
  auto t3 = hecke_matrix(basis, 3);
  // trace of T_3 equals the sum of a_3 over the eigensystem
  Rat tr(0);
  for (size_t i = 0; i < basis.g; ++i) tr += t3[i][i];
  Rat expect(0);
  for (auto& f : basis.orbits) {
    QPoly h;
    for (auto& c : f.field_poly) h.c.emplace_back(c);
    h.normalize(RatField{});
    NumberField K(h);
    expect += K.trace(f.a(3));
  }
  CHECK(tr == expect);
}

TEST_CASE("classical series") {
  auto j = classical_series("j", 3);
  CHECK(j.at(-1) == 1);
  CHECK(j.at(0) == 744);
  CHECK(j.at(1) == 196884);
  CHECK(j.at(2) == 21493760);

  auto delta = classical_series("Delta", 6);
  CHECK(delta.at(1) == 1);
  CHECK(delta.at(2) == -24);
  CHECK(delta.at(3) == 252);
  CHECK(delta.at(4) == -1472);

  // E4^3 / Delta = j to precision 500 (division oracle)
  auto e4 = classical_series("E4", 502);
  auto d = classical_series("Delta", 502);
  auto jj = classical_series("j", 500);
  auto e43 = series_mul(series_mul(e4, e4), e4);
  e43.prec = 502;
  auto lhs = series_mul(to_qseries(e43), series_inv(to_qseries(d)));
  for (int n = -1; n < 500; ++n) CHECK(lhs.at(n) == Rat(jj.at(n)));
}
