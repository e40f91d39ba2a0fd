#pragma once
// Newform data ingestion and cusp form bases for X_0(N): integral bases of
// S_2(N) with Hecke / Atkin-Lehner operator matrices, classical series, and
// level invariants.

#include <filesystem>
#include <optional>

#include "qp/matrix.hpp"
#include "qp/modsym.hpp"
#include "qp/series.hpp"

namespace qp {

struct LevelInvariants {
  long N = 1;
  long genus = 0;
  Int psi;         // N prod_{p|N} (1 + 1/p)
  Int jmap_degree; // = psi
  struct CuspOrbit {
    long den;     // divisor d | N (cusp denominator)
    long width;   // N / (d gcd(d, N/d))
    long degree;  // phi(gcd(d, N/d)) = size of the Galois orbit
  };
  std::vector<CuspOrbit> cusp_orbits;
  std::vector<long> al_primepowers;  // p^e || N, one per prime factor
  std::vector<long> al_group;        // all Q || N, Q > 1
};

LevelInvariants level_invariants(long N);

// ------------------------------------------------------------ data substrate

// Line-delimited record format, one block per Galois orbit:
//   begin <level> <weight> <label>
//   poly <c0> <c1> ... (monic defining polynomial, low -> high)
//   al <Q> <sign>
//   an <n> <x0> <x1> ... (power-basis coordinates, canonical rationals)
//   end
std::string write_newform_records(const std::vector<NewformData>& orbits);
std::vector<NewformData> parse_newform_records(const std::string& text);

struct NewformSource {
  std::filesystem::path cache_dir;
  std::string base_url;  // empty => offline (cache only)
  bool offline = true;
  int retries = 3;
};

// All newform orbits of the levels M | N with positive new dimension,
// with coefficient precision >= nmax; validated (a_1 = 1, multiplicativity
// spot checks). Fetches through the cache; offline mode never touches the
// network.
std::vector<NewformData> ingest_newforms(const NewformSource& src, long N, size_t nmax);

// --------------------------------------------------------------- cusp forms

struct CuspformBasis {
  long N = 1;
  size_t g = 0;
  int nmax = 0;
  std::vector<ZSeries> basis;  // integral, HNF-reduced, dimension g
  // raw elements: (orbit index, power-basis coordinate, stretch t)
  struct RawElement {
    size_t orbit;
    unsigned coord;
    long t;
  };
  std::vector<RawElement> raw;
  std::vector<NewformData> orbits;
  Mat<RatField> change;      // basis = change * raw
  Mat<RatField> change_inv;  // raw = change_inv * basis
  std::vector<std::string> provenance;

  mutable std::map<long, Mat<RatField>> al_cache;
  mutable std::map<long, Mat<RatField>> hecke_cache;
};

CuspformBasis assemble_basis(std::vector<NewformData> orbits, long N, int nmax);

// g x g integer-entried matrix of T_ell on the basis, ell prime, ell !| N.
Mat<RatField> hecke_matrix(const CuspformBasis& basis, long ell);

// Rational involution matrix of w_Q on the basis, Q || N. Validated:
// involution, Hecke commutation, group closure.
Mat<RatField> atkin_lehner_matrix(const CuspformBasis& basis, long Q);

// classical q-series: "j" (starts at q^-1), "E4", "Delta"
ZSeries classical_series(const std::string& name, int prec);

}  // namespace qp
