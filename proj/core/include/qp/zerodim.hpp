#pragma once
// Characteristic-zero points of zero-dimensional loci on the models, rebuilt
// from reductions at several primes: rational reconstruction of minimal
// polynomials and coordinate interpolants, then exact verification. Two
// modes: whole-locus (stable counts across primes) and match-and-verify
// (per-point consensus, robust to spurious mod-p solutions).

#include <functional>

#include "qp/ffcurve.hpp"
#include "qp/numberfield.hpp"

namespace qp {

// a Galois orbit of algebraic points in P^(g-1), coordinates in Q[t]/(minpoly)
struct AlgebraicPointOrbit {
  QPoly minpoly;               // monic irreducible; degree 1 = rational point
  size_t chart = 0;            // coordinate normalized to 1
  std::vector<QPoly> coords;   // length g, degree < deg(minpoly)
  long tag = 0;                // caller bookkeeping (e.g. cusp width)

  unsigned degree() const { return unsigned(minpoly.deg()); }
};

// mod-p solutions for one prime: points over F_{p^k} (one representative per
// Frobenius orbit, normalized), with their field
struct ModpSolutionSet {
  long p = 0;
  const FqField* fields[11] = {};  // degree -> field (borrowed)
  std::vector<std::pair<unsigned, FqPoint>> points;  // (field degree, point)
};

using ModpSolver = std::function<std::optional<ModpSolutionSet>(long p)>;

// exact verifier for a candidate orbit; returns false to discard
using OrbitVerifier = std::function<bool(const AlgebraicPointOrbit&)>;

struct ZeroDimOptions {
  size_t g = 0;                  // ambient coordinate count
  std::vector<long> primes;      // candidate primes, in order of use
  unsigned max_orbit_degree = 10;
  bool whole_locus = true;       // counts must agree across primes
  size_t min_primes = 3;
  size_t max_primes = 40;
};

// reconstruct all orbits (whole-locus mode) or all orbits of degree
// <= max_orbit_degree surviving consensus (match mode)
std::vector<AlgebraicPointOrbit> reconstruct_orbits(const ZeroDimOptions& opt,
                                                    const ModpSolver& solver,
                                                    const OrbitVerifier& verify);

// evaluate the coordinates of an orbit representative in its number field
std::vector<NumberField::Elt> orbit_point(const AlgebraicPointOrbit& orbit,
                                          const NumberField& K);

// orbit whose field is quadratic: extract (d, coordinates over Q(sqrt d))
std::optional<std::pair<long, std::vector<QuadElt>>> orbit_as_quadratic(
    const AlgebraicPointOrbit& orbit);

}  // namespace qp
