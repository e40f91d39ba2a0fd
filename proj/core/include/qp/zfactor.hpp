#pragma once
// Univariate factorization over Z/Q and over quadratic fields.

#include "qp/fppoly.hpp"
#include "qp/quadfield.hpp"

namespace qp {

using QPoly = Poly<RatField>;
using QuadPoly = Poly<QuadField>;

// gcd of primitive integer polynomials via modular images.
std::vector<Int> zpoly_gcd(const std::vector<Int>& a, const std::vector<Int>& b);

// Monic irreducible factors over Q with multiplicities (content dropped).
std::vector<std::pair<QPoly, unsigned>> factor_q(const QPoly& f);

// Rational roots with multiplicities.
std::vector<std::pair<Rat, unsigned>> roots_q(const QPoly& f);

// Monic irreducible factors over Q(sqrt d) with multiplicities.
std::vector<std::pair<QuadPoly, unsigned>> factor_quad(const QuadPoly& f, const QuadField& K);

// Roots in Q(sqrt d).
std::vector<std::pair<QuadElt, unsigned>> roots_quad(const QuadPoly& f, const QuadField& K);

}  // namespace qp
