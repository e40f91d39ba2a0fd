#pragma once
// Arbitrary-precision integer/rational helpers on top of GMP.

#include <gmpxx.h>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qp {

using Int = mpz_class;
using Rat = mpq_class;

inline Int gcd(const Int& a, const Int& b) {
  Int r;
  mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline Int lcm(const Int& a, const Int& b) {
  Int r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline Int ipow(Int base, unsigned long e) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

inline Int isqrt(const Int& a) {
  Int r;
  mpz_sqrt(r.get_mpz_t(), a.get_mpz_t());
  return r;
}

inline bool is_square(const Int& a) {
  return a >= 0 && mpz_perfect_square_p(a.get_mpz_t()) != 0;
}

inline bool is_probable_prime(const Int& n) {
  return mpz_probab_prime_p(n.get_mpz_t(), 32) != 0;
}

// a^-1 mod m; throws if not invertible.
inline Int invmod(const Int& a, const Int& m) {
  Int r;
  if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
    throw std::domain_error("invmod: not invertible");
  return r;
}

inline Int mod(const Int& a, const Int& m) {
  Int r;
  mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

// Symmetric remainder in (-m/2, m/2].
inline Int smod(const Int& a, const Int& m) {
  Int r = mod(a, m);
  if (2 * r > m) r -= m;
  return r;
}

std::vector<uint32_t> primes_below(uint32_t bound);
uint32_t next_prime_above(uint32_t n);

// Prime factorization (trial division + Pollard rho); exponents paired.
std::vector<std::pair<Int, unsigned>> factor(Int n);

// Squarefree test / radical for small-ish integers.
bool is_squarefree(const Int& n);

// Euler phi and the index psi(N) = N prod_{p|N} (1+1/p).
Int euler_phi(const Int& n);
Int psi_index(const Int& n);

// Divisors of n in increasing order.
std::vector<Int> divisors(const Int& n);

// CRT: combine x ≡ a (mod m), x ≡ b (mod n) with gcd(m,n)=1.
inline Int crt(const Int& a, const Int& m, const Int& b, const Int& n) {
  Int u = invmod(m, n);
  Int t = mod((b - a) * u, n);
  return a + m * t;
}

// Rational reconstruction of r/s ≡ a (mod m) with |r|,s <= sqrt(m/2).
std::optional<Rat> rational_reconstruct(const Int& a, const Int& m);

std::string to_string(const Int& a);
std::string to_string(const Rat& a);
Int parse_int(const std::string& s);
Rat parse_rat(const std::string& s);

}  // namespace qp
