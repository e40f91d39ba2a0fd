#include "qp/intops.hpp"

#include <algorithm>

namespace qp {

std::vector<uint32_t> primes_below(uint32_t bound) {
  std::vector<bool> sieve(bound, true);
  std::vector<uint32_t> out;
  for (uint32_t i = 2; i < bound; ++i) {
    if (!sieve[i]) continue;
    out.push_back(i);
    for (uint64_t j = uint64_t(i) * i; j < bound; j += i) sieve[j] = false;
  }
  return out;
}

uint32_t next_prime_above(uint32_t n) {
  Int m(n);
  mpz_nextprime(m.get_mpz_t(), m.get_mpz_t());
  return static_cast<uint32_t>(m.get_ui());
}

namespace {

Int pollard_rho(const Int& n) {
  if (n % 2 == 0) return 2;
  gmp_randclass rng(gmp_randinit_default);
  rng.seed(12345);
  while (true) {
    Int x = rng.get_z_range(n - 2) + 2, y = x, c = rng.get_z_range(n - 1) + 1;
    Int d = 1;
    while (d == 1) {
      x = mod(x * x + c, n);
      y = mod(y * y + c, n);
      y = mod(y * y + c, n);
      d = gcd(abs(x - y), n);
    }
    if (d != n) return d;
  }
}

void factor_rec(Int n, std::vector<Int>& out) {
  if (n == 1) return;
  if (is_probable_prime(n)) {
    out.push_back(n);
    return;
  }
  Int d = pollard_rho(n);
  factor_rec(d, out);
  factor_rec(n / d, out);
}

}  // namespace

std::vector<std::pair<Int, unsigned>> factor(Int n) {
  if (n < 0) n = -n;
  if (n <= 1) return {};
  std::vector<Int> fl;
  for (uint32_t p : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
    while (n % p == 0) {
      fl.emplace_back(p);
      n /= p;
    }
  }
  factor_rec(n, fl);
  std::sort(fl.begin(), fl.end());
  std::vector<std::pair<Int, unsigned>> out;
  for (auto& p : fl) {
    if (!out.empty() && out.back().first == p)
      out.back().second++;
    else
      out.emplace_back(p, 1);
  }
  return out;
}

bool is_squarefree(const Int& n) {
  for (auto& [p, e] : factor(n))
    if (e > 1) return false;
  return true;
}

Int euler_phi(const Int& n) {
  Int r = 1;
  for (auto& [p, e] : factor(n)) r *= ipow(p, e - 1) * (p - 1);
  return r;
}

Int psi_index(const Int& n) {
  Int r = n;
  for (auto& [p, e] : factor(n)) r = r / p * (p + 1);
  return r;
}

std::vector<Int> divisors(const Int& n) {
  std::vector<Int> out{1};
  for (auto& [p, e] : factor(n)) {
    size_t sz = out.size();
    Int q = 1;
    for (unsigned i = 1; i <= e; ++i) {
      q *= p;
      for (size_t j = 0; j < sz; ++j) out.push_back(out[j] * q);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<Rat> rational_reconstruct(const Int& a, const Int& m) {
  Int bound = isqrt(m / 2);
  Int r0 = m, r1 = mod(a, m), s0 = 0, s1 = 1;
  while (r1 > bound) {
    Int q = r0 / r1;
    Int r2 = r0 - q * r1, s2 = s0 - q * s1;
    r0 = r1;
    r1 = r2;
    s0 = s1;
    s1 = s2;
  }
  if (s1 == 0 || abs(s1) > bound || gcd(r1, abs(s1)) != 1) return std::nullopt;
  Rat q(r1, s1);
  q.canonicalize();
  return q;
}

std::string to_string(const Int& a) { return a.get_str(); }
std::string to_string(const Rat& a) { return a.get_str(); }

Int parse_int(const std::string& s) { return Int(s); }

Rat parse_rat(const std::string& s) {
  Rat r(s);
  r.canonicalize();
  return r;
}

}  // namespace qp
