#include "qp/fppoly.hpp"

namespace qp {

namespace {

uint64_t splitmix(uint64_t& s) {
  s += 0x9e3779b97f4a7c15ull;
  uint64_t z = s;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

FqPoly random_poly(unsigned deg, const FqField& F, uint64_t& seed) {
  FqPoly r;
  r.c.resize(deg + 1, F.zero());
  for (unsigned i = 0; i <= deg; ++i) {
    auto e = F.zero();
    for (unsigned j = 0; j < F.k; ++j) e[j] = splitmix(seed) % F.fp.p;
    r.c[i] = e;
  }
  r.normalize(F);
  return r;
}

// Equal-degree splitting of a squarefree product of degree-d irreducibles.
void edf(const FqPoly& f, unsigned d, const FqField& F,
         std::vector<FqPoly>& out, uint64_t& seed) {
  if (f.deg() == int(d)) {
    out.push_back(poly_monic(f, F));
    return;
  }
  Int q = F.order();
  FqPoly a;
  while (true) {
    a = random_poly(2 * d + 1, F, seed);
    if (a.deg() < 1) continue;
    auto g = poly_gcd(f, a, F);
    if (g.deg() > 0 && g.deg() < f.deg()) {
      edf(g, d, F, out, seed);
      edf(poly_divrem(f, g, F).first, d, F, out, seed);
      return;
    }
    if (F.fp.p == 2) {
      // trace map splitting
      FqPoly t = a, acc = a;
      Int qd = ipow(Int(2), d * F.k);
      for (Int i = 2; i < qd; i *= 2) {
        t = poly_mod(poly_mul(t, t, F), f, F);
        acc = poly_add(acc, t, F);
      }
      g = poly_gcd(f, acc, F);
    } else {
      Int e = (ipow(q, d) - 1) / 2;
      auto b = poly_powmod(a, e, f, F);
      b = poly_sub(b, FqPoly::of({F.one()}, F), F);
      g = poly_gcd(f, b, F);
    }
    if (g.deg() > 0 && g.deg() < f.deg()) {
      edf(g, d, F, out, seed);
      edf(poly_divrem(f, g, F).first, d, F, out, seed);
      return;
    }
  }
}

}  // namespace

std::vector<std::pair<FqPoly, unsigned>> fq_factor(FqPoly f, const FqField& F) {
  std::vector<std::pair<FqPoly, unsigned>> out;
  if (f.deg() < 1) return out;
  f = poly_monic(f, F);
  uint64_t seed = 0x5eedf00dULL + F.fp.p;

  // split off repeated factors: work with f/gcd(f,f') and recurse on gcd
  while (f.deg() > 0) {
    auto der = poly_deriv(f, F);
    FqPoly sqf;
    if (der.is_zero()) {
      // f = g(x^p): take p-th "root" by coefficient Frobenius-inverse
      unsigned p = unsigned(F.fp.p);
      FqPoly g;
      g.c.resize(f.deg() / p + 1, F.zero());
      Int e = F.order() / Int(F.fp.p);
      for (size_t i = 0; i < g.c.size(); ++i) g.c[i] = F.pow(f.c[i * p], e);
      g.normalize(F);
      auto sub = fq_factor(g, F);
      for (auto& [h, m] : sub) out.emplace_back(h, m * p);
      // merge duplicates at the end
      f = FqPoly{};
      break;
    }
    sqf = poly_divrem(f, poly_gcd(f, der, F), F).first;  // squarefree part
    // distinct-degree on sqf
    FqPoly h = FqPoly::of({F.zero(), F.one()}, F);  // x
    FqPoly rem = sqf;
    unsigned d = 0;
    Int q = F.order();
    while (rem.deg() >= 1) {
      ++d;
      if (2 * int(d) > rem.deg()) {
        // remaining is irreducible
        std::vector<FqPoly> irr{poly_monic(rem, F)};
        for (auto& g : irr) {
          unsigned mult = 0;
          while (true) {
            auto [quo, r] = poly_divrem(f, g, F);
            if (!r.is_zero()) break;
            f = quo;
            ++mult;
          }
          out.emplace_back(g, mult);
        }
        rem = FqPoly::of({F.one()}, F);
        break;
      }
      h = poly_powmod(h, q, sqf, F);
      auto xdiff = poly_sub(h, FqPoly::of({F.zero(), F.one()}, F), F);
      auto g = poly_gcd(rem, xdiff, F);
      if (g.deg() > 0) {
        std::vector<FqPoly> irr;
        edf(g, d, F, irr, seed);
        for (auto& gi : irr) {
          unsigned mult = 0;
          while (true) {
            auto [quo, r] = poly_divrem(f, gi, F);
            if (!r.is_zero()) break;
            f = quo;
            ++mult;
          }
          out.emplace_back(gi, mult);
        }
        rem = poly_divrem(rem, g, F).first;
      }
    }
    if (f.deg() == 0) break;
  }
  // merge duplicate factors
  std::vector<std::pair<FqPoly, unsigned>> merged;
  for (auto& [g, m] : out) {
    bool found = false;
    for (auto& [h, n] : merged)
      if (h.c == g.c) {
        n += m;
        found = true;
        break;
      }
    if (!found) merged.emplace_back(g, m);
  }
  return merged;
}

std::vector<FqField::Elt> fq_roots(const FqPoly& f, const FqField& F) {
  std::vector<FqField::Elt> out;
  if (f.deg() < 1) return out;
  // gcd with x^q - x isolates the split part
  auto x = FqPoly::of({F.zero(), F.one()}, F);
  auto xq = poly_powmod(x, F.order(), f, F);
  auto split = poly_gcd(poly_sub(xq, x, F), f, F);
  if (split.deg() < 1) return out;
  auto factors = fq_factor(split, F);
  for (auto& [g, m] : factors)
    if (g.deg() == 1) out.push_back(F.neg(g.c[0]));
  return out;
}

bool fq_is_irreducible(const FqPoly& f, const FqField& F) {
  if (f.deg() < 1) return false;
  if (f.deg() == 1) return true;
  auto fs = fq_factor(f, F);
  return fs.size() == 1 && fs[0].second == 1;
}

std::vector<uint64_t> irreducible_poly(uint64_t p, unsigned k) {
  FqField F = FqField::prime_field(p);
  // deterministic scan over monic polynomials of degree k
  std::vector<uint64_t> c(k + 1, 0);
  c[k] = 1;
  while (true) {
    FqPoly f;
    f.c.resize(k + 1);
    for (unsigned i = 0; i <= k; ++i) f.c[i] = F.from_fp(c[i] % p);
    f.normalize(F);
    if (f.deg() == int(k) && fq_is_irreducible(f, F)) {
      return c;
    }
    // increment base-p counter over c[0..k-1]
    unsigned i = 0;
    while (i < k) {
      c[i]++;
      if (c[i] < p) break;
      c[i] = 0;
      ++i;
    }
    if (i == k) throw std::logic_error("irreducible_poly: exhausted");
  }
}

std::optional<FqField::Elt> fq_sqrt(const FqField::Elt& a, const FqField& F) {
  if (F.is_zero(a)) return a;
  Int q = F.order();
  if (F.fp.p == 2) throw std::domain_error("fq_sqrt: p=2 unsupported");
  // Euler criterion
  auto leg = F.pow(a, (q - 1) / 2);
  if (!F.eq(leg, F.one())) return std::nullopt;
  // factor x^2 - a
  FqPoly f;
  f.c = {F.neg(a), F.zero(), F.one()};
  auto roots = fq_roots(f, F);
  if (roots.empty()) return std::nullopt;
  return roots[0];
}

}  // namespace qp
