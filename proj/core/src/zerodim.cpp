#include <algorithm>
#include <cassert>

#include "qp/zerodim.hpp"
#include "qp/zfactor.hpp"

namespace qp {

namespace {

// minimal polynomial over F_p of an element of F_{p^k}: prod (T - alpha^(p^j))
FqPoly fq_minpoly(const FqField::Elt& a, const FqField& F) {
  std::vector<FqField::Elt> conj{a};
  auto cur = F.frobenius(a);
  while (!F.eq(cur, a)) {
    conj.push_back(cur);
    cur = F.frobenius(cur);
  }
  FqPoly m = FqPoly::of({F.one()}, F);
  for (auto& c : conj) {
    FqPoly lin;
    lin.c = {F.neg(c), F.one()};
    m = poly_mul(m, lin, F);
  }
  return m;  // coefficients lie in the prime field
}

std::vector<uint64_t> fp_coeffs(const FqPoly& m, const FqField& F) {
  std::vector<uint64_t> out;
  for (auto& c : m.c) {
    if (!F.in_prime_field(c)) throw std::logic_error("fq_minpoly: not over the prime field");
    out.push_back(c.empty() ? 0 : c[0]);
  }
  return out;
}

struct PrimeData {
  long p;
  const ModpSolutionSet* sols;
  // per point: lambda value, its minpoly coefficients over F_p
  std::vector<FqField::Elt> lambda;
  std::vector<std::vector<uint64_t>> minpoly;
};

// lambda = sum c_i x_i with the chart coordinate normalized to 1
FqField::Elt eval_lambda(const std::vector<long>& c, const FqPoint& pt, const FqField& F) {
  auto acc = F.zero();
  for (size_t i = 0; i < pt.size(); ++i) {
    if (c[i] == 0) continue;
    auto w = F.from_int(Int(c[i]));
    acc = F.add(acc, F.mul(w, pt[i]));
  }
  return acc;
}

// rational polynomial from CRT residues, monic target of degree d
std::optional<QPoly> reconstruct_poly(const std::vector<std::pair<long, std::vector<uint64_t>>>& images,
                                      size_t d) {
  Int modulus = 1;
  std::vector<Int> acc(d + 1, 0);
  for (auto& [p, coeffs] : images) {
    if (coeffs.size() != d + 1) return std::nullopt;
    for (size_t i = 0; i <= d; ++i) acc[i] = crt(acc[i], modulus, Int(coeffs[i]), Int(p));
    modulus *= p;
  }
  QPoly out;
  out.c.resize(d + 1);
  for (size_t i = 0; i <= d; ++i) {
    auto r = rational_reconstruct(acc[i], modulus);
    if (!r) return std::nullopt;
    out.c[i] = *r;
  }
  RatField Q;
  out.normalize(Q);
  if (out.deg() != int(d)) return std::nullopt;
  return out;
}

}  // namespace

std::vector<NumberField::Elt> orbit_point(const AlgebraicPointOrbit& orbit,
                                          const NumberField& K) {
  std::vector<NumberField::Elt> out;
  for (auto& r : orbit.coords) {
    auto acc = K.zero();
    auto pw = K.one();
    for (int i = 0; i <= r.deg(); ++i) {
      acc = K.add(acc, K.mul(K.from_rat(r.c[i]), pw));
      pw = K.mul(pw, K.gen());
    }
    out.push_back(acc);
  }
  return out;
}

std::optional<std::pair<long, std::vector<QuadElt>>> orbit_as_quadratic(
    const AlgebraicPointOrbit& orbit) {
  if (orbit.minpoly.deg() != 2) return std::nullopt;
  // theta^2 + b theta + c = 0: theta = (-b + sqrt(b^2 - 4c)) / 2
  Rat b = orbit.minpoly.c[1], c = orbit.minpoly.c[0];
  Rat disc = b * b - 4 * c;
  if (disc == 0) return std::nullopt;
  // disc = (num/den): squarefree kernel of num*den
  Int num = disc.get_num(), den = disc.get_den();
  Int inner = num * den;
  Int sq = 1;
  long d = 1;
  {
    Int m = abs(inner);
    for (auto& [pp, e] : factor(m)) {
      if (e / 2 > 0) sq *= ipow(pp, e / 2);
      if (e % 2) d *= pp.get_si();
    }
    if (inner < 0) d = -d;
  }
  if (d == 1 || d == 0) return std::nullopt;
  // sqrt(disc) = (sq / den) sqrt(d)
  QuadField K(d);
  QuadElt sqrt_disc(d, Rat(0), Rat(sq) / Rat(den));
  QuadElt theta = K.mul(K.add(K.from_rat(-b), sqrt_disc), K.from_rat(Rat(1, 2)));
  std::vector<QuadElt> coords;
  for (auto& r : orbit.coords) {
    auto acc = K.zero();
    auto pw = K.one();
    for (int i = 0; i <= r.deg(); ++i) {
      acc = K.add(acc, K.mul(K.from_rat(r.c[i]), pw));
      pw = K.mul(pw, theta);
    }
    coords.push_back(acc);
  }
  return std::make_pair(d, coords);
}

std::vector<AlgebraicPointOrbit> reconstruct_orbits(const ZeroDimOptions& opt,
                                                    const ModpSolver& solver,
                                                    const OrbitVerifier& verify) {
  // collect solution sets
  std::vector<ModpSolutionSet> sets;
  for (long p : opt.primes) {
    if (sets.size() >= opt.max_primes) break;
    auto s = solver(p);
    if (s) sets.push_back(std::move(*s));
  }
  if (sets.size() < opt.min_primes)
    throw std::runtime_error("reconstruct_orbits: too few usable primes");

  // choose a separating linear functional
  std::vector<long> lam(opt.g, 0);
  bool separated = false;
  for (long t = 1; t <= 40 && !separated; ++t) {
    for (size_t i = 0; i < opt.g; ++i) lam[i] = (i == 0) ? 1 : (lam[i - 1] * t) % 97;
    separated = true;
    for (auto& s : sets) {
      std::vector<std::pair<size_t, std::vector<uint64_t>>> seen;  // (chart, minpoly)
      for (auto& [k, pt] : s.points) {
        const FqField& F = *s.fields[k];
        auto lv = eval_lambda(lam, pt, F);
        auto mp = fq_minpoly(lv, F);
        if (mp.deg() != int(k)) {
          separated = false;  // lambda does not generate the point's field
          break;
        }
        size_t chart = 0;
        while (chart < opt.g && F.is_zero(pt[chart])) ++chart;
        auto key = std::make_pair(chart, fp_coeffs(mp, F));
        if (std::find(seen.begin(), seen.end(), key) != seen.end()) {
          separated = false;  // collision within one prime
          break;
        }
        seen.push_back(std::move(key));
      }
      if (!separated) break;
    }
  }
  if (!separated) throw std::runtime_error("reconstruct_orbits: no separating functional");

  // per prime, per chart: point data
  struct PtData {
    unsigned k;
    const FqPoint* pt;
    std::vector<uint64_t> minpoly;
    FqField::Elt lambda;
  };
  std::map<size_t, std::vector<std::vector<PtData>>> by_chart;  // chart -> [prime][pt]
  for (size_t si = 0; si < sets.size(); ++si) {
    for (auto& [k, pt] : sets[si].points) {
      const FqField& F = *sets[si].fields[k];
      size_t chart = 0;
      while (chart < opt.g && F.is_zero(pt[chart])) ++chart;
      auto lv = eval_lambda(lam, pt, F);
      auto mp = fp_coeffs(fq_minpoly(lv, F), F);
      auto& bucket = by_chart[chart];
      bucket.resize(sets.size());
      bucket[si].push_back({k, &pt, std::move(mp), std::move(lv)});
    }
  }

  std::vector<AlgebraicPointOrbit> out;
  auto try_candidate = [&](size_t chart, const QPoly& h,
                           const std::vector<std::vector<PtData>>& buckets) {
    size_t d = size_t(h.deg());
    // interpolate coordinates using primes where h's roots appear exactly
    std::vector<std::pair<long, std::vector<std::vector<uint64_t>>>> images;  // p -> per-m coeffs
    size_t supporting = 0;
    for (size_t si = 0; si < sets.size(); ++si) {
      const auto& pts = buckets[si];
      // points whose minpoly divides h mod p
      FqField Fp = FqField::prime_field(uint64_t(sets[si].p));
      FqPoly hp;
      for (auto& c : h.c) {
        Int num = c.get_num(), den = c.get_den();
        if (mpz_fdiv_ui(den.get_mpz_t(), unsigned(sets[si].p)) == 0) {
          hp.c.clear();
          break;
        }
        uint64_t v = Fp.fp.mul(Fp.fp.from_int(num), Fp.fp.inv(Fp.fp.from_int(den)));
        hp.c.push_back(Fp.from_fp(v));
      }
      if (hp.c.empty()) continue;
      hp.normalize(Fp);
      std::vector<const PtData*> mine;
      size_t degsum = 0;
      for (auto& pd : pts) {
        // does pd.minpoly divide h mod p?
        FqPoly mp;
        for (auto c : pd.minpoly) mp.c.push_back(Fp.from_fp(c));
        mp.normalize(Fp);
        auto [q, r] = poly_divrem(hp, mp, Fp);
        if (r.is_zero()) {
          mine.push_back(&pd);
          degsum += pd.k;
        }
      }
      if (degsum != d) continue;  // this prime does not support the candidate
      ++supporting;
      // solve for coordinate interpolants R_m (degree < d) over F_p:
      // conditions R_m(lambda(P)) = x_m(P) over F_{p^k}
      std::vector<std::vector<uint64_t>> coeffs(opt.g);
      bool okp = true;
      // build the linear system once (Vandermonde-style rows over F_p)
      std::vector<std::vector<uint64_t>> rows;  // conditions x coefficients
      std::vector<std::vector<std::vector<uint64_t>>> rhs_rows(opt.g);
      for (auto* pd : mine) {
        const FqField& F = *sets[si].fields[pd->k];
        // powers of lambda
        std::vector<FqField::Elt> pw{F.one()};
        for (size_t j = 1; j < d; ++j) pw.push_back(F.mul(pw.back(), pd->lambda));
        for (unsigned comp = 0; comp < pd->k; ++comp) {
          std::vector<uint64_t> row(d);
          for (size_t j = 0; j < d; ++j) row[j] = pw[j][comp];
          rows.push_back(row);
          for (size_t m = 0; m < opt.g; ++m) {
            std::vector<uint64_t> val(1, (*pd->pt)[m][comp]);
            rhs_rows[m].push_back(val);
          }
        }
      }
      FpField fp{uint64_t(sets[si].p)};
      for (size_t m = 0; m < opt.g && okp; ++m) {
        Mat<FpField> A(rows.size(), d, fp);
        std::vector<uint64_t> b(rows.size());
        for (size_t r2 = 0; r2 < rows.size(); ++r2) {
          A.a[r2] = rows[r2];
          b[r2] = rhs_rows[m][r2][0];
        }
        auto x = mat_solve(A, b, fp);
        if (!x) {
          okp = false;
          break;
        }
        coeffs[m] = *x;
      }
      if (okp) images.emplace_back(sets[si].p, std::move(coeffs));
    }
    if (supporting * 5 < sets.size() * 4) return;  // below 80% consensus
    if (images.size() < opt.min_primes) return;
    // CRT + rational reconstruction of the R_m
    AlgebraicPointOrbit orbit;
    orbit.minpoly = h;
    orbit.chart = chart;
    orbit.coords.assign(opt.g, QPoly{});
    Int modulus = 1;
    std::vector<std::vector<Int>> acc(opt.g, std::vector<Int>(d, 0));
    for (auto& [p, coeffs] : images) {
      for (size_t m = 0; m < opt.g; ++m)
        for (size_t j = 0; j < d; ++j) acc[m][j] = crt(acc[m][j], modulus, Int(coeffs[m][j]), Int(p));
      modulus *= p;
    }
    RatField Q;
    for (size_t m = 0; m < opt.g; ++m) {
      QPoly r;
      r.c.resize(d);
      for (size_t j = 0; j < d; ++j) {
        auto rr = rational_reconstruct(acc[m][j], modulus);
        if (!rr) return;
        r.c[j] = *rr;
      }
      r.normalize(Q);
      orbit.coords[m] = std::move(r);
    }
    // dedupe
    for (auto& o : out)
      if (o.chart == orbit.chart && o.minpoly.c == orbit.minpoly.c && o.coords.size() == orbit.coords.size()) {
        bool same = true;
        for (size_t m = 0; m < opt.g; ++m)
          if (o.coords[m].c != orbit.coords[m].c) same = false;
        if (same) return;
      }
    if (verify(orbit)) out.push_back(std::move(orbit));
  };

  for (auto& [chart, buckets] : by_chart) {
    if (opt.whole_locus) {
      // consensus on the product polynomial of lambda over the whole chart group
      std::map<size_t, size_t> degree_votes;
      for (size_t si = 0; si < sets.size(); ++si) {
        size_t total = 0;
        for (auto& pd : buckets[si]) total += pd.k;
        degree_votes[total]++;
      }
      size_t best_deg = 0, best_votes = 0;
      for (auto& [deg, v] : degree_votes)
        if (v > best_votes) {
          best_votes = v;
          best_deg = deg;
        }
      if (best_deg == 0) continue;
      std::vector<std::pair<long, std::vector<uint64_t>>> images;
      for (size_t si = 0; si < sets.size(); ++si) {
        size_t total = 0;
        for (auto& pd : buckets[si]) total += pd.k;
        if (total != best_deg) continue;
        FqField Fp = FqField::prime_field(uint64_t(sets[si].p));
        FqPoly prod = FqPoly::of({Fp.one()}, Fp);
        for (auto& pd : buckets[si]) {
          FqPoly mp;
          for (auto c : pd.minpoly) mp.c.push_back(Fp.from_fp(c));
          mp.normalize(Fp);
          prod = poly_mul(prod, mp, Fp);
        }
        images.emplace_back(sets[si].p, fp_coeffs(prod, Fp));
      }
      auto M = reconstruct_poly(images, best_deg);
      if (!M) continue;
      for (auto& [h, mult] : factor_q(*M)) {
        if (h.deg() <= int(opt.max_orbit_degree)) try_candidate(chart, h, buckets);
      }
    } else {
      // match-and-verify: candidates from per-point minpolys of two primes
      std::vector<QPoly> cands;
      for (size_t s1 = 0; s1 < std::min<size_t>(3, sets.size()); ++s1)
        for (auto& pd1 : buckets[s1]) {
          if (pd1.k > opt.max_orbit_degree) continue;
          // try CRT with each later prime's matching-degree minpolys
          for (size_t s2 = s1 + 1; s2 < std::min<size_t>(s1 + 4, sets.size()); ++s2)
            for (auto& pd2 : buckets[s2]) {
              if (pd2.k != pd1.k) continue;
              std::vector<std::pair<long, std::vector<uint64_t>>> imgs{
                  {sets[s1].p, pd1.minpoly}, {sets[s2].p, pd2.minpoly}};
              auto h = reconstruct_poly(imgs, pd1.k);
              if (!h) continue;
              bool dup = false;
              for (auto& c : cands)
                if (c.c == h->c) dup = true;
              if (!dup) cands.push_back(*h);
            }
        }
      for (auto& h : cands) try_candidate(chart, h, buckets);
    }
  }
  return out;
}

}  // namespace qp
