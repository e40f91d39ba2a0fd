#include <algorithm>
#include <set>
#include <cmath>

#include "qp/models.hpp"
#include "qp/zerodim.hpp"

namespace qp {

namespace {

// exact verification of an orbit: lies on the ideal, G = 0, F != 0
bool verify_cusp_orbit(const CanonicalModel& model, const AlgebraicPointOrbit& orbit) {
  NumberField K(orbit.minpoly);
  auto pt = orbit_point(orbit, K);
  auto conv = [&](const Int& c) { return K.from_int(c); };
  struct Wrap {
    NumberField::Elt v;
    const NumberField* K;
    Wrap operator*(const Wrap& o) const { return {K->mul(v, o.v), K}; }
    Wrap operator+(const Wrap& o) const { return {K->add(v, o.v), K}; }
  };
  std::vector<Wrap> x;
  for (auto& c : pt) x.push_back({c, &K});
  auto evalp = [&](const ZHPoly& p) {
    Wrap acc{K.zero(), &K};
    for (auto& [e, c] : p.terms) {
      Wrap t{conv(c), &K};
      for (size_t i = 0; i < e.size(); ++i)
        for (uint8_t k = 0; k < e[i]; ++k) t = t * x[i];
      acc = acc + t;
    }
    return acc.v;
  };
  for (auto& gq : model.gens)
    if (!K.is_zero(evalp(gq))) return false;
  // necessary condition: G vanishes (the pair may share a base point with F
  // at a cusp, so F != 0 is not required; pole positivity is checked on the
  // reductions via jet orders)
  auto& pair = model.jmap.primary();
  if (!K.is_zero(evalp(pair.G))) return false;
  return true;
}

// order along the local parameter of a reduced form at a point
long jet_order(const ReducedModel& rm, const LocalJets& lj, const FpMPoly& form,
               const FqField& F, unsigned cap) {
  std::vector<FqField::Elt> total(cap + 1, F.zero());
  for (auto& [e, c] : form.terms) {
    std::vector<FqField::Elt> term{F.from_fp(c % F.fp.p)};
    for (size_t v = 0; v < rm.g; ++v)
      for (uint8_t k = 0; k < e[v]; ++k) {
        std::vector<FqField::Elt> nt(cap + 1, F.zero());
        for (size_t a = 0; a < term.size() && a <= cap; ++a) {
          if (F.is_zero(term[a])) continue;
          for (size_t b = 0; a + b <= cap; ++b) {
            if (F.is_zero(lj.jets[v][b])) continue;
            nt[a + b] = F.add(nt[a + b], F.mul(term[a], lj.jets[v][b]));
          }
        }
        term = std::move(nt);
      }
    for (size_t a = 0; a < term.size() && a <= cap; ++a) total[a] = F.add(total[a], term[a]);
  }
  for (unsigned o = 0; o <= cap; ++o)
    if (!F.is_zero(total[o])) return long(o);
  return -1;  // beyond cap
}

// pole order of j = ord(G) - ord(F) along the local parameter
long width_by_jets(ReducedModel& rm, const CanonicalModel& model, const FqPoint& pt,
                   const FqField& F, unsigned cap) {
  auto lj = local_jets(rm, pt, F, cap);
  FpField fp{uint64_t(rm.p)};
  long og = jet_order(rm, lj, FpMPoly::reduce(model.jmap.primary().G, fp), F, cap);
  long of = jet_order(rm, lj, FpMPoly::reduce(model.jmap.primary().F, fp), F, cap);
  if (og < 0 || of < 0) return -1;
  return og - of;
}

}  // namespace

void cusp_places(CanonicalModel& model, const PlaneModel& pm) {
  if (model.jmap.pairs.empty())
    throw std::logic_error("cusp_places: fit the j-map first");
  long N = model.N;
  auto li = level_invariants(N);
  model.cusps.clear();
  RatField Q;

  bool squarefree = is_squarefree(Int(N));
  if (squarefree) {
    // cusps are the Atkin-Lehner orbit of infinity; w_Q(infty) has width Q
    std::vector<long> qs{1};
    for (long q : li.al_group) qs.push_back(q);
    for (long q : qs) {
      CuspOrbitPlaces c;
      c.width = q;
      c.at_infinity = (q == 1);
      QPoly t;
      t.c = {Rat(0), Rat(1)};  // minpoly T (rational point)
      c.minpoly = t;
      std::vector<Int> coords(model.g);
      for (size_t i = 0; i < model.g; ++i) {
        Int lead = model.coords[i].at(1);
        coords[i] = (q == 1 || model.al.signs.at(q)[i] == 1) ? lead : -lead;
      }
      for (auto& cc : coords) {
        QPoly cp;
        cp.c = {Rat(cc)};
        cp.normalize(Q);
        c.coords.push_back(cp);
      }
      // exact verification through the orbit machinery
      AlgebraicPointOrbit orbit;
      orbit.minpoly = c.minpoly;
      orbit.coords = c.coords;
      if (!verify_cusp_orbit(model, orbit))
        throw std::runtime_error("cusp_places: AL image of infinity fails verification");
      model.cusps.push_back(std::move(c));
    }
  } else {
    // reconstruction primes: cusp fields sit inside Q(zeta_N), so the place
    // degrees mod p divide ord(p mod N); keep primes whose worst admissible
    // place degree stays enumerable
    unsigned maxdeg0 = 1;
    for (auto& co : li.cusp_orbits) maxdeg0 = std::max(maxdeg0, unsigned(co.degree));
    std::vector<long> primes;
    for (long p = 3; p < 4000 && primes.size() < 24; p = long(next_prime_above(uint32_t(p)))) {
      if (N % p == 0) continue;
      // ord of p modulo N
      
      long ordp = 1;
      {
        long cur = p % N;
        while (cur != 1 && ordp < 4 * N) {
          cur = (cur * p) % N;
          ++ordp;
        }
        if (cur != 1) continue;
      }
      
      unsigned d_need = 1;
      for (unsigned k = 1; k <= maxdeg0; ++k)
        if (ordp % long(k) == 0) d_need = k;
      double cost = std::pow(double(p), double(d_need));
      if (cost > 400000.0) continue;
      primes.push_back(p);
    }
    std::map<long, ReducedModel> rms;
    ZeroDimOptions opt;
    opt.g = model.g;
    opt.primes = primes;
    opt.whole_locus = true;
    opt.min_primes = 3;
    opt.max_primes = 12;
    FpField dummy{5};
    unsigned maxdeg = maxdeg0;
    auto solver = [&](long p) -> std::optional<ModpSolutionSet> {
      try {
        auto it = rms.emplace(p, reduce_model(model, pm, p)).first;
        auto& rm = it->second;
        FpField fp{uint64_t(p)};
        auto gG = FpMPoly::reduce(model.jmap.primary().G, fp);
        ModpSolutionSet out;
        out.p = p;
        long ordp = 1;
        {
          long cur = p % N;
          while (cur != 1) {
            cur = (cur * p) % N;
            ++ordp;
          }
        }
        for (unsigned k = 1; k <= maxdeg; ++k) {
          if (ordp % long(k) != 0) continue;  // no places of this degree
          if (std::pow(double(p), double(k)) > 400000.0) break;
          auto& pts = enumerate_points(rm, k);
          const FqField& F = extension_field(rm, k);
          out.fields[k] = &F;
          for (auto& pt : pts) {
            if (!F.is_zero(gG.eval(pt, F))) continue;
            // exact degree k, one representative per Frobenius orbit
            bool rep = true;
            auto fr = frobenius_point(pt, F);
            unsigned orbit = 1;
            while (fr != pt) {
              if (fr < pt) rep = false;
              fr = frobenius_point(fr, F);
              ++orbit;
            }
            if (rep && orbit == k) out.points.emplace_back(k, pt);
          }
        }
        return out;
      } catch (const std::exception&) {
        return std::nullopt;
      }
    };
    auto verifier = [&](const AlgebraicPointOrbit& orbit) {
      return verify_cusp_orbit(model, orbit);
    };
    auto orbits = reconstruct_orbits(opt, solver, verifier);
    // widths via jet order of G at one supporting prime
    long maxwidth = 0;
    for (auto& co : li.cusp_orbits) maxwidth = std::max(maxwidth, co.width);
    for (auto& orbit : orbits) {
      CuspOrbitPlaces c;
      c.minpoly = orbit.minpoly;
      c.coords = orbit.coords;
      c.width = -1;
      for (auto& [p, rm] : rms) {
        const FqField& F = extension_field(rm, 1);
        FpField fp{uint64_t(p)};
        // locate a reduction of this orbit among the G=0 points
        FqPoly hp;
        bool ok = true;
        for (auto& cc : orbit.minpoly.c) {
          if (mpz_fdiv_ui(cc.get_den().get_mpz_t(), unsigned(p)) == 0) ok = false;
          if (!ok) break;
          uint64_t v = fp.mul(fp.from_int(cc.get_num()), fp.inv(fp.from_int(cc.get_den())));
          hp.c.push_back(F.from_fp(v));
        }
        if (!ok) continue;
        hp.normalize(F);
        auto roots = fq_roots(hp, F);
        if (roots.empty()) continue;
        // evaluate coords at the root
        FqPoint pt(model.g);
        for (size_t i = 0; i < model.g; ++i) {
          auto acc = F.zero();
          auto pw = F.one();
          for (int j = 0; j <= orbit.coords[i].deg(); ++j) {
            Rat cc = orbit.coords[i].c[j];
            uint64_t v = fp.mul(fp.from_int(cc.get_num()), fp.inv(fp.from_int(cc.get_den())));
            acc = F.add(acc, F.mul(F.from_fp(v), pw));
            pw = F.mul(pw, roots[0]);
          }
          pt[i] = acc;
        }
        pt = normalize_point(std::move(pt), F);
        long w = width_by_jets(rm, model, pt, F, unsigned(maxwidth) + 1);
        if (w > 0) {
          c.width = w;
          break;
        }
      }
      if (c.width <= 0) throw std::runtime_error("cusp_places: width computation failed");
      // infinity: rational with coordinates the leading coefficients
      if (orbit.minpoly.deg() == 1) {
        std::vector<Rat> lead(model.g), here(model.g);
        for (size_t i = 0; i < model.g; ++i) {
          lead[i] = Rat(model.coords[i].at(1));
          here[i] = orbit.coords[i].deg() >= 0 ? orbit.coords[i].c[0] : Rat(0);
        }
        // projective comparison
        size_t piv = 0;
        while (piv < model.g && lead[piv] == 0) ++piv;
        if (piv < model.g && here[piv] != 0) {
          Rat lam = lead[piv] / here[piv];
          bool same = true;
          for (size_t i = 0; i < model.g; ++i)
            if (here[i] * lam != lead[i]) same = false;
          c.at_infinity = same;
        }
      }
      model.cusps.push_back(std::move(c));
    }
  }

  // census: multiset of (width, degree) must match the level invariants,
  // and the widths weighted by degrees must sum to psi(N)
  std::multiset<std::pair<long, long>> got, want;
  Int width_sum = 0;
  for (auto& c : model.cusps) {
    got.insert({c.width, c.minpoly.deg()});
    width_sum += Int(c.width) * c.minpoly.deg();
  }
  for (auto& co : li.cusp_orbits) want.insert({co.width, co.degree});
  if (got != want || width_sum != li.psi)
    throw std::runtime_error("cusp_places: census mismatch with level invariants");
  bool has_inf = false;
  for (auto& c : model.cusps) has_inf |= c.at_infinity;
  if (!has_inf) throw std::runtime_error("cusp_places: cusp at infinity not found");
}

}  // namespace qp
