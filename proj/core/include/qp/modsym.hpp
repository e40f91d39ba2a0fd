#pragma once
// Weight-2 Manin symbols for Gamma_0(N): the engine behind the offline
// newform table generator. Produces Hecke eigensystems (a_p in their
// coefficient fields) and Atkin-Lehner eigenvalues for new orbits.

#include <map>

#include "qp/matrix.hpp"
#include "qp/numberfield.hpp"

namespace qp {

struct NewformData {
  long level = 0;
  std::vector<Int> field_poly;        // monic defining polynomial, low -> high
  unsigned dim = 1;                   // degree of the coefficient field
  // a_n for 1 <= n < nmax as power-basis coordinate vectors (length dim)
  std::vector<std::vector<Rat>> an;
  std::vector<std::pair<long, int>> al_signs;  // (Q, +-1) for Q || level
  std::string label;

  const std::vector<Rat>& a(size_t n) const { return an.at(n - 1); }
  size_t nmax() const { return an.size() + 1; }
};

class ManinSymbols {
 public:
  explicit ManinSymbols(long N);

  long level() const { return n_; }
  size_t p1_size() const { return p1_.size(); }
  size_t dim() const { return dim_; }          // dim M_2(Gamma_0(N))
  size_t cusp_count() const { return cusps_.size(); }
  size_t cuspidal_dim() const { return cuspidal_.size(); }  // = 2g
  long genus() const { return long(cuspidal_.size()) / 2; }

  // index of the Manin symbol (c:d) in the P^1 list
  size_t p1_index(long c, long d) const;

  // image of generator i in the quotient basis
  const std::vector<Rat>& gen_coords(size_t i) const { return gen_to_basis_[i]; }

  // matrix of T_ell (ell prime, ell not dividing N) on the quotient basis
  Mat<RatField> hecke_matrix(long ell) const;
  // matrix of the Atkin-Lehner operator W_Q (Q || N) on the quotient basis
  Mat<RatField> atkin_lehner(long q) const;
  // star involution
  Mat<RatField> star() const;

  // apply T_ell to an explicit vector in quotient coordinates (fast path:
  // avoids building the full matrix)
  std::vector<Rat> hecke_apply(long ell, const std::vector<Rat>& v) const;
  // T_ell applied to the b-th basis vector
  std::vector<Rat> hecke_apply_gen(long ell, size_t b) const;

  // cuspidal subspace as rows in quotient coordinates
  const std::vector<std::vector<Rat>>& cuspidal_basis() const { return cuspidal_; }

  // restrict an operator on the quotient space to the cuspidal subspace
  Mat<RatField> restrict_cuspidal(const Mat<RatField>& op) const;

  // classical genus of X_0(N) from the index formula (cross-check)
  static long genus_formula(long N);

 private:
  long n_;
  std::vector<std::pair<long, long>> p1_;
  std::map<std::pair<long, long>, size_t> p1_idx_;
  size_t dim_ = 0;
  std::vector<std::vector<Rat>> gen_to_basis_;    // p1_size x dim
  std::vector<size_t> basis_gens_;                // dim -> generator index
  std::vector<std::pair<long, long>> cusps_;      // class representatives a/c
  std::vector<std::vector<Rat>> cuspidal_;        // 2g rows of length dim

  std::pair<long, long> p1_normalize(long c, long d) const;
  // modular symbol {a/b, c/d} expressed in quotient coordinates
  std::vector<Rat> path_coords(const std::pair<long, long>& from,
                               const std::pair<long, long>& to) const;
  std::vector<Rat> path_infty_to(long num, long den) const;
  size_t cusp_class(long num, long den) const;
  void add_gen(std::vector<Rat>& acc, size_t gen, int sign) const;
};

// Full eigensystem computation for one level: the new orbits at level N,
// with a_n to the requested precision. `lower` holds the already computed
// newforms at proper divisors of N (for old/new separation).
std::vector<NewformData> compute_newforms(long N, size_t nmax,
                                          const std::vector<NewformData>& lower);

// Extend coefficients a_n (n < nmax) from eigenvalue data: multiplicativity
// and the p-power recursion a_{p^(r+1)} = a_p a_{p^r} - p a_{p^(r-1)} for
// p not dividing the level, a_{p^r} = a_p^r for p | level.
void extend_an(NewformData& nf, size_t nmax, const NumberField& K,
               const std::map<long, std::vector<Rat>>& ap);

}  // namespace qp
