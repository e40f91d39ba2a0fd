#include "qp/homopoly.hpp"

namespace qp {

std::vector<Expo> monomials_of_degree(int d, size_t n) {
  std::vector<Expo> out;
  Expo cur(n, 0);
  // lexicographic enumeration of compositions of d into n parts
  std::function<void(int, size_t)> rec = [&](int rem, size_t pos) {
    if (pos + 1 == n) {
      cur[pos] = uint8_t(rem);
      out.push_back(cur);
      return;
    }
    for (int k = rem; k >= 0; --k) {
      cur[pos] = uint8_t(k);
      rec(rem - k, pos + 1);
    }
  };
  if (n == 0) return out;
  rec(d, 0);
  return out;
}

}  // namespace qp
