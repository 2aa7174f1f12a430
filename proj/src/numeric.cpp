#include "quadflip/numeric.hpp"

#include <stdexcept>
#include <vector>

namespace quadflip {

BigInt catalan(int n) {
  if (n < 0) throw std::invalid_argument("catalan: n < 0");
  BigInt binom = 1;
  for (int i = 1; i <= n; ++i) binom = binom * (n + i) / i;
  return binom / (n + 1);
}

BigInt coloured_tree_count(int n, int r) {
  if (n < 0 || r < 1) throw std::invalid_argument("coloured_tree_count: bad args");
  BigInt p = 1;
  for (int i = 0; i < n; ++i) p *= r;
  return p * catalan(n);
}

BigInt coloured_tree_count_recurrence(int n, int r) {
  if (n < 0 || r < 1) throw std::invalid_argument("coloured_tree_count_recurrence: bad args");
  std::vector<BigInt> cat(n + 1);
  cat[0] = 1;
  for (int m = 1; m <= n; ++m) {
    BigInt s = 0;
    for (int k = 0; k < m; ++k) s += cat[k] * cat[m - 1 - k];
    cat[m] = s;
  }
  BigInt p = 1;
  for (int i = 0; i < n; ++i) p *= r;
  return p * cat[n];
}

}  // namespace quadflip
