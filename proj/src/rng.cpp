#include "basket/rng.hpp"

#include <cmath>

#include "basket/numerics.hpp"

namespace basket {

int Rng::binomial(int n, double p) {
  if (n <= 0) return 0;
  if (p <= 0.0) return 0;
  if (p >= 1.0) return n;
  const double u = uniform();
  const double odds = p / (1.0 - p);
  double pmf = std::exp(n * std::log1p(-p));
  if (pmf > 0.0) {
    // Walk the CDF from 0 using the pmf ratio recurrence.
    double cdf = pmf;
    int k = 0;
    while (cdf <= u && k < n) {
      pmf *= odds * (n - k) / (k + 1.0);
      cdf += pmf;
      ++k;
    }
    return k;
  }
  // P(X=0) underflowed (very large n): binary-search the CDF instead.
  int lo = 0, hi = n;  // invariant: CDF(lo-1) <= u < CDF(hi)
  while (lo < hi) {
    const int mid = lo + (hi - lo) / 2;
    const double cdf_mid = 1.0 - num::binom_sf(mid + 1, n, p);
    if (cdf_mid <= u)
      lo = mid + 1;
    else
      hi = mid;
  }
  return lo;
}

}  // namespace basket
