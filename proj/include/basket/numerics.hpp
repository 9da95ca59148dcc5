#ifndef BASKET_NUMERICS_HPP
#define BASKET_NUMERICS_HPP

// Scalar special functions needed by the estimators and tests.
// Self-contained implementations of the classical series / continued-fraction
// expansions; accuracy targets are covered by the numerics test suite
// (1e-10 or better over the ranges used here).

namespace basket::num {

// Natural log of the gamma function, x > 0 (Lanczos approximation).
double log_gamma(double x);

// log of the binomial coefficient C(n, k).
double log_choose(int n, int k);

// Regularized lower/upper incomplete gamma P(a,x), Q(a,x); a > 0, x >= 0.
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// Survival function of the chi-squared distribution with df degrees of freedom.
double chi2_sf(double x, int df);

// Regularized incomplete beta function I_x(a, b); a, b > 0, x in [0,1].
double inc_beta(double a, double b, double x);

// Quantile of the Beta(a, b) distribution: smallest x with I_x(a,b) >= p.
double beta_quantile(double p, double a, double b);

// Quantile of the standard normal distribution (Wichura's PPND16 rational
// approximation, relative error below 1e-15 on (0,1)).
double normal_quantile(double p);

// Binomial probabilities. binom_sf is the inclusive upper tail P(X >= k).
double binom_pmf(int k, int n, double p);
double binom_sf(int k, int n, double p);

}  // namespace basket::num

#endif
