#ifndef BASKET_ESTIMATORS_HPP
#define BASKET_ESTIMATORS_HPP

#include <utility>
#include <vector>

#include "basket/types.hpp"

namespace basket {

// Numerator / denominator contributions to the pooled estimating equation
// U(d) = sum(R_k) - d * sum(S_k), plus the resolved weights.
struct MhComponents {
  std::vector<double> r;
  std::vector<double> s;
  std::vector<double> w;
};

MhComponents mh_components(const BasketTable& table, EffectScale scale);

// Per-basket effect estimates with pi_hat = y/n plugged in. An odds ratio
// with pi_hat = 1 comes back as +infinity.
std::vector<double> basket_effects(const BasketTable& table, EffectScale scale);

// Pooled Mantel-Haenszel point estimate sum(R_k)/sum(S_k).
// Throws EstimationError (degenerate_denominator) when sum(S_k) == 0.
double mh_estimate(const BasketTable& table, EffectScale scale);

// Dually-consistent variance estimator for the pooled estimate. Requires
// every n_k >= 2; `point` is used by the odds-ratio formula only.
double mh_variance(const BasketTable& table, EffectScale scale, double point);

// Symmetric Wald interval on the natural scale.
std::pair<double, double> wald_ci(double point, double variance, double alpha);

// Point + variance + Wald CI in one call.
EffectEstimate mh_effect(const BasketTable& table, EffectScale scale, double alpha = 0.05);

// Exact (Clopper-Pearson) two-sided interval for a binomial proportion.
std::pair<double, double> clopper_pearson(int y, int n, double alpha);

// Large-sample limit of the pooled estimate when the per-basket true rates
// are `true_rates` (which need not satisfy a common-effect assumption).
double misspecification_limit(const BasketTable& table,
                              const std::vector<double>& true_rates, EffectScale scale);

}  // namespace basket

#endif
