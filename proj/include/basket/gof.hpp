#ifndef BASKET_GOF_HPP
#define BASKET_GOF_HPP

#include <vector>

#include "basket/types.hpp"

namespace basket {

struct GofResult {
    double statistic = 0.0;
    int df = 0;
    double p_value = 1.0;
    std::vector<double> fitted_rates;  // common-effect fitted rate per basket
};

// Chi-squared test of a common effect across all baskets on the given scale.
// The statistic sums (y_k - n_k*p_k)^2 / (n_k*p_k) with p_k the fitted rate;
// pearson_variant additionally divides each term by (1 - p_k).
GofResult gof_test(const BasketTable& table, EffectScale scale,
                   bool pearson_variant = false);

}  // namespace basket

#endif
