#include "basket/gof.hpp"

#include <string>

#include "basket/errors.hpp"
#include "basket/estimators.hpp"
#include "basket/link.hpp"
#include "basket/numerics.hpp"

namespace basket {

GofResult gof_test(const BasketTable& table, EffectScale scale,
                   bool pearson_variant) {
    validate_table(table);
    if (table.size() < 2) {
        throw ValidationError(ErrorCode::parse_error,
                              "goodness-of-fit test needs at least two baskets");
    }
    const double point = mh_estimate(table, scale);

    GofResult res;
    res.df = static_cast<int>(table.size()) - 1;
    res.fitted_rates.reserve(table.size());
    for (const BasketRecord& b : table.baskets) {
        LinkFunction link{scale.kind, b.pi0};
        double rate = link.h(point);
        if (!(rate > 0.0) || !(rate < 1.0)) {
            throw EstimationError(ErrorCode::degenerate_fit,
                                  "fitted rate for basket '" + b.label +
                                      "' falls outside (0,1)");
        }
        res.fitted_rates.push_back(rate);
        double expected = b.n * rate;
        double resid = b.y - expected;
        double term = resid * resid / expected;
        if (pearson_variant) term /= 1.0 - rate;
        res.statistic += term;
    }
    res.p_value = num::chi2_sf(res.statistic, res.df);
    return res;
}

}  // namespace basket
