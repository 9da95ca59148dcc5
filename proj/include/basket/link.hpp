#ifndef BASKET_LINK_HPP
#define BASKET_LINK_HPP

#include "basket/types.hpp"

namespace basket {

// Fitted response rate implied by a common effect delta for a basket with
// null rate pi0, and its derivative in delta. Used by the goodness-of-fit
// test and by the information-criterion machinery.
struct LinkFunction {
    Scale scale = Scale::rd;
    double pi0 = 0.0;

    double h(double delta) const;
    double hdot(double delta) const;
};

}  // namespace basket

#endif
