#include "basket/link.hpp"

namespace basket {

double LinkFunction::h(double delta) const {
    switch (scale) {
        case Scale::rd:
            return pi0 + delta;
        case Scale::rr:
            return pi0 * delta;
        case Scale::odds: {
            double denom = 1.0 - pi0 + pi0 * delta;
            return pi0 * delta / denom;
        }
    }
    return 0.0;
}

double LinkFunction::hdot(double delta) const {
    switch (scale) {
        case Scale::rd:
            return 1.0;
        case Scale::rr:
            return pi0;
        case Scale::odds: {
            double denom = 1.0 - pi0 + pi0 * delta;
            return pi0 * (1.0 - pi0) / (denom * denom);
        }
    }
    return 0.0;
}

}  // namespace basket
