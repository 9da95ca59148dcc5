#include "basket/estimators.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <tuple>

#include "basket/errors.hpp"
#include "basket/numerics.hpp"

namespace basket {

MhComponents mh_components(const BasketTable& table, EffectScale scale) {
  MhComponents out;
  out.w = resolve_weights(table, scale);
  const int k = table.size();
  out.r.resize(k);
  out.s.resize(k);
  for (int i = 0; i < k; ++i) {
    const auto& b = table.baskets[i];
    const double w = out.w[i];
    switch (scale.kind) {
      case Scale::rd:
        out.r[i] = b.y - b.n * b.pi0;
        out.s[i] = b.n;
        break;
      case Scale::rr:
        out.r[i] = w * b.y;
        out.s[i] = w * b.n * b.pi0;
        break;
      case Scale::odds:
        out.r[i] = w * (1.0 - b.pi0) * b.y;
        out.s[i] = w * b.pi0 * (b.n - b.y);
        break;
    }
  }
  return out;
}

std::vector<double> basket_effects(const BasketTable& table, EffectScale scale) {
  std::vector<double> out;
  out.reserve(table.baskets.size());
  for (const auto& b : table.baskets) {
    const double ph = static_cast<double>(b.y) / b.n;
    switch (scale.kind) {
      case Scale::rd:
        out.push_back(ph - b.pi0);
        break;
      case Scale::rr:
        out.push_back(ph / b.pi0);
        break;
      case Scale::odds:
        if (b.y == b.n) {
          out.push_back(std::numeric_limits<double>::infinity());
        } else {
          const double odds0 = b.pi0 / (1.0 - b.pi0);
          out.push_back(ph / (1.0 - ph) / odds0);
        }
        break;
    }
  }
  return out;
}

double mh_estimate(const BasketTable& table, EffectScale scale) {
  const auto c = mh_components(table, scale);
  double rs = 0.0, ss = 0.0;
  for (size_t i = 0; i < c.r.size(); ++i) {
    rs += c.r[i];
    ss += c.s[i];
  }
  if (!(ss > 0.0))
    throw EstimationError(ErrorCode::degenerate_denominator,
                          "pooled estimator denominator is zero on scale '" +
                              scale.name() + "'");
  return rs / ss;
}

double mh_variance(const BasketTable& table, EffectScale scale, double point) {
  const auto c = mh_components(table, scale);
  double num = 0.0, ss = 0.0;
  for (int i = 0; i < table.size(); ++i) {
    const auto& b = table.baskets[i];
    if (b.n < 2)
      throw EstimationError(ErrorCode::singleton_basket,
                            "basket '" + b.label +
                                "' has n=1; the variance estimator needs n >= 2");
    const double ph = static_cast<double>(b.y) / b.n;
    // n^2/(n-1) * pi_hat(1-pi_hat) is the unbiased per-basket variance piece.
    double term = b.n * (static_cast<double>(b.n) / (b.n - 1)) * ph * (1.0 - ph);
    const double w = c.w[i];
    switch (scale.kind) {
      case Scale::rd:
        break;
      case Scale::rr:
        term *= w * w;
        break;
      case Scale::odds: {
        const double f = 1.0 + (point - 1.0) * b.pi0;
        term *= w * w * f * f;
        break;
      }
    }
    num += term;
    ss += c.s[i];
  }
  if (!(ss > 0.0))
    throw EstimationError(ErrorCode::degenerate_denominator,
                          "pooled estimator denominator is zero on scale '" +
                              scale.name() + "'");
  return num / (ss * ss);
}

std::pair<double, double> wald_ci(double point, double variance, double alpha) {
  const double z = num::normal_quantile(1.0 - alpha / 2.0);
  const double half = z * std::sqrt(variance);
  return {point - half, point + half};
}

EffectEstimate mh_effect(const BasketTable& table, EffectScale scale, double alpha) {
  EffectEstimate est;
  est.scale = scale;
  est.alpha = alpha;
  est.n_effective = table.total_patients();
  est.point = mh_estimate(table, scale);
  est.variance = mh_variance(table, scale, est.point);
  std::tie(est.ci_low, est.ci_high) = wald_ci(est.point, est.variance, alpha);
  return est;
}

std::pair<double, double> clopper_pearson(int y, int n, double alpha) {
  const double lo =
      y == 0 ? 0.0 : num::beta_quantile(alpha / 2.0, y, n - y + 1.0);
  const double hi =
      y == n ? 1.0 : num::beta_quantile(1.0 - alpha / 2.0, y + 1.0, n - y);
  return {lo, hi};
}

double misspecification_limit(const BasketTable& table,
                              const std::vector<double>& true_rates,
                              EffectScale scale) {
  const auto w = resolve_weights(table, scale);
  double num = 0.0, den = 0.0;
  for (int i = 0; i < table.size(); ++i) {
    const auto& b = table.baskets[i];
    const double pi = true_rates.at(i);
    switch (scale.kind) {
      case Scale::rd:
        num += b.n * (pi - b.pi0);
        den += b.n;
        break;
      case Scale::rr:
        num += w[i] * b.n * b.pi0 * (pi / b.pi0);
        den += w[i] * b.n * b.pi0;
        break;
      case Scale::odds:
        // Expected-count version of the estimating equation's limit.
        num += w[i] * (1.0 - b.pi0) * b.n * pi;
        den += w[i] * b.pi0 * b.n * (1.0 - pi);
        break;
    }
  }
  return num / den;
}

}  // namespace basket
