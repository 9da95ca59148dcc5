#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "basket/numerics.hpp"

using namespace basket;

namespace {

// Reference values below were computed independently with 40-digit
// arbitrary-precision arithmetic and frozen here.
constexpr double kTol = 1e-10;

bool close(double a, double b, double tol = kTol) {
  return std::fabs(a - b) <= tol * std::max(1.0, std::max(std::fabs(a), std::fabs(b)));
}

}  // namespace

TEST_CASE("log_gamma matches factorials and the half-integer closed form") {
  CHECK(num::log_gamma(1.0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(num::log_gamma(2.0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(close(num::log_gamma(5.0), std::log(24.0)));
  CHECK(close(num::log_gamma(11.0), std::log(3628800.0)));
  CHECK(close(num::log_gamma(0.5), 0.5 * std::log(M_PI)));
  // Reflection branch (x < 0.5).
  CHECK(close(num::log_gamma(0.25) + num::log_gamma(0.75),
              std::log(M_PI / std::sin(M_PI * 0.25))));
  CHECK_THROWS_AS(num::log_gamma(0.0), std::domain_error);
  CHECK_THROWS_AS(num::log_gamma(-1.5), std::domain_error);
}

TEST_CASE("log_choose agrees with exact integer binomials") {
  CHECK(num::log_choose(10, 0) == 0.0);
  CHECK(num::log_choose(10, 10) == 0.0);
  CHECK(close(num::log_choose(10, 3), std::log(120.0)));
  CHECK(close(num::log_choose(50, 25), std::log(126410606437752.0)));
  CHECK(num::log_choose(5, 6) == -std::numeric_limits<double>::infinity());
  CHECK(num::log_choose(5, -1) == -std::numeric_limits<double>::infinity());
}

TEST_CASE("regularized incomplete gamma: complements and closed forms") {
  const double as[] = {0.5, 1.0, 2.5, 10.0, 40.0};
  const double xs[] = {0.1, 0.5, 1.0, 3.0, 12.0, 55.0};
  for (double a : as) {
    for (double x : xs) {
      CHECK(num::gamma_p(a, x) + num::gamma_q(a, x) == doctest::Approx(1.0).epsilon(1e-13));
    }
  }
  // P(1, x) = 1 - exp(-x).
  for (double x : xs) CHECK(close(num::gamma_p(1.0, x), -std::expm1(-x)));
  CHECK(num::gamma_p(3.0, 0.0) == 0.0);
  CHECK(num::gamma_q(3.0, 0.0) == 1.0);
  CHECK_THROWS_AS(num::gamma_p(0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(num::gamma_q(2.0, -1.0), std::domain_error);
}

TEST_CASE("chi-squared survival function against the frozen grid") {
  CHECK(close(num::chi2_sf(0.5, 1), 0.47950012218695346));
  CHECK(close(num::chi2_sf(5.0, 1), 0.025347318677468264));
  CHECK(close(num::chi2_sf(1.0, 2), 0.60653065971263342));
  CHECK(close(num::chi2_sf(7.814727903251179, 3), 0.050000000000000018));
  CHECK(close(num::chi2_sf(13.148785425101215, 5), 0.02202367502148563));
  CHECK(close(num::chi2_sf(5.544937205651491, 9), 0.78445630435044699));
  CHECK(close(num::chi2_sf(25.0, 10), 0.0053455054871340643));
  CHECK(close(num::chi2_sf(50.0, 20), 0.00022147663824878358));
  CHECK(close(num::chi2_sf(100.0, 30), 1.8568023365102386e-09, 1e-9));
  CHECK(num::chi2_sf(0.0, 5) == 1.0);
  CHECK(num::chi2_sf(-3.0, 5) == 1.0);
  CHECK(close(num::chi2_sf(8.0, 30), 0.99998006827251729));
  CHECK_THROWS_AS(num::chi2_sf(1.0, 0), std::domain_error);
}

TEST_CASE("incomplete beta: symmetry, uniform case, and monotonicity") {
  const double abs[][2] = {{0.5, 0.5}, {1.0, 1.0}, {2.0, 5.0}, {8.0, 12.0}, {30.0, 3.0}};
  for (auto& ab : abs) {
    for (double x : {0.05, 0.2, 0.5, 0.8, 0.95}) {
      CHECK(num::inc_beta(ab[0], ab[1], x) + num::inc_beta(ab[1], ab[0], 1.0 - x) ==
            doctest::Approx(1.0).epsilon(1e-13));
    }
  }
  for (double x : {0.1, 0.37, 0.9}) CHECK(close(num::inc_beta(1.0, 1.0, x), x));
  CHECK(num::inc_beta(2.0, 3.0, 0.0) == 0.0);
  CHECK(num::inc_beta(2.0, 3.0, 1.0) == 1.0);
  double prev = -1.0;
  for (double x = 0.0; x <= 1.0001; x += 0.05) {
    const double v = num::inc_beta(2.5, 3.5, std::min(x, 1.0));
    CHECK(v >= prev);
    prev = v;
  }
  CHECK_THROWS_AS(num::inc_beta(0.0, 1.0, 0.5), std::domain_error);
}

TEST_CASE("beta quantile inverts the incomplete beta") {
  CHECK(close(num::beta_quantile(0.025, 8.0, 12.0), 0.20252143897716277));
  CHECK(close(num::beta_quantile(0.975, 9.0, 11.0), 0.66500215598826461));
  CHECK(close(num::beta_quantile(0.5, 2.5, 3.5), 0.40684494089319389));
  CHECK(close(num::beta_quantile(1e-6, 3.0, 4.0), 0.0036942652994059087, 1e-9));
  CHECK(close(num::beta_quantile(0.999999, 3.0, 4.0), 0.98382648670505785));
  CHECK(num::beta_quantile(0.0, 2.0, 2.0) == 0.0);
  CHECK(num::beta_quantile(1.0, 2.0, 2.0) == 1.0);
  // Round trip over a grid.
  for (double p : {0.01, 0.1, 0.5, 0.9, 0.99}) {
    for (double a : {0.7, 1.0, 4.0, 19.0}) {
      for (double b : {0.9, 2.0, 11.0}) {
        const double x = num::beta_quantile(p, a, b);
        CHECK(num::inc_beta(a, b, x) == doctest::Approx(p).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("normal quantile reproduces PPND16 reference points") {
  CHECK(num::normal_quantile(0.5) == 0.0);
  CHECK(close(num::normal_quantile(0.001), -3.0902323061678135));
  CHECK(close(num::normal_quantile(0.025), -1.9599639845400542));
  CHECK(close(num::normal_quantile(0.05), -1.6448536269514727));
  CHECK(close(num::normal_quantile(0.1), -1.2815515655446005));
  CHECK(close(num::normal_quantile(0.9), 1.2815515655446005));
  CHECK(close(num::normal_quantile(0.95), 1.6448536269514727));
  CHECK(close(num::normal_quantile(0.975), 1.9599639845400542));
  CHECK(close(num::normal_quantile(0.999), 3.0902323061678135));
  CHECK(close(num::normal_quantile(1e-10), -6.3613409024040562));
  for (double p : {0.001, 0.05, 0.21, 0.43}) {
    CHECK(num::normal_quantile(p) + num::normal_quantile(1.0 - p) ==
          doctest::Approx(0.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(num::normal_quantile(0.0), std::domain_error);
  CHECK_THROWS_AS(num::normal_quantile(1.0), std::domain_error);
}

TEST_CASE("binomial pmf and upper tail") {
  // pmf sums to one and the tail telescopes it.
  const int n = 30;
  const double p = 0.37;
  double sum = 0.0;
  for (int k = 0; k <= n; ++k) sum += num::binom_pmf(k, n, p);
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-13));
  for (int k = 0; k <= n; ++k) {
    double tail = 0.0;
    for (int j = k; j <= n; ++j) tail += num::binom_pmf(j, n, p);
    CHECK(num::binom_sf(k, n, p) == doctest::Approx(tail).epsilon(1e-12));
  }
  CHECK(close(num::binom_sf(18, 84, 0.15), 0.07188871603730464));
  CHECK(close(num::binom_sf(28, 179, 0.1), 0.011716433522983919));
  CHECK(num::binom_sf(0, 5, 0.3) == 1.0);
  CHECK(close(num::binom_sf(5, 5, 0.3), 0.00243));
  CHECK(close(num::binom_sf(3, 10, 0.5), 0.9453125));
  CHECK(num::binom_sf(6, 5, 0.3) == 0.0);
  CHECK(num::binom_pmf(-1, 5, 0.3) == 0.0);
  CHECK(num::binom_pmf(6, 5, 0.3) == 0.0);
  CHECK(num::binom_pmf(0, 5, 0.0) == 1.0);
  CHECK(num::binom_pmf(5, 5, 1.0) == 1.0);
}
