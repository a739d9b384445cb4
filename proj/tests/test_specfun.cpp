#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
#include "relaysec/specfun.hpp"

using relaysec::exp_integral_e1;
using relaysec::omega;
using testutil::rel_err;

TEST_CASE("E1 matches high-precision reference values") {
  CHECK(rel_err(exp_integral_e1(1.0), 0.21938393439552027368) < 1e-14);
  CHECK(rel_err(exp_integral_e1(0.5), 0.55977359477616081175) < 1e-14);
  CHECK(rel_err(omega(1.0), 0.59634736232319407434) < 1e-14);
}

TEST_CASE("E1 and omega agree with an independent quadrature oracle") {
  // Log-spaced sample spanning the series branch, the continued-fraction
  // branch, and the switchover at x = 1.
  std::vector<double> xs;
  const double lo = 1e-6, hi = 700.0;
  const int n = 40;
  for (int i = 0; i <= n; ++i) xs.push_back(lo * std::pow(hi / lo, double(i) / n));
  xs.push_back(0.999999);
  xs.push_back(1.000001);
  for (double x : xs) {
    const double om_ref = testutil::omega_by_quadrature(x);
    CHECK_MESSAGE(rel_err(omega(x), om_ref) < 1e-10, "omega mismatch at x=" << x);
    const double e1_ref = std::exp(-x) * om_ref;
    if (e1_ref > 1e-290) {
      CHECK_MESSAGE(rel_err(exp_integral_e1(x), e1_ref) < 1e-10,
                    "E1 mismatch at x=" << x);
    }
  }
}

TEST_CASE("omega obeys its two-sided envelope and E1 consistency") {
  for (int i = 0; i <= 200; ++i) {
    const double x = 1e-6 * std::pow(700.0 / 1e-6, double(i) / 200.0);
    const double xo = x * omega(x);
    CHECK_MESSAGE(xo > x / (x + 1.0), "lower envelope violated at x=" << x);
    CHECK_MESSAGE(xo < 1.0, "upper envelope violated at x=" << x);
    if (x <= 690.0) {
      // exp(-x) stays normal here, so the identity E1 = exp(-x)*omega must
      // hold to rounding error.
      CHECK(rel_err(exp_integral_e1(x), std::exp(-x) * omega(x)) < 1e-12);
    }
  }
}

TEST_CASE("E1 is strictly decreasing") {
  double prev = exp_integral_e1(1e-6);
  for (int i = 1; i <= 120; ++i) {
    const double x = 1e-6 * std::pow(650.0 / 1e-6, double(i) / 120.0);
    const double cur = exp_integral_e1(x);
    CHECK(cur < prev);
    prev = cur;
  }
}

TEST_CASE("omega matches its large-argument expansion") {
  const double x = 1e4;
  const double asym = 1.0 / x - 1.0 / (x * x) + 2.0 / (x * x * x) - 6.0 / (x * x * x * x);
  CHECK(rel_err(omega(x), asym) < 1e-10);
}

TEST_CASE("E1 underflows gracefully for very large arguments") {
  const double v = exp_integral_e1(700.0);
  CHECK(v > 0.0);
  CHECK(v < 1e-300);
  CHECK(std::isfinite(v));
}

TEST_CASE("domain errors for non-positive or non-finite arguments") {
  CHECK_THROWS_AS(exp_integral_e1(0.0), std::domain_error);
  CHECK_THROWS_AS(exp_integral_e1(-1.0), std::domain_error);
  CHECK_THROWS_AS(exp_integral_e1(std::nan("")), std::domain_error);
  CHECK_THROWS_AS(omega(0.0), std::domain_error);
  CHECK_THROWS_AS(omega(-3.5), std::domain_error);
  CHECK_THROWS_AS(omega(std::numeric_limits<double>::infinity()), std::domain_error);
}
