#include "relaysec/specfun.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace relaysec {

namespace {

constexpr double kEulerGamma = 0.57721566490153286061;

void require_domain(double x, const char* fn) {
    if (!std::isfinite(x) || x <= 0.0) {
        throw std::domain_error(std::string(fn) +
                                ": argument must be finite and > 0, got " +
                                std::to_string(x));
    }
}

// Power series around 0, accurate for x <= 1:
//   E1(x) = -euler_gamma - ln x - sum_{k>=1} (-x)^k / (k * k!)
double e1_series(double x) {
    double sum = -kEulerGamma - std::log(x);
    double term = 1.0;  // (-x)^k / k! running value
    for (int k = 1; k <= 64; ++k) {
        term *= -x / k;
        const double contrib = term / k;
        sum -= contrib;
        if (std::fabs(contrib) < 1e-18 * std::fabs(sum)) break;
    }
    return sum;
}

// Continued fraction for x > 1 (modified Lentz).  Converges to
// e^x * E1(x) directly, so it doubles as the overflow-safe omega branch:
//   e^x E1(x) = 1/(x+1- 1^2/(x+3- 2^2/(x+5- ...)))
double omega_continued_fraction(double x) {
    constexpr double tiny = std::numeric_limits<double>::min() / 1e-30;
    double b = x + 1.0;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 300; ++i) {
        const double a = -double(i) * double(i);
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        const double del = c * d;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16) break;
    }
    return h;
}

}  // namespace

double exp_integral_e1(double x) {
    require_domain(x, "exp_integral_e1");
    if (x <= 1.0) return e1_series(x);
    // exp(-x) underflows to 0 for x beyond ~745; the product then underflows
    // gracefully, matching the true magnitude of E1 there.
    return std::exp(-x) * omega_continued_fraction(x);
}

double omega(double x) {
    require_domain(x, "omega");
    if (x <= 1.0) return std::exp(x) * e1_series(x);
    return omega_continued_fraction(x);
}

}  // namespace relaysec
