#include "relaysec/types.hpp"

#include <cmath>
#include <string>

namespace relaysec {

double db_to_linear(double x_db) { return std::pow(10.0, x_db / 10.0); }

namespace {

void require_positive_finite(double v, const char* name) {
    if (!std::isfinite(v) || v <= 0.0) {
        throw std::invalid_argument(std::string(name) +
                                    " must be finite and > 0, got " +
                                    std::to_string(v));
    }
}

}  // namespace

void SnrProfile::validate() const {
    require_positive_finite(gamma_sd, "gamma_sd");
    require_positive_finite(gamma_sr, "gamma_sr");
    require_positive_finite(gamma_rd, "gamma_rd");
    require_positive_finite(gamma_se, "gamma_se");
    require_positive_finite(gamma_re, "gamma_re");
}

void TargetRate::validate() const { require_positive_finite(r, "rate"); }

std::pair<double, double> separate_gains(double a, double b) {
    if (std::fabs(a - b) < 1e-6 * b) b *= 1.0 - 1e-6;
    return {a, b};
}

}  // namespace relaysec
