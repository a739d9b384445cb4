#include "relaysec/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "relaysec/quadrature.hpp"
#include "relaysec/specfun.hpp"

namespace relaysec {

namespace {

CheckedProbability check_range(double raw, double tol) {
    CheckedProbability out;
    out.raw = raw;
    out.in_range = std::isfinite(raw) && raw >= -tol && raw <= 1.0 + tol;
    out.value = std::isfinite(raw) ? std::clamp(raw, 0.0, 1.0)
                                   : (raw > 0.0 ? 1.0 : 0.0);
    return out;
}

double enforce_range(const CheckedProbability& cp, const char* fn,
                     const SnrProfile& p, double rate) {
    if (!cp.in_range) {
        std::ostringstream msg;
        msg << fn << ": closed form left [0,1] beyond tolerance (raw = "
            << cp.raw << ") at gamma_sd=" << p.gamma_sd
            << " gamma_sr=" << p.gamma_sr << " gamma_rd=" << p.gamma_rd
            << " gamma_se=" << p.gamma_se << " gamma_re=" << p.gamma_re
            << " rate=" << rate;
        throw formula_error(msg.str());
    }
    return cp.value;
}

double mf_raw(const SnrProfile& p, double rate) {
    const auto [grd, gsd] = separate_gains(p.gamma_rd, p.gamma_sd);
    const double c = std::exp2(2.0 * rate) - 1.0;
    const double s = std::exp2(-2.0 * rate) / p.gamma_se;
    const double d = grd - gsd;
    const double r1 = 1.0 / p.gamma_sr + 1.0 / grd;
    const double r2 = 1.0 / p.gamma_sr + 1.0 / gsd;
    return 1.0 -
           (1.0 + grd / p.gamma_sr) * std::exp(-c * r1) *
               (1.0 / r1 - 1.0 / (s + r1)) / d +
           (1.0 + gsd / p.gamma_sr) * std::exp(-c * r2) *
               (1.0 / r2 - 1.0 / (s + r2)) / d;
}

double df_raw(const SnrProfile& p, double rate, DfVariant v) {
    const auto [grd, gsd] = separate_gains(p.gamma_rd, p.gamma_sd);
    const auto [gre, gse] = separate_gains(p.gamma_re, p.gamma_se);
    const double gsr = p.gamma_sr;
    const double t = std::exp2(-2.0 * rate);
    const double exp_num = (v == DfVariant::as_printed)
                               ? t - 1.0
                               : std::exp2(2.0 * rate) - 1.0;
    const auto a = [&](double x) {
        return x * x / (gsr * t + x) * std::exp(-exp_num / x);
    };
    const auto h = [&](double x, double y) {
        return gsr / (x * (1.0 + gsr / y) + gsr * t);
    };
    const double de = gre - gse;
    const double dd = grd - gsd;
    return (a(gre) - a(gse)) / de +
           gsr * t * a(gse) * (h(gse, gsd) - h(gse, grd)) / (de * dd) -
           gsr * t * a(gre) * (h(gre, gsd) - h(gre, grd)) / (de * dd);
}

double cj_raw(const SnrProfile& p, double rate, CjDecayBase base) {
    const double kappa = (std::exp2(2.0 * rate) - 1.0) / p.gamma_sd;
    const double beta = std::exp2(2.0 * rate) * p.gamma_se / p.gamma_sd;
    const double pole_scale = kappa + 1.0 / p.gamma_rd;
    double gre = p.gamma_re;
    if (std::fabs(pole_scale - beta / gre) < 1e-4 * pole_scale) {
        // Removable double pole: the 1/a and 1/a^2 terms cancel analytically,
        // but dividing rounding noise by a^2 blows up for |a| below ~1e-5 of
        // its scale.  Step far enough off the pole that the direct evaluation
        // is accurate again; the induced bias is O(1e-3 * dP/dln(gamma_re)),
        // well under Monte Carlo resolution.
        gre *= 1.0 + 1e-3;
    }
    const double a = pole_scale - beta / gre;
    const double lead =
        (base == CjDecayBase::base_two ? std::exp2(-kappa) : std::exp(-kappa)) /
        (p.gamma_rd * gre);
    const double om1 = omega((1.0 + beta) / gre);
    const double om2 = omega((1.0 + beta) / beta * pole_scale);
    return 1.0 - lead * gre / a +
           lead / (a * a) *
               (beta * (a + 1.0) * om1 + (a - beta) * om2);
}

}  // namespace

double density_x(double x, const SnrProfile& p) {
    if (x < 0.0) return 0.0;
    const auto [grd, gsd] = separate_gains(p.gamma_rd, p.gamma_sd);
    return (std::exp(-x / grd) - std::exp(-x / gsd)) / (grd - gsd);
}

CheckedProbability outage_mf_checked(const SnrProfile& p, TargetRate r) {
    p.validate();
    r.validate();
    return check_range(mf_raw(p, r.r), 1e-12);
}

double outage_mf(const SnrProfile& p, TargetRate r) {
    return enforce_range(outage_mf_checked(p, r), "outage_mf", p, r.r);
}

double outage_mf_quadrature(const SnrProfile& p, TargetRate r,
                            double abs_tol) {
    p.validate();
    r.validate();
    const auto [grd, gsd] = separate_gains(p.gamma_rd, p.gamma_sd);
    const double gsr = p.gamma_sr;
    const double gse = p.gamma_se;
    const double c = std::exp2(2.0 * r.r) - 1.0;
    const double t = std::exp2(-2.0 * r.r);
    const double d = grd - gsd;
    const double gmax = std::max(gsd, grd);

    const auto f_x = [&](double x) {
        return (std::exp(-x / grd) - std::exp(-x / gsd)) / d;
    };
    const auto surv_x = [&](double x) {
        return (grd * std::exp(-x / grd) - gsd * std::exp(-x / gsd)) / d;
    };
    const auto f_z = [&](double z) { return std::exp(-z / gsr) / gsr; };
    const auto surv_z = [&](double z) { return std::exp(-z / gsr); };
    // P(Y > tau(x)) for the threshold tau(x) = 2^{-2R}(1+x) - 1, x >= c.
    const auto surv_y_tau = [&](double x) {
        return std::exp(-t * (x - c) / gse);
    };

    const double per_term_tol = abs_tol / 4.0;
    double total = 0.0;
    bool ok = true;
    double achieved = 0.0;

    const auto accumulate = [&](const QuadratureResult& q) {
        total += q.value;
        achieved += q.error;
        ok = ok && q.converged;
    };

    // Below-threshold mass: the relay-or-destination bottleneck alone decides
    // the outage, so the eavesdropper integral is 1.  Integrands decay at
    // rate 1/gsr + 1/gmax; cap the domain where their mass is ~e^{-75}.
    const double rate_below = 1.0 / gsr + 1.0 / gmax;
    const double x_cap = std::min(c, 75.0 / rate_below);
    accumulate(integrate_adaptive(
        [&](double x) { return f_x(x) * surv_z(x); }, 0.0, x_cap,
        per_term_tol));
    accumulate(integrate_adaptive(
        [&](double z) { return f_z(z) * surv_x(z); }, 0.0, x_cap,
        per_term_tol));

    // Above-threshold mass: substitute u = e^{-lambda (x - c)} to map the
    // semi-infinite tail onto (0, 1]; lambda matches the integrands' total
    // decay rate so the transformed integrand stays O(1).
    const double lambda = 1.0 / gsr + t / gse + 1.0 / gmax;
    const auto tail = [&](auto&& weight) {
        return integrate_adaptive(
            [&](double u) {
                const double x = c - std::log(u) / lambda;
                return weight(x) * surv_y_tau(x) / (lambda * u);
            },
            0.0, 1.0, per_term_tol);
    };
    if (std::isfinite(c)) {
        accumulate(tail([&](double x) { return f_x(x) * surv_z(x); }));
        accumulate(tail([&](double x) { return f_z(x) * surv_x(x); }));
    }
    // (If c overflowed to infinity the tail terms are exactly 0 and the
    // below-threshold terms already integrate the entire density.)

    if (!ok) {
        std::ostringstream msg;
        msg << "outage_mf_quadrature: did not reach tolerance " << abs_tol
            << " (achieved ~" << achieved << ")";
        throw formula_error(msg.str());
    }
    return std::clamp(total, 0.0, 1.0);
}

double outage_dt(const SnrProfile& p, TargetRate r) {
    p.validate();
    r.validate();
    const double two_r = std::exp2(r.r);
    return 1.0 - p.gamma_sd / (p.gamma_sd + two_r * p.gamma_se) *
                     std::exp(-(two_r - 1.0) / (2.0 * p.gamma_sd));
}

CheckedProbability outage_df_checked(const SnrProfile& p, TargetRate r,
                                     DfVariant v) {
    p.validate();
    r.validate();
    return check_range(df_raw(p, r.r, v), 1e-9);
}

double outage_df(const SnrProfile& p, TargetRate r, DfVariant v) {
    return enforce_range(outage_df_checked(p, r, v), "outage_df", p, r.r);
}

CheckedProbability outage_cj_checked(const SnrProfile& p, TargetRate r,
                                     CjDecayBase base) {
    p.validate();
    r.validate();
    return check_range(cj_raw(p, r.r, base), 1e-12);
}

double outage_cj(const SnrProfile& p, TargetRate r, CjDecayBase base) {
    return enforce_range(outage_cj_checked(p, r, base), "outage_cj", p, r.r);
}

}  // namespace relaysec
