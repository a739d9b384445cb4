#pragma once

#include "relaysec/types.hpp"

namespace relaysec {

// The decode-and-forward closed form circulates with an exponent whose sign
// pattern is self-contradictory; both readings are first-class citizens and
// Monte Carlo arbitrates between them (see the validate command's report).
//   as_printed: a(x) = x^2/(g_sr*2^{-2R}+x) * exp(-(2^{-2R}-1)/x)
//   corrected:  same with exponent numerator replaced by 2^{2R}-1
enum class DfVariant { as_printed, corrected };

// Which base the leading decay factor of the cooperative-jamming closed form
// uses.  The circulated expression decays as 2^{-kappa}; replacing it with
// e^{-kappa} is the natural outcome of the underlying exponential-CDF
// integrals and is offered as a diagnostic for the validate report.
enum class CjDecayBase { base_two, base_e };

// Density of the sum of the two destination-bound instantaneous SNRs
// (x_sd + x_rd), a hypoexponential with means gamma_sd and gamma_rd.
// Returns 0 for x < 0.
double density_x(double x, const SnrProfile& p);

// Closed-form secrecy outage probability of modify-and-forward.
// Round-off excursions outside [0,1] smaller than 1e-12 are clamped; larger
// ones throw formula_error (they would indicate a transcription bug).
double outage_mf(const SnrProfile& p, TargetRate r);
CheckedProbability outage_mf_checked(const SnrProfile& p, TargetRate r);

// Derivation-level oracle for outage_mf: numerically integrates the
// four-term decomposition of P(secrecy capacity < R) over the joint density
// of (x_sd + x_rd, x_se, x_sr), using adaptive quadrature to `abs_tol`.
// Throws formula_error if the quadrature fails to converge.
double outage_mf_quadrature(const SnrProfile& p, TargetRate r,
                            double abs_tol = 1e-8);

// Closed-form secrecy outage probability of direct transmission
// (uses only gamma_sd and gamma_se; algebraically always inside [0,1]).
double outage_dt(const SnrProfile& p, TargetRate r);

// Closed-form secrecy outage probability of decode-and-forward under the
// chosen variant.  Excursions outside [0,1] up to 1e-9 are clamped; larger
// ones throw formula_error.  The printed expression has a limited
// trustworthy region (roughly gains >= 1 and modest rates); outside it,
// prefer outage_df_checked, which never throws and reports the raw value.
double outage_df(const SnrProfile& p, TargetRate r, DfVariant v);
CheckedProbability outage_df_checked(const SnrProfile& p, TargetRate r,
                                     DfVariant v);

// Closed-form secrecy outage probability of cooperative jamming.  The
// expression has a removable double pole where kappa + 1/gamma_rd equals
// beta/gamma_re; inside a 1e-4 relative guard band around it, cancellation
// noise divided by the squared pole distance would dominate, so gamma_re is
// perturbed by a relative 1e-3 before evaluation (bias well under Monte
// Carlo resolution).  Clamp/throw policy as outage_mf.
double outage_cj(const SnrProfile& p, TargetRate r,
                 CjDecayBase base = CjDecayBase::base_two);
CheckedProbability outage_cj_checked(const SnrProfile& p, TargetRate r,
                                     CjDecayBase base = CjDecayBase::base_two);

}  // namespace relaysec
