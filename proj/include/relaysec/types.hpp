#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>

namespace relaysec {

// Converts a decibel quantity to linear scale: 10^(x_db/10).
double db_to_linear(double x_db);

// Average received SNRs (linear, dimensionless) of the five links in the
// relay wiretap geometry: source->destination, source->relay,
// relay->destination, source->eavesdropper, relay->eavesdropper.
// Each is the mean of the corresponding instantaneous SNR under Rayleigh
// fading, with transmit power and noise already folded in.
struct SnrProfile {
    double gamma_sd = 1.0;
    double gamma_sr = 1.0;
    double gamma_rd = 1.0;
    double gamma_se = 1.0;
    double gamma_re = 1.0;

    // Throws std::invalid_argument unless every gain is finite and > 0.
    void validate() const;
};

// Target secrecy rate in b/s/Hz.
struct TargetRate {
    double r = 0.1;

    // Throws std::invalid_argument unless r is finite and > 0.
    void validate() const;
};

// One realization of the five instantaneous link SNRs.  Under Rayleigh
// fading each field is exponentially distributed with mean equal to the
// matching SnrProfile field.
struct ChannelDraw {
    double x_sd = 0.0;
    double x_sr = 0.0;
    double x_rd = 0.0;
    double x_se = 0.0;
    double x_re = 0.0;
};

// Result of a Monte Carlo outage estimate.
struct OutageEstimate {
    double p_hat = 0.0;           // estimated outage probability
    double std_err = 0.0;         // binomial standard error sqrt(p(1-p)/n)
    std::uint64_t n_trials = 0;
    std::uint64_t seed = 0;
};

// Thrown when a closed-form probability lands outside [0,1] by more than the
// documented numerical tolerance: the expression was evaluated outside the
// region where its transcription is trustworthy.
class formula_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Closed-form value plus its range diagnosis.  `value` is always clamped
// into [0,1]; `raw` is the unclamped expression value; `in_range` tells
// whether the excursion (if any) stayed within the caller's tolerance.
struct CheckedProbability {
    double value = 0.0;
    double raw = 0.0;
    bool in_range = true;
};

// Nudges `b` away from `a` when the two are so close that difference-form
// denominators (a - b) lose all precision: when |a - b| < 1e-6*b, returns
// (a, b*(1 - 1e-6)).  The induced error is bounded by the relative
// perturbation and is far below Monte Carlo resolution.
std::pair<double, double> separate_gains(double a, double b);

}  // namespace relaysec
