#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "relaysec/schemes.hpp"
#include "relaysec/types.hpp"

namespace relaysec {

// Stream tag separating channel-draw randomness from the protocol module's
// streams (which use tags 2..5 under their own seeds).
inline constexpr std::uint32_t kChannelDrawStream = 1;

// The five instantaneous link SNRs of trial `trial_index` under `seed`:
// exponential variates addressed by (seed, trial, link) — no sequential
// state, so any subset of trials can be drawn on any worker.
ChannelDraw draw_channel(const SnrProfile& p, std::uint64_t trial_index,
                         std::uint64_t seed);

struct McConfig {
    SnrProfile profile;
    TargetRate rate;
    Scheme scheme = Scheme::mf;
    std::uint64_t n_trials = 1'000'000;
    std::uint64_t seed = 0;
};

// Monte Carlo estimate of P(capacity(scheme) < rate).  `workers` threads
// split the trial range; the estimate is identical for any worker count
// because the counts are integers and the draws are counter-addressed.
OutageEstimate estimate_outage(const McConfig& cfg, unsigned workers = 1);

// Same draws scored against all four schemes at once (paired estimates,
// indexed by static_cast<int>(Scheme)).  Pairing makes cross-scheme
// comparisons exact: every scheme sees the same channel realizations.
std::array<OutageEstimate, 4> estimate_outage_all_schemes(
    const SnrProfile& p, TargetRate r, std::uint64_t n_trials,
    std::uint64_t seed, unsigned workers = 1);

enum class SweepParameter { gamma_sd, gamma_sr, gamma_rd, gamma_se, gamma_re, rate };

// Throws std::invalid_argument for names outside
// {gamma_sd, gamma_sr, gamma_rd, gamma_se, gamma_re, rate}.
SweepParameter sweep_parameter_from_name(std::string_view name);
std::string_view sweep_parameter_name(SweepParameter p);

struct SweepResult {
    SweepParameter parameter = SweepParameter::gamma_se;
    std::vector<double> grid;  // linear gains, or rate in b/s/Hz
    // One column per scheme, indexed by static_cast<int>(Scheme); a column is
    // empty when that scheme was not requested.
    std::array<std::vector<OutageEstimate>, 4> by_scheme;
};

// One estimate_outage per grid point for cfg.scheme, with per-point seeds
// derived from cfg.seed and the grid index.  Grid values must be strictly
// increasing (linear gains, or rate values for SweepParameter::rate).
SweepResult outage_curve_mc(const McConfig& cfg, SweepParameter parameter,
                            std::span<const double> grid,
                            unsigned workers = 1);

// All four schemes on paired draws at every grid point.
SweepResult outage_curve_mc_all_schemes(const SnrProfile& p, TargetRate r,
                                        SweepParameter parameter,
                                        std::span<const double> grid,
                                        std::uint64_t n_trials,
                                        std::uint64_t seed,
                                        unsigned workers = 1);

}  // namespace relaysec
