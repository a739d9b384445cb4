#pragma once

#include <array>
#include <string_view>

#include "relaysec/types.hpp"

namespace relaysec {

// The four transmission schemes whose secrecy outage is compared.
enum class Scheme { mf, dt, df, cj };

inline constexpr std::array<Scheme, 4> kAllSchemes{Scheme::mf, Scheme::dt,
                                                   Scheme::df, Scheme::cj};

std::string_view scheme_name(Scheme s);  // "mf", "dt", "df", "cj"

// Instantaneous secrecy capacity (b/s/Hz) of each scheme for one channel
// realization.  All are >= 0; the max(.,0) clamp models the impossibility of
// negative secure rate.

// Modify-and-forward: two-phase relaying (hence the 1/2 factors); the
// destination needs both the relay decode and the combined direct+relay
// observation, while the eavesdropper can exploit only the direct phase
// because the relayed block is modified beyond its reach.
double capacity_mf(const ChannelDraw& d);

// Direct transmission: single phase at doubled power (factor 2 on both
// instantaneous SNRs), full rate (no 1/2).
double capacity_dt(const ChannelDraw& d);

// Decode-and-forward: like MF at the destination, but the relay repeats the
// source codeword, so the eavesdropper coherently combines both phases
// (x_se + x_re).
double capacity_df(const ChannelDraw& d);

// Cooperative jamming: the relay jams while the source transmits; the jam
// raises the interference floor at both destination (x_rd) and eavesdropper
// (x_re).  Half-rate model, consistent with the closed form's 2^{2R}
// thresholds.
double capacity_cj(const ChannelDraw& d);

double capacity(Scheme s, const ChannelDraw& d);

}  // namespace relaysec
