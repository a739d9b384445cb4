#include "relaysec/schemes.hpp"

#include <algorithm>
#include <cmath>

namespace relaysec {

std::string_view scheme_name(Scheme s) {
    switch (s) {
        case Scheme::mf: return "mf";
        case Scheme::dt: return "dt";
        case Scheme::df: return "df";
        case Scheme::cj: return "cj";
    }
    return "?";
}

namespace {

// Shared destination rate of the two-phase relaying schemes: the relay must
// decode (first log) and the destination combines direct + relayed copies
// (second log).
double relayed_destination_rate(const ChannelDraw& d) {
    return 0.5 * std::min(std::log2(1.0 + d.x_sr),
                          std::log2(1.0 + d.x_sd + d.x_rd));
}

}  // namespace

double capacity_mf(const ChannelDraw& d) {
    const double ce = 0.5 * std::log2(1.0 + d.x_se);
    return std::max(relayed_destination_rate(d) - ce, 0.0);
}

double capacity_dt(const ChannelDraw& d) {
    return std::max(
        std::log2(1.0 + 2.0 * d.x_sd) - std::log2(1.0 + 2.0 * d.x_se), 0.0);
}

double capacity_df(const ChannelDraw& d) {
    const double ce = 0.5 * std::log2(1.0 + d.x_se + d.x_re);
    return std::max(relayed_destination_rate(d) - ce, 0.0);
}

double capacity_cj(const ChannelDraw& d) {
    const double cd = 0.5 * std::log2(1.0 + d.x_sd / (1.0 + d.x_rd));
    const double ce = 0.5 * std::log2(1.0 + d.x_se / (1.0 + d.x_re));
    return std::max(cd - ce, 0.0);
}

double capacity(Scheme s, const ChannelDraw& d) {
    switch (s) {
        case Scheme::mf: return capacity_mf(d);
        case Scheme::dt: return capacity_dt(d);
        case Scheme::df: return capacity_df(d);
        case Scheme::cj: return capacity_cj(d);
    }
    return 0.0;
}

}  // namespace relaysec
