#include "relaysec/montecarlo.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>

#include "relaysec/philox.hpp"

namespace relaysec {

namespace {

double exponential_at(std::uint64_t trial, std::uint64_t seed,
                      std::uint32_t link, double mean) {
    const auto words = philox_words(
        seed, {std::uint32_t(trial), std::uint32_t(trial >> 32), link,
               kChannelDrawStream});
    return to_exponential(words[0], mean);
}

OutageEstimate finish(double count, std::uint64_t n, std::uint64_t seed) {
    OutageEstimate est;
    est.p_hat = count / double(n);
    est.std_err = std::sqrt(est.p_hat * (1.0 - est.p_hat) / double(n));
    est.n_trials = n;
    est.seed = seed;
    return est;
}

// Splits [0, n) into `workers` contiguous chunks, runs `body(first, last,
// slot)` on each, then lets the caller reduce the per-slot integer counts in
// slot order — the result is independent of scheduling.
template <class Body>
void parallel_chunks(std::uint64_t n, unsigned workers, Body&& body) {
    workers = std::max(1u, workers);
    if (workers == 1 || n < 2 * workers) {
        body(std::uint64_t{0}, n, 0u);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::uint64_t chunk = n / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::uint64_t first = w * chunk;
        const std::uint64_t last = (w + 1 == workers) ? n : first + chunk;
        pool.emplace_back([&, first, last, w] { body(first, last, w); });
    }
    for (auto& th : pool) th.join();
}

}  // namespace

ChannelDraw draw_channel(const SnrProfile& p, std::uint64_t trial_index,
                         std::uint64_t seed) {
    ChannelDraw d;
    d.x_sd = exponential_at(trial_index, seed, 0, p.gamma_sd);
    d.x_sr = exponential_at(trial_index, seed, 1, p.gamma_sr);
    d.x_rd = exponential_at(trial_index, seed, 2, p.gamma_rd);
    d.x_se = exponential_at(trial_index, seed, 3, p.gamma_se);
    d.x_re = exponential_at(trial_index, seed, 4, p.gamma_re);
    return d;
}

OutageEstimate estimate_outage(const McConfig& cfg, unsigned workers) {
    cfg.profile.validate();
    cfg.rate.validate();
    if (cfg.n_trials == 0) {
        throw std::invalid_argument("estimate_outage: n_trials must be >= 1");
    }
    std::vector<std::uint64_t> counts(std::max(1u, workers), 0);
    parallel_chunks(cfg.n_trials, workers,
                    [&](std::uint64_t first, std::uint64_t last, unsigned w) {
                        std::uint64_t c = 0;
                        for (std::uint64_t i = first; i < last; ++i) {
                            const ChannelDraw d =
                                draw_channel(cfg.profile, i, cfg.seed);
                            if (capacity(cfg.scheme, d) < cfg.rate.r) ++c;
                        }
                        counts[w] = c;
                    });
    std::uint64_t total = 0;
    for (auto c : counts) total += c;
    return finish(double(total), cfg.n_trials, cfg.seed);
}

std::array<OutageEstimate, 4> estimate_outage_all_schemes(
    const SnrProfile& p, TargetRate r, std::uint64_t n_trials,
    std::uint64_t seed, unsigned workers) {
    p.validate();
    r.validate();
    if (n_trials == 0) {
        throw std::invalid_argument(
            "estimate_outage_all_schemes: n_trials must be >= 1");
    }
    std::vector<std::array<std::uint64_t, 4>> counts(std::max(1u, workers),
                                                     {0, 0, 0, 0});
    parallel_chunks(n_trials, workers,
                    [&](std::uint64_t first, std::uint64_t last, unsigned w) {
                        std::array<std::uint64_t, 4> c{0, 0, 0, 0};
                        for (std::uint64_t i = first; i < last; ++i) {
                            const ChannelDraw d = draw_channel(p, i, seed);
                            for (Scheme s : kAllSchemes) {
                                if (capacity(s, d) < r.r) {
                                    ++c[static_cast<int>(s)];
                                }
                            }
                        }
                        counts[w] = c;
                    });
    std::array<OutageEstimate, 4> out;
    for (int s = 0; s < 4; ++s) {
        std::uint64_t total = 0;
        for (const auto& c : counts) total += c[s];
        out[s] = finish(double(total), n_trials, seed);
    }
    return out;
}

SweepParameter sweep_parameter_from_name(std::string_view name) {
    if (name == "gamma_sd") return SweepParameter::gamma_sd;
    if (name == "gamma_sr") return SweepParameter::gamma_sr;
    if (name == "gamma_rd") return SweepParameter::gamma_rd;
    if (name == "gamma_se") return SweepParameter::gamma_se;
    if (name == "gamma_re") return SweepParameter::gamma_re;
    if (name == "rate") return SweepParameter::rate;
    throw std::invalid_argument("unknown sweep parameter: " +
                                std::string(name));
}

std::string_view sweep_parameter_name(SweepParameter p) {
    switch (p) {
        case SweepParameter::gamma_sd: return "gamma_sd";
        case SweepParameter::gamma_sr: return "gamma_sr";
        case SweepParameter::gamma_rd: return "gamma_rd";
        case SweepParameter::gamma_se: return "gamma_se";
        case SweepParameter::gamma_re: return "gamma_re";
        case SweepParameter::rate: return "rate";
    }
    return "?";
}

namespace {

void apply_sweep_value(SnrProfile& p, TargetRate& r, SweepParameter par,
                       double value) {
    switch (par) {
        case SweepParameter::gamma_sd: p.gamma_sd = value; break;
        case SweepParameter::gamma_sr: p.gamma_sr = value; break;
        case SweepParameter::gamma_rd: p.gamma_rd = value; break;
        case SweepParameter::gamma_se: p.gamma_se = value; break;
        case SweepParameter::gamma_re: p.gamma_re = value; break;
        case SweepParameter::rate: r.r = value; break;
    }
}

void require_grid(std::span<const double> grid) {
    if (grid.empty()) {
        throw std::invalid_argument("sweep grid must be nonempty");
    }
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) {
            throw std::invalid_argument(
                "sweep grid must be strictly increasing");
        }
    }
}

}  // namespace

SweepResult outage_curve_mc(const McConfig& cfg, SweepParameter parameter,
                            std::span<const double> grid, unsigned workers) {
    require_grid(grid);
    SweepResult result;
    result.parameter = parameter;
    result.grid.assign(grid.begin(), grid.end());
    auto& column = result.by_scheme[static_cast<int>(cfg.scheme)];
    column.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        McConfig point = cfg;
        apply_sweep_value(point.profile, point.rate, parameter, grid[i]);
        point.seed = mix_seed(cfg.seed, i);
        column.push_back(estimate_outage(point, workers));
    }
    return result;
}

SweepResult outage_curve_mc_all_schemes(const SnrProfile& p, TargetRate r,
                                        SweepParameter parameter,
                                        std::span<const double> grid,
                                        std::uint64_t n_trials,
                                        std::uint64_t seed, unsigned workers) {
    require_grid(grid);
    SweepResult result;
    result.parameter = parameter;
    result.grid.assign(grid.begin(), grid.end());
    for (auto& column : result.by_scheme) column.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        SnrProfile profile = p;
        TargetRate rate = r;
        apply_sweep_value(profile, rate, parameter, grid[i]);
        const auto estimates = estimate_outage_all_schemes(
            profile, rate, n_trials, mix_seed(seed, i), workers);
        for (int s = 0; s < 4; ++s) {
            result.by_scheme[s].push_back(estimates[s]);
        }
    }
    return result;
}

}  // namespace relaysec
