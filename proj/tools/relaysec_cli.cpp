// Command-line front end: secrecy-outage curves (closed form + Monte Carlo)
// in a fixed CSV schema, keyed-modification protocol trials, and a
// self-contained validation report.
//
// Exit codes: 0 success, 1 argument/config error, 2 invalid operating point,
// 3 unwritable output, 4 closed form evaluated outside its trustworthy range.

#include <array>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "relaysec/analytic.hpp"
#include "relaysec/montecarlo.hpp"
#include "relaysec/philox.hpp"
#include "relaysec/protocol.hpp"
#include "relaysec/schemes.hpp"
#include "relaysec/types.hpp"

namespace {

using namespace relaysec;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitBadPoint = 2;
constexpr int kExitOutput = 3;
constexpr int kExitFormula = 4;

std::string num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

struct Options {
    double gamma_sd_db = 10.0;
    double gamma_sr_db = 20.0;
    double gamma_rd_db = 20.0;
    double gamma_se_db = 10.0;
    double gamma_re_db = 15.0;
    double rate = 0.1;
    std::uint64_t trials = 100'000;
    std::uint64_t seed = 1;
    unsigned workers = 1;
    std::string output = "-";

    // sweep
    std::string param;
    double from = 0.0;
    double to = 0.0;
    double step = 1.0;

    // protocol
    std::uint64_t n_symbols = 10'000;
    int constellation_order = 2;
    int reps = 1;
    bool noiseless = false;

    SnrProfile profile() const {
        return SnrProfile{db_to_linear(gamma_sd_db), db_to_linear(gamma_sr_db),
                          db_to_linear(gamma_rd_db), db_to_linear(gamma_se_db),
                          db_to_linear(gamma_re_db)};
    }
};

// ---------------------------------------------------------------------------
// JSON config overlay: values become new defaults; explicit flags still win.
// ---------------------------------------------------------------------------

int apply_config(const std::string& path, Options& o) {
    std::ifstream in(path);
    if (!in) {
        std::cerr << "error: cannot read config file '" << path << "'\n";
        return kExitUsage;
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        std::cerr << "error: config '" << path << "' is not valid JSON: "
                  << e.what() << "\n";
        return kExitUsage;
    }
    if (!j.is_object()) {
        std::cerr << "error: config '" << path << "' must be a JSON object\n";
        return kExitUsage;
    }
    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "gamma_sd_db") o.gamma_sd_db = value.get<double>();
            else if (key == "gamma_sr_db") o.gamma_sr_db = value.get<double>();
            else if (key == "gamma_rd_db") o.gamma_rd_db = value.get<double>();
            else if (key == "gamma_se_db") o.gamma_se_db = value.get<double>();
            else if (key == "gamma_re_db") o.gamma_re_db = value.get<double>();
            else if (key == "rate") o.rate = value.get<double>();
            else if (key == "trials") o.trials = value.get<std::uint64_t>();
            else if (key == "seed") o.seed = value.get<std::uint64_t>();
            else if (key == "workers") o.workers = value.get<unsigned>();
            else if (key == "output") o.output = value.get<std::string>();
            else if (key == "param") o.param = value.get<std::string>();
            else if (key == "from") o.from = value.get<double>();
            else if (key == "to") o.to = value.get<double>();
            else if (key == "step") o.step = value.get<double>();
            else if (key == "n_symbols") o.n_symbols = value.get<std::uint64_t>();
            else if (key == "constellation_order")
                o.constellation_order = value.get<int>();
            else if (key == "reps") o.reps = value.get<int>();
            else if (key == "noiseless") o.noiseless = value.get<bool>();
            else {
                std::cerr << "error: unknown config key '" << key << "'\n";
                return kExitUsage;
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: bad value type in config '" << path
                  << "': " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// Output plumbing.
// ---------------------------------------------------------------------------

class OutputStream {
  public:
    explicit OutputStream(const std::string& path) {
        if (path != "-") {
            file_.open(path, std::ios::out | std::ios::trunc);
            use_file_ = true;
        }
    }
    bool good() const { return !use_file_ || file_.good(); }
    std::ostream& os() { return use_file_ ? file_ : std::cout; }
    bool flush_ok() {
        os().flush();
        return good();
    }

  private:
    std::ofstream file_;
    bool use_file_ = false;
};

struct SweepSpec {
    SweepParameter parameter;
    std::vector<double> display;  // dB for gains, b/s/Hz for rate
    std::vector<double> values;   // linear gains, or rates
};

std::vector<double> arith_grid(double from, double to, double step) {
    if (!std::isfinite(from) || !std::isfinite(to) || !(step > 0.0) ||
        to < from) {
        throw std::invalid_argument(
            "sweep grid requires finite from <= to and step > 0");
    }
    std::vector<double> g;
    for (int k = 0;; ++k) {
        const double v = from + k * step;
        if (v > to + 1e-9 * step) break;
        g.push_back(v);
    }
    return g;
}

SweepSpec make_sweep(const std::string& param, double from, double to,
                     double step) {
    SweepSpec s;
    s.parameter = sweep_parameter_from_name(param);
    s.display = arith_grid(from, to, step);
    s.values.reserve(s.display.size());
    for (double v : s.display)
        s.values.push_back(s.parameter == SweepParameter::rate ? v
                                                               : db_to_linear(v));
    return s;
}

void write_provenance(std::ostream& os, const std::string& command,
                      const Options& o, const SweepSpec* sweep,
                      bool with_trials) {
    os << "# relaysec-cli command=" << command
       << " gamma_sd_db=" << num(o.gamma_sd_db)
       << " gamma_sr_db=" << num(o.gamma_sr_db)
       << " gamma_rd_db=" << num(o.gamma_rd_db)
       << " gamma_se_db=" << num(o.gamma_se_db)
       << " gamma_re_db=" << num(o.gamma_re_db) << " rate=" << num(o.rate);
    os << " sweep=";
    if (sweep) {
        os << sweep_parameter_name(sweep->parameter) << ":" << num(o.from)
           << ":" << num(o.to) << ":" << num(o.step);
    } else {
        os << "none";
    }
    os << " trials=" << (with_trials ? o.trials : 0) << " seed=" << o.seed
       << "\n";
}

// One CSV row: the operating point's closed forms plus (optionally) paired
// Monte Carlo estimates for all four schemes.
struct Row {
    std::string sweep_var = "none";
    double sweep_value = 0.0;
    double po_mf = 0.0;
    double po_dt = 0.0;
    double po_df_printed = 0.0;
    double po_df_corrected = 0.0;
    double po_cj = 0.0;
    bool has_mc = false;
    std::array<OutageEstimate, 4> mc{};
    std::uint64_t seed = 0;  // seed column when has_mc is false
};

Row analytic_row(const SnrProfile& p, TargetRate r) {
    Row row;
    row.po_mf = outage_mf(p, r);
    row.po_dt = outage_dt(p, r);
    // The printed decode-and-forward expression has a known limited validity
    // region; out-of-range excursions are clamped here (and surfaced by the
    // `validate` report) instead of aborting a whole sweep.
    row.po_df_printed = outage_df_checked(p, r, DfVariant::as_printed).value;
    row.po_df_corrected = outage_df_checked(p, r, DfVariant::corrected).value;
    row.po_cj = outage_cj(p, r, CjDecayBase::base_two);
    return row;
}

void write_rows(std::ostream& os, const std::vector<Row>& rows,
                bool rate_sweep) {
    os << "sweep_var,"
       << (rate_sweep ? "sweep_value_bpshz" : "sweep_value_db")
       << ",po_mf,po_dt,po_df_printed,po_df_corrected,po_cj"
       << ",mc_mf,mc_mf_stderr,mc_dt,mc_dt_stderr,mc_df,mc_df_stderr"
       << ",mc_cj,mc_cj_stderr,n_trials,seed\n";
    for (const Row& row : rows) {
        os << row.sweep_var << "," << num(row.sweep_value) << ","
           << num(row.po_mf) << "," << num(row.po_dt) << ","
           << num(row.po_df_printed) << "," << num(row.po_df_corrected) << ","
           << num(row.po_cj);
        if (row.has_mc) {
            for (Scheme s : kAllSchemes) {
                const auto& e = row.mc[static_cast<int>(s)];
                os << "," << num(e.p_hat) << "," << num(e.std_err);
            }
            os << "," << row.mc[0].n_trials << "," << row.mc[0].seed;
        } else {
            os << ",,,,,,,,," << 0 << "," << row.seed;
        }
        os << "\n";
    }
}

// ---------------------------------------------------------------------------
// Commands.
// ---------------------------------------------------------------------------

int run_point(const Options& o) {
    const SnrProfile p = o.profile();
    const TargetRate r{o.rate};
    p.validate();
    r.validate();
    Row row = analytic_row(p, r);
    row.seed = o.seed;

    OutputStream out(o.output);
    if (!out.good()) {
        std::cerr << "error: cannot open output '" << o.output << "'\n";
        return kExitOutput;
    }
    write_provenance(out.os(), "point", o, nullptr, /*with_trials=*/false);
    write_rows(out.os(), {row}, /*rate_sweep=*/false);
    if (!out.flush_ok()) {
        std::cerr << "error: failed writing output '" << o.output << "'\n";
        return kExitOutput;
    }
    return kExitOk;
}

int run_mc(const Options& o) {
    const SnrProfile p = o.profile();
    const TargetRate r{o.rate};
    Row row = analytic_row(p, r);
    row.has_mc = true;
    row.mc = estimate_outage_all_schemes(p, r, o.trials, o.seed, o.workers);

    OutputStream out(o.output);
    if (!out.good()) {
        std::cerr << "error: cannot open output '" << o.output << "'\n";
        return kExitOutput;
    }
    write_provenance(out.os(), "mc", o, nullptr, /*with_trials=*/true);
    write_rows(out.os(), {row}, /*rate_sweep=*/false);
    if (!out.flush_ok()) {
        std::cerr << "error: failed writing output '" << o.output << "'\n";
        return kExitOutput;
    }
    return kExitOk;
}

int run_sweep_command(const std::string& command, const Options& o) {
    const SnrProfile base = o.profile();
    const TargetRate r{o.rate};
    const SweepSpec sweep = make_sweep(o.param, o.from, o.to, o.step);
    const bool rate_sweep = sweep.parameter == SweepParameter::rate;

    const SweepResult mc = outage_curve_mc_all_schemes(
        base, r, sweep.parameter, sweep.values, o.trials, o.seed, o.workers);

    std::vector<Row> rows;
    rows.reserve(sweep.values.size());
    for (std::size_t i = 0; i < sweep.values.size(); ++i) {
        SnrProfile p = base;
        TargetRate rr = r;
        switch (sweep.parameter) {
            case SweepParameter::gamma_sd: p.gamma_sd = sweep.values[i]; break;
            case SweepParameter::gamma_sr: p.gamma_sr = sweep.values[i]; break;
            case SweepParameter::gamma_rd: p.gamma_rd = sweep.values[i]; break;
            case SweepParameter::gamma_se: p.gamma_se = sweep.values[i]; break;
            case SweepParameter::gamma_re: p.gamma_re = sweep.values[i]; break;
            case SweepParameter::rate: rr = TargetRate{sweep.values[i]}; break;
        }
        Row row = analytic_row(p, rr);
        row.sweep_var = std::string(sweep_parameter_name(sweep.parameter));
        row.sweep_value = sweep.display[i];
        row.has_mc = true;
        for (Scheme s : kAllSchemes)
            row.mc[static_cast<int>(s)] =
                mc.by_scheme[static_cast<int>(s)][i];
        rows.push_back(std::move(row));
    }

    OutputStream out(o.output);
    if (!out.good()) {
        std::cerr << "error: cannot open output '" << o.output << "'\n";
        return kExitOutput;
    }
    write_provenance(out.os(), command, o, &sweep, /*with_trials=*/true);
    write_rows(out.os(), rows, rate_sweep);
    if (!out.flush_ok()) {
        std::cerr << "error: failed writing output '" << o.output << "'\n";
        return kExitOutput;
    }
    return kExitOk;
}

int run_protocol(const Options& o) {
    ProtocolTrialConfig cfg;
    cfg.profile = o.profile();
    cfg.n_symbols = o.n_symbols;
    cfg.constellation_order = o.constellation_order;
    cfg.noiseless = o.noiseless;
    if (o.reps < 1) throw std::invalid_argument("reps must be >= 1");

    OutputStream out(o.output);
    if (!out.good()) {
        std::cerr << "error: cannot open output '" << o.output << "'\n";
        return kExitOutput;
    }
    std::ostream& os = out.os();
    os << "# relaysec-cli command=protocol gamma_sd_db=" << num(o.gamma_sd_db)
       << " gamma_sr_db=" << num(o.gamma_sr_db)
       << " gamma_rd_db=" << num(o.gamma_rd_db)
       << " gamma_se_db=" << num(o.gamma_se_db)
       << " gamma_re_db=" << num(o.gamma_re_db)
       << " n_symbols=" << o.n_symbols
       << " constellation_order=" << o.constellation_order
       << " reps=" << o.reps << " noiseless=" << (o.noiseless ? 1 : 0)
       << " seed=" << o.seed << "\n";
    os << "rep,seed,n_symbols,constellation_order,noiseless,relay_decoded,"
          "destination_ber,eavesdropper_relay_ber,eavesdropper_direct_ber\n";
    for (int rep = 0; rep < o.reps; ++rep) {
        cfg.seed = mix_seed(o.seed, std::uint64_t(rep));
        const ProtocolTrialOutcome t = run_protocol_trial(cfg);
        os << rep << "," << cfg.seed << "," << o.n_symbols << ","
           << o.constellation_order << "," << (o.noiseless ? 1 : 0) << ","
           << (t.relay_decoded ? 1 : 0) << "," << num(t.destination_ber) << ","
           << num(t.eavesdropper_relay_ber) << ","
           << num(t.eavesdropper_direct_ber) << "\n";
    }
    if (!out.flush_ok()) {
        std::cerr << "error: failed writing output '" << o.output << "'\n";
        return kExitOutput;
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// Validation report.
// ---------------------------------------------------------------------------

struct VariantScore {
    int within_3sigma = 0;
    double worst_sigma = 0.0;
};

void score_point(VariantScore& v, double closed, const OutageEstimate& e) {
    const double se = std::max(e.std_err, 1e-15);
    const double sigmas = std::fabs(closed - e.p_hat) / se;
    if (sigmas <= 3.0) ++v.within_3sigma;
    v.worst_sigma = std::max(v.worst_sigma, sigmas);
}

int run_validate(const Options& o) {
    OutputStream out(o.output == "-" ? std::string("validation_report.md")
                                     : o.output);
    if (!out.good()) {
        std::cerr << "error: cannot open output\n";
        return kExitOutput;
    }
    std::ostream& os = out.os();
    const SnrProfile base = o.profile();
    const TargetRate r{o.rate};
    base.validate();
    r.validate();

    os << "# Validation report\n\n";
    os << "Operating profile: gamma_sd=" << num(o.gamma_sd_db)
       << " dB, gamma_sr=" << num(o.gamma_sr_db)
       << " dB, gamma_rd=" << num(o.gamma_rd_db)
       << " dB, gamma_se=" << num(o.gamma_se_db)
       << " dB, gamma_re=" << num(o.gamma_re_db) << " dB, rate=" << num(o.rate)
       << " b/s/Hz, trials=" << o.trials << ", seed=" << o.seed << ".\n\n";

    // ---- 1. MF closed form vs quadrature -------------------------------
    os << "## Modify-and-forward: closed form vs adaptive quadrature\n\n";
    os << "| gamma_se (dB) | closed form | quadrature | abs diff |\n";
    os << "|---:|---:|---:|---:|\n";
    double worst_quad = 0.0;
    for (int i = 0; i <= 10; ++i) {
        SnrProfile p = base;
        p.gamma_se = db_to_linear(2.0 * i);
        const double closed = outage_mf(p, r);
        const double quad = outage_mf_quadrature(p, r, 1e-8);
        worst_quad = std::max(worst_quad, std::fabs(closed - quad));
        os << "| " << 2 * i << " | " << num(closed) << " | " << num(quad)
           << " | " << num(std::fabs(closed - quad)) << " |\n";
    }
    os << "\nLargest deviation: " << num(worst_quad)
       << (worst_quad < 1e-6 ? " (agrees within 1e-6).\n\n"
                             : " (EXCEEDS the 1e-6 agreement target).\n\n");

    // ---- 2. MF/DT closed forms vs Monte Carlo ---------------------------
    std::vector<double> se_grid_lin;
    std::vector<int> se_grid_db;
    for (int i = 0; i <= 10; ++i) {
        se_grid_db.push_back(2 * i);
        se_grid_lin.push_back(db_to_linear(2.0 * i));
    }
    const SweepResult fig_se = outage_curve_mc_all_schemes(
        base, r, SweepParameter::gamma_se, se_grid_lin, o.trials, o.seed,
        o.workers);

    os << "## Closed forms vs Monte Carlo (gamma_se sweep, 3-sigma test)\n\n";
    os << "| gamma_se (dB) | mf closed | mf mc | mf sigmas | dt closed | dt mc "
          "| dt sigmas |\n";
    os << "|---:|---:|---:|---:|---:|---:|---:|\n";
    VariantScore mf_score, dt_score;
    for (std::size_t i = 0; i < se_grid_lin.size(); ++i) {
        SnrProfile p = base;
        p.gamma_se = se_grid_lin[i];
        const double mf_closed = outage_mf(p, r);
        const double dt_closed = outage_dt(p, r);
        const auto& mf_e = fig_se.by_scheme[int(Scheme::mf)][i];
        const auto& dt_e = fig_se.by_scheme[int(Scheme::dt)][i];
        score_point(mf_score, mf_closed, mf_e);
        score_point(dt_score, dt_closed, dt_e);
        os << "| " << se_grid_db[i] << " | " << num(mf_closed) << " | "
           << num(mf_e.p_hat) << " | "
           << num(std::fabs(mf_closed - mf_e.p_hat) /
                  std::max(mf_e.std_err, 1e-15))
           << " | " << num(dt_closed) << " | " << num(dt_e.p_hat) << " | "
           << num(std::fabs(dt_closed - dt_e.p_hat) /
                  std::max(dt_e.std_err, 1e-15))
           << " |\n";
    }
    os << "\nmf: " << mf_score.within_3sigma << "/11 points within 3 sigma; "
       << "dt: " << dt_score.within_3sigma << "/11.\n\n";

    // ---- 3. DF variant arbitration --------------------------------------
    std::vector<double> sr_grid_lin;
    std::vector<int> sr_grid_db;
    for (int i = 0; i <= 10; ++i) {
        sr_grid_db.push_back(3 * i);
        sr_grid_lin.push_back(db_to_linear(3.0 * i));
    }
    const SweepResult fig_sr = outage_curve_mc_all_schemes(
        base, r, SweepParameter::gamma_sr, sr_grid_lin, o.trials, o.seed,
        o.workers);

    os << "## Decode-and-forward: which transcription matches the sampler?\n\n";
    os << "The closed form circulates with a self-contradictory exponent; "
          "both readings are evaluated against paired Monte Carlo on the "
          "gamma_sr sweep grid.\n\n";
    os << "| gamma_sr (dB) | mc estimate | std err | as_printed | sigmas | "
          "corrected | sigmas |\n";
    os << "|---:|---:|---:|---:|---:|---:|---:|\n";
    VariantScore printed_score, corrected_score;
    for (std::size_t i = 0; i < sr_grid_lin.size(); ++i) {
        SnrProfile p = base;
        p.gamma_sr = sr_grid_lin[i];
        const double v_printed =
            outage_df_checked(p, r, DfVariant::as_printed).value;
        const double v_corrected =
            outage_df_checked(p, r, DfVariant::corrected).value;
        const auto& e = fig_sr.by_scheme[int(Scheme::df)][i];
        score_point(printed_score, v_printed, e);
        score_point(corrected_score, v_corrected, e);
        os << "| " << sr_grid_db[i] << " | " << num(e.p_hat) << " | "
           << num(e.std_err) << " | " << num(v_printed) << " | "
           << num(std::fabs(v_printed - e.p_hat) / std::max(e.std_err, 1e-15))
           << " | " << num(v_corrected) << " | "
           << num(std::fabs(v_corrected - e.p_hat) /
                  std::max(e.std_err, 1e-15))
           << " |\n";
    }
    os << "\nas_printed: " << printed_score.within_3sigma
       << "/11 within 3 sigma (worst " << num(printed_score.worst_sigma)
       << "); corrected: " << corrected_score.within_3sigma << "/11 (worst "
       << num(corrected_score.worst_sigma) << ").\n\n";
    const bool printed_ok = printed_score.within_3sigma >= 10;
    const bool corrected_ok = corrected_score.within_3sigma >= 10;
    if (printed_ok && !corrected_ok) {
        os << "Conclusion: the sampler matches variant `as_printed`; the "
              "sign-flipped exponent reading is ruled out at this trial "
              "count.\n\n";
    } else if (corrected_ok && !printed_ok) {
        os << "Conclusion: the sampler matches variant `corrected`; the "
              "expression as printed is ruled out at this trial count.\n\n";
    } else if (printed_ok && corrected_ok) {
        os << "Conclusion: inconclusive — both variants are within sampling "
              "error at this trial count; rerun with more trials (the two "
              "readings differ by ~1e-3 here, resolvable near 1e7 trials)."
              "\n\n";
    } else {
        os << "Conclusion: neither variant matches at this trial count; the "
              "per-point deviations are documented in the table above.\n\n";
    }
    os << "Caveat: the `as_printed` expression leaves [0,1] for sub-unity "
          "gains at high rates (e.g. all gains near 0.5 at rate 1.6 yields a "
          "raw value below -1); the checked evaluator flags such points and "
          "this tool clamps them in CSV output.\n\n";

    // ---- 4. CJ decay base ------------------------------------------------
    os << "## Cooperative jamming: decay base of the leading factor\n\n";
    os << "The circulated expression decays as 2^(-kappa); the base-e "
          "reading e^(-kappa) arises naturally from exponential-CDF "
          "integrals and is compared as a diagnostic.\n\n";
    os << "| gamma_se (dB) | mc estimate | std err | base-two | sigmas | "
          "base-e | sigmas |\n";
    os << "|---:|---:|---:|---:|---:|---:|---:|\n";
    VariantScore two_score, e_score;
    for (std::size_t i = 0; i < se_grid_lin.size(); ++i) {
        SnrProfile p = base;
        p.gamma_se = se_grid_lin[i];
        const double v2 = outage_cj(p, r, CjDecayBase::base_two);
        const double ve = outage_cj(p, r, CjDecayBase::base_e);
        const auto& e = fig_se.by_scheme[int(Scheme::cj)][i];
        score_point(two_score, v2, e);
        score_point(e_score, ve, e);
        os << "| " << se_grid_db[i] << " | " << num(e.p_hat) << " | "
           << num(e.std_err) << " | " << num(v2) << " | "
           << num(std::fabs(v2 - e.p_hat) / std::max(e.std_err, 1e-15))
           << " | " << num(ve) << " | "
           << num(std::fabs(ve - e.p_hat) / std::max(e.std_err, 1e-15))
           << " |\n";
    }
    os << "\nbase-two: " << two_score.within_3sigma
       << "/11 within 3 sigma (worst " << num(two_score.worst_sigma)
       << "); base-e: " << e_score.within_3sigma << "/11 (worst "
       << num(e_score.worst_sigma) << ").\n\n";
    if (e_score.within_3sigma > two_score.within_3sigma) {
        os << "Conclusion: the base-e reading tracks the sampler better; the "
              "base-two leading factor shows a small systematic offset "
              "(~1e-3 at this operating point) consistent with a decay-base "
              "transcription slip.\n\n";
    } else if (two_score.within_3sigma > e_score.within_3sigma) {
        os << "Conclusion: the base-two reading tracks the sampler better at "
              "this trial count.\n\n";
    } else {
        os << "Conclusion: both readings are within sampling error at this "
              "trial count; increase trials to separate them (they differ by "
              "~1e-3).\n\n";
    }

    // ---- 5. Keyed modification protocol ---------------------------------
    os << "## Keyed modification protocol\n\n";
    ProtocolTrialConfig pc;
    pc.profile = base;
    pc.profile.gamma_sr = 1e12;  // pin the first hop above decode threshold
    pc.n_symbols = 100'000;
    pc.constellation_order = 2;
    pc.seed = o.seed;
    pc.noiseless = true;
    const ProtocolTrialOutcome clean = run_protocol_trial(pc);
    pc.noiseless = false;
    const ProtocolTrialOutcome noisy = run_protocol_trial(pc);
    os << "(first hop pinned far above the decode threshold to exercise the "
          "keyed phase; " << pc.n_symbols << " binary symbols)\n\n";
    os << "- noiseless matched restoration: destination BER = "
       << num(clean.destination_ber) << " -> bit-exact: "
       << (clean.destination_ber == 0.0 ? "yes" : "NO") << "\n";
    os << "- noiseless eavesdropper BER on the keyed block: "
       << num(clean.eavesdropper_relay_ber) << " (coin-flip expected)\n";
    os << "- noisy destination BER: " << num(noisy.destination_ber) << "\n";
    os << "- noisy eavesdropper BER on the keyed block: "
       << num(noisy.eavesdropper_relay_ber)
       << " (inside [0.45, 0.55]: "
       << (noisy.eavesdropper_relay_ber > 0.45 &&
                   noisy.eavesdropper_relay_ber < 0.55
               ? "yes"
               : "NO")
       << ")\n";
    os << "- noisy eavesdropper BER on the unkeyed direct block: "
       << num(noisy.eavesdropper_direct_ber) << " (unprotected baseline)\n";

    if (!out.flush_ok()) {
        std::cerr << "error: failed writing report\n";
        return kExitOutput;
    }
    if (o.output == "-") {
        std::cout << "report written to validation_report.md\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    Options opt;

    // The config file (if any) provides new defaults; explicit flags win.
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        std::string path;
        if (arg == "--config" && i + 1 < argc) path = argv[i + 1];
        else if (arg.rfind("--config=", 0) == 0) path = arg.substr(9);
        if (!path.empty()) {
            const int rc = apply_config(path, opt);
            if (rc != kExitOk) return rc;
        }
    }

    CLI::App app{
        "Secrecy-outage toolkit: closed forms, Monte Carlo cross-checks, and "
        "a keyed modify/restore relaying demo"};
    app.require_subcommand(1);
    std::string config_path;  // consumed above; registered so parsing accepts it

    auto add_common = [&](CLI::App* cmd, bool with_mc) {
        cmd->add_option("--config", config_path,
                        "JSON file with default option values");
        cmd->add_option("--gamma-sd-db", opt.gamma_sd_db,
                        "source->destination mean SNR (dB)");
        cmd->add_option("--gamma-sr-db", opt.gamma_sr_db,
                        "source->relay mean SNR (dB)");
        cmd->add_option("--gamma-rd-db", opt.gamma_rd_db,
                        "relay->destination mean SNR (dB)");
        cmd->add_option("--gamma-se-db", opt.gamma_se_db,
                        "source->eavesdropper mean SNR (dB)");
        cmd->add_option("--gamma-re-db", opt.gamma_re_db,
                        "relay->eavesdropper mean SNR (dB)");
        cmd->add_option("--rate", opt.rate, "target secrecy rate (b/s/Hz)");
        cmd->add_option("--seed", opt.seed, "master seed");
        cmd->add_option("--output,-o", opt.output,
                        "output path ('-' for stdout)");
        if (with_mc) {
            cmd->add_option("--trials", opt.trials, "Monte Carlo trials")
                ->check(CLI::PositiveNumber);
            cmd->add_option("--workers", opt.workers,
                            "worker threads (never affects results)")
                ->check(CLI::Range(1u, 1024u));
        }
    };

    CLI::App* point = app.add_subcommand(
        "point", "closed-form outage of all schemes at one operating point");
    add_common(point, /*with_mc=*/false);

    CLI::App* mc = app.add_subcommand(
        "mc", "closed forms plus paired Monte Carlo at one operating point");
    add_common(mc, /*with_mc=*/true);

    CLI::App* sweep = app.add_subcommand(
        "sweep", "sweep one parameter; one CSV row per grid point");
    add_common(sweep, /*with_mc=*/true);
    sweep->add_option("--param", opt.param,
                      "gamma_sd|gamma_sr|gamma_rd|gamma_se|gamma_re|rate")
        ->required()
        ->check(CLI::IsMember({"gamma_sd", "gamma_sr", "gamma_rd", "gamma_se",
                               "gamma_re", "rate"}));
    sweep->add_option("--from", opt.from, "grid start (dB, or b/s/Hz for rate)")
        ->required();
    sweep->add_option("--to", opt.to, "grid end (inclusive)")->required();
    sweep->add_option("--step", opt.step, "grid step")->required();

    CLI::App* fig2 = app.add_subcommand(
        "fig2", "preset: sweep gamma_se from 0 to 20 dB in 2 dB steps");
    add_common(fig2, /*with_mc=*/true);

    CLI::App* fig3 = app.add_subcommand(
        "fig3", "preset: sweep gamma_sr from 0 to 30 dB in 3 dB steps");
    add_common(fig3, /*with_mc=*/true);

    CLI::App* fig4 = app.add_subcommand(
        "fig4", "preset: sweep the target rate from 0.1 to 2.0 b/s/Hz");
    add_common(fig4, /*with_mc=*/true);

    CLI::App* protocol = app.add_subcommand(
        "protocol", "symbol-level keyed modify/restore trials");
    add_common(protocol, /*with_mc=*/false);
    protocol->add_option("--symbols", opt.n_symbols, "symbols per trial");
    protocol->add_option("--order", opt.constellation_order,
                         "PSK order (power of two in [2, 256])");
    protocol->add_option("--reps", opt.reps, "number of trials")
        ->check(CLI::PositiveNumber);
    protocol->add_flag("--noiseless", opt.noiseless,
                       "disable receiver noise (isolates the key logic)");

    CLI::App* validate = app.add_subcommand(
        "validate",
        "write a markdown report cross-checking closed forms, sampler, and "
        "protocol");
    add_common(validate, /*with_mc=*/true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (app.got_subcommand(point)) return run_point(opt);
        if (app.got_subcommand(mc)) return run_mc(opt);
        if (app.got_subcommand(sweep)) return run_sweep_command("sweep", opt);
        if (app.got_subcommand(fig2)) {
            opt.param = "gamma_se";
            opt.from = 0.0;
            opt.to = 20.0;
            opt.step = 2.0;
            return run_sweep_command("fig2", opt);
        }
        if (app.got_subcommand(fig3)) {
            opt.param = "gamma_sr";
            opt.from = 0.0;
            opt.to = 30.0;
            opt.step = 3.0;
            return run_sweep_command("fig3", opt);
        }
        if (app.got_subcommand(fig4)) {
            opt.param = "rate";
            opt.from = 0.1;
            opt.to = 2.0;
            opt.step = 0.1;
            return run_sweep_command("fig4", opt);
        }
        if (app.got_subcommand(protocol)) return run_protocol(opt);
        if (app.got_subcommand(validate)) return run_validate(opt);
    } catch (const formula_error& e) {
        std::cerr << "formula error: " << e.what() << "\n";
        return kExitFormula;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid operating point: " << e.what() << "\n";
        return kExitBadPoint;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
