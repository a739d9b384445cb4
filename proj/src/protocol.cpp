#include "relaysec/protocol.hpp"

#include <bit>
#include <cmath>
#include <numbers>

#include "relaysec/philox.hpp"

namespace relaysec {

namespace {

bool is_pow2(int v) { return v >= 1 && std::has_single_bit(unsigned(v)); }

int log2_int(int v) { return std::bit_width(unsigned(v)) - 1; }

Philox4x32::Counter symbol_counter(std::uint64_t i, std::uint32_t slot,
                                   std::uint32_t stream) {
    return {std::uint32_t(i), std::uint32_t(i >> 32), slot, stream};
}

}  // namespace

void QuantizerConfig::validate() const {
    if (!is_pow2(phase_levels) || phase_levels < 2) {
        throw std::invalid_argument(
            "QuantizerConfig: phase_levels must be a power of two >= 2");
    }
    if (!is_pow2(magnitude_levels)) {
        throw std::invalid_argument(
            "QuantizerConfig: magnitude_levels must be a power of two >= 1");
    }
    if (magnitude_thresholds.size() != std::size_t(magnitude_levels - 1)) {
        throw std::invalid_argument(
            "QuantizerConfig: need magnitude_levels-1 thresholds");
    }
    double prev = 0.0;
    for (double th : magnitude_thresholds) {
        if (!(th > prev) || !std::isfinite(th)) {
            throw std::invalid_argument(
                "QuantizerConfig: thresholds must be ascending and positive");
        }
        prev = th;
    }
}

int QuantizerConfig::key_bits() const {
    return log2_int(phase_levels) + log2_int(magnitude_levels);
}

std::uint64_t ModificationKey::packed() const {
    std::uint64_t v = 0;
    for (std::uint8_t b : bits) v = (v << 1) | (b & 1u);
    return v;
}

double RotationSequence::theta(std::size_t i) const {
    return (quarter_turns[i] & 3u) * (std::numbers::pi / 2.0);
}

ModificationKey quantize_channel(const ComplexChannelState& h,
                                 const QuantizerConfig& q) {
    q.validate();
    const double mag = std::hypot(h.re, h.im);
    if (!(mag > 0.0) || !std::isfinite(mag)) {
        throw unusable_key_error(
            "quantize_channel: zero or non-finite channel carries no key");
    }
    const int pl = q.phase_levels;
    const double phase = std::atan2(h.im, h.re);  // (-pi, pi]
    int phase_bin =
        int(std::floor((phase + std::numbers::pi) / (2.0 * std::numbers::pi) *
                       pl)) %
        pl;
    if (phase_bin < 0) phase_bin += pl;

    int mag_bin = 0;
    for (double th : q.magnitude_thresholds) {
        if (mag > th) ++mag_bin;
    }

    ModificationKey key;
    key.bits.reserve(std::size_t(q.key_bits()));
    for (int b = log2_int(pl) - 1; b >= 0; --b) {
        key.bits.push_back(std::uint8_t((phase_bin >> b) & 1));
    }
    for (int b = log2_int(q.magnitude_levels) - 1; b >= 0; --b) {
        key.bits.push_back(std::uint8_t((mag_bin >> b) & 1));
    }
    return key;
}

RotationSequence derive_modification(const ModificationKey& key,
                                     std::size_t n) {
    // Key the stream on both the packed bits and the bit count so keys of
    // different widths never collide.
    const std::uint64_t stream_key = mix_seed(key.packed(), key.bits.size());
    RotationSequence rot;
    rot.quarter_turns.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto words = philox_words(
            stream_key, symbol_counter(i, 0, protocol_streams::kRotation));
        rot.quarter_turns[i] = std::uint8_t(words[0] & 3u);
    }
    return rot;
}

RotationSequence invert_rotation(const RotationSequence& rot) {
    RotationSequence inv;
    inv.quarter_turns.resize(rot.quarter_turns.size());
    for (std::size_t i = 0; i < rot.quarter_turns.size(); ++i) {
        inv.quarter_turns[i] = std::uint8_t((4u - (rot.quarter_turns[i] & 3u)) & 3u);
    }
    return inv;
}

SymbolBlock relay_modify(const SymbolBlock& x, const RotationSequence& rot) {
    if (std::size_t(x.symbols.size()) != rot.size()) {
        throw std::invalid_argument("relay_modify: length mismatch");
    }
    SymbolBlock out;
    out.symbol_power = x.symbol_power;
    out.symbols.resize(x.symbols.size());
    for (Eigen::Index i = 0; i < x.symbols.size(); ++i) {
        out.symbols[i] = quarter_rotate(x.symbols[i], rot.quarter_turns[i]);
    }
    return out;
}

Eigen::ArrayXcd destination_restore(const Eigen::ArrayXcd& received,
                                    const RotationSequence& rot) {
    if (std::size_t(received.size()) != rot.size()) {
        throw std::invalid_argument("destination_restore: length mismatch");
    }
    Eigen::ArrayXcd out(received.size());
    for (Eigen::Index i = 0; i < received.size(); ++i) {
        out[i] = quarter_rotate(received[i],
                                (4u - (rot.quarter_turns[i] & 3u)) & 3u);
    }
    return out;
}

Eigen::ArrayXcd destination_restore(const Eigen::ArrayXcd& received,
                                    const ComplexChannelState& h_rd,
                                    const QuantizerConfig& q) {
    const ModificationKey key = quantize_channel(h_rd, q);
    return destination_restore(
        received, derive_modification(key, std::size_t(received.size())));
}

std::uint32_t gray_encode(std::uint32_t x) { return x ^ (x >> 1); }

Eigen::ArrayXcd psk_modulate(const std::vector<std::uint32_t>& phase_indices,
                             int order, double power) {
    const double amp = std::sqrt(power);
    Eigen::ArrayXcd out(static_cast<Eigen::Index>(phase_indices.size()));
    for (std::size_t i = 0; i < phase_indices.size(); ++i) {
        const std::uint32_t m = phase_indices[i] % std::uint32_t(order);
        // Axis-aligned points are emitted exactly (cos/sin of pi-multiples
        // carry ~1e-16 residues); a quarter-turn rotation of an exact point
        // then stays exact, keeping sector membership unambiguous.
        if ((std::uint64_t(m) * 4) % std::uint64_t(order) == 0) {
            switch (m * 4 / std::uint32_t(order)) {
                case 0: out[Eigen::Index(i)] = {amp, 0.0}; continue;
                case 1: out[Eigen::Index(i)] = {0.0, amp}; continue;
                case 2: out[Eigen::Index(i)] = {-amp, 0.0}; continue;
                case 3: out[Eigen::Index(i)] = {0.0, -amp}; continue;
            }
        }
        const double phi = 2.0 * std::numbers::pi * double(m) / order;
        out[Eigen::Index(i)] = {amp * std::cos(phi), amp * std::sin(phi)};
    }
    return out;
}

std::vector<std::uint32_t> psk_detect(const Eigen::ArrayXcd& received,
                                      std::complex<double> channel,
                                      int order) {
    std::vector<std::uint32_t> out(std::size_t(received.size()));
    for (Eigen::Index i = 0; i < received.size(); ++i) {
        const std::complex<double> v =
            cmul(received[i], std::conj(channel));
        const double phi = std::atan2(v.imag(), v.real());
        long m = std::lround(phi * order / (2.0 * std::numbers::pi));
        m %= order;
        if (m < 0) m += order;
        out[std::size_t(i)] = std::uint32_t(m);
    }
    return out;
}

double bit_error_rate(const std::vector<std::uint32_t>& sent,
                      const std::vector<std::uint32_t>& detected, int order) {
    if (sent.size() != detected.size()) {
        throw std::invalid_argument("bit_error_rate: length mismatch");
    }
    if (sent.empty()) return 0.0;
    const int bits = log2_int(order);
    std::uint64_t wrong = 0;
    for (std::size_t i = 0; i < sent.size(); ++i) {
        wrong += std::popcount(gray_encode(sent[i]) ^ gray_encode(detected[i]));
    }
    return double(wrong) / (double(sent.size()) * bits);
}

std::complex<double> draw_channel_coefficient(std::uint64_t seed,
                                              std::uint32_t link,
                                              double mean_power) {
    const auto words = philox_words(
        seed, symbol_counter(0, link, protocol_streams::kChannel));
    const auto [g1, g2] = to_gaussian_pair(words[0], words[1]);
    const double scale = std::sqrt(mean_power / 2.0);
    return {scale * g1, scale * g2};
}

Eigen::ArrayXcd draw_noise_block(std::uint64_t seed, std::uint32_t receiver,
                                 std::size_t n) {
    Eigen::ArrayXcd out(static_cast<Eigen::Index>(n));
    const double scale = std::sqrt(0.5);
    for (std::size_t i = 0; i < n; ++i) {
        const auto words = philox_words(
            seed, symbol_counter(i, receiver, protocol_streams::kNoise));
        const auto [g1, g2] = to_gaussian_pair(words[0], words[1]);
        out[Eigen::Index(i)] = {scale * g1, scale * g2};
    }
    return out;
}

std::vector<std::uint32_t> draw_phase_indices(std::uint64_t seed,
                                              std::size_t n, int order) {
    std::vector<std::uint32_t> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto words = philox_words(
            seed, symbol_counter(i, 0, protocol_streams::kData));
        out[i] = std::uint32_t(words[0] & std::uint64_t(order - 1));
    }
    return out;
}

ProtocolTrialOutcome run_protocol_trial(const ProtocolTrialConfig& cfg) {
    cfg.profile.validate();
    cfg.quantizer.validate();
    if (!is_pow2(cfg.constellation_order) || cfg.constellation_order < 2 ||
        cfg.constellation_order > 256) {
        throw std::invalid_argument(
            "run_protocol_trial: constellation_order must be a power of two "
            "in [2, 256]");
    }
    ProtocolTrialOutcome outcome;
    if (cfg.n_symbols == 0) {
        outcome.relay_decoded = true;
        return outcome;
    }

    const int order = cfg.constellation_order;
    const std::size_t n = cfg.n_symbols;
    const auto h_sr = draw_channel_coefficient(cfg.seed, 1, cfg.profile.gamma_sr);
    const auto h_rd = draw_channel_coefficient(cfg.seed, 2, cfg.profile.gamma_rd);
    const auto h_se = draw_channel_coefficient(cfg.seed, 3, cfg.profile.gamma_se);
    const auto h_re = draw_channel_coefficient(cfg.seed, 4, cfg.profile.gamma_re);

    const auto sent = draw_phase_indices(cfg.seed, n, order);
    const Eigen::ArrayXcd x = psk_modulate(sent, order, 1.0);

    const Eigen::Index len = Eigen::Index(n);

    // Phase 1: the eavesdropper overhears the source directly.
    {
        Eigen::ArrayXcd y_se(len);
        const Eigen::ArrayXcd noise =
            cfg.noiseless
                ? Eigen::ArrayXcd::Zero(len).eval()
                : draw_noise_block(
                      cfg.seed,
                      protocol_streams::kNoiseEavesdropperDirectPhase, n);
        for (Eigen::Index i = 0; i < y_se.size(); ++i) {
            y_se[i] = cadd(cmul(h_se, x[i]), noise[i]);
        }
        outcome.eavesdropper_direct_ber =
            bit_error_rate(sent, psk_detect(y_se, h_se, order), order);
    }

    // The relay decodes when the first hop's half-rate capacity covers the
    // constellation rate: 1/2 log2(1 + x_sr) >= 1/2 log2(order).
    const double x_sr = std::norm(h_sr);
    outcome.relay_decoded = x_sr >= double(order - 1);
    if (!outcome.relay_decoded) return outcome;

    // Phase 2: the relay re-modulates the decoded block and forwards it
    // under the key-derived rotation; reciprocity gives relay and
    // destination the identical h_rd measurement.
    const ComplexChannelState shared{h_rd.real(), h_rd.imag()};
    const ModificationKey relay_key = quantize_channel(shared, cfg.quantizer);
    const RotationSequence relay_rot = derive_modification(relay_key, n);
    const SymbolBlock modified = relay_modify({x, 1.0}, relay_rot);

    const Eigen::ArrayXcd noise_rd =
        cfg.noiseless
            ? Eigen::ArrayXcd::Zero(len).eval()
            : draw_noise_block(
                  cfg.seed, protocol_streams::kNoiseDestinationRelayPhase, n);
    const Eigen::ArrayXcd noise_re =
        cfg.noiseless
            ? Eigen::ArrayXcd::Zero(len).eval()
            : draw_noise_block(
                  cfg.seed, protocol_streams::kNoiseEavesdropperRelayPhase, n);

    Eigen::ArrayXcd y_rd(len), y_re(len);
    for (Eigen::Index i = 0; i < len; ++i) {
        y_rd[i] = cadd(cmul(h_rd, modified.symbols[i]), noise_rd[i]);
        y_re[i] = cadd(cmul(h_re, modified.symbols[i]), noise_re[i]);
    }

    const Eigen::ArrayXcd restored =
        destination_restore(y_rd, shared, cfg.quantizer);
    outcome.destination_ber =
        bit_error_rate(sent, psk_detect(restored, h_rd, order), order);
    outcome.eavesdropper_relay_ber =
        bit_error_rate(sent, psk_detect(y_re, h_re, order), order);
    return outcome;
}

}  // namespace relaysec
