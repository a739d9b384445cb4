#pragma once

#include <Eigen/Core>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "relaysec/types.hpp"

namespace relaysec {

// Thrown when a channel state carries no usable key information (|h| = 0).
class unusable_key_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// One complex fading coefficient; reciprocal measurements of the same link
// give bit-identical copies at both ends.
struct ComplexChannelState {
    double re = 0.0;
    double im = 0.0;
    std::complex<double> value() const { return {re, im}; }
};

// Maps a channel coefficient to shared-secret bits: the phase is cut into
// `phase_levels` uniform sectors and the magnitude into `magnitude_levels`
// bins split at `magnitude_thresholds`.  Level counts are powers of two so
// the key packs into whole bits.
struct QuantizerConfig {
    int phase_levels = 4;
    int magnitude_levels = 1;
    std::vector<double> magnitude_thresholds;  // ascending, size = levels-1

    // Throws std::invalid_argument when the level counts are not powers of
    // two (phase >= 2, magnitude >= 1) or thresholds don't match.
    void validate() const;
    int key_bits() const;  // log2(phase_levels) + log2(magnitude_levels)
};

// Key bits extracted from a quantized channel state, phase bits first,
// most significant first.
struct ModificationKey {
    std::vector<std::uint8_t> bits;
    bool operator==(const ModificationKey&) const = default;
    std::uint64_t packed() const;  // MSB-first integer value (<= 64 bits)
};

// Per-symbol modification stream.  Rotations are restricted to exact
// quarter turns theta = k*pi/2, applied as multiplication by i^k — a
// sign/swap permutation of (re, im) that IEEE arithmetic performs exactly,
// which is what makes modify -> restore bit-exact.
struct RotationSequence {
    std::vector<std::uint8_t> quarter_turns;  // k in {0,1,2,3}
    std::size_t size() const { return quarter_turns.size(); }
    double theta(std::size_t i) const;  // k*pi/2 in [0, 2*pi)
};

// A block of constellation symbols with its nominal per-symbol power.
struct SymbolBlock {
    Eigen::ArrayXcd symbols;
    double symbol_power = 1.0;
};

// ---- exact complex helpers -------------------------------------------------
// Channel application and rotation go through these explicit forms so that
// library and test translation units perform identical IEEE operations
// (the build disables FMA contraction for the same reason).

// z * i^k without trigonometry: an exact permutation with sign flips.
inline std::complex<double> quarter_rotate(std::complex<double> z,
                                           unsigned k) {
    switch (k & 3u) {
        case 0u: return z;
        case 1u: return {-z.imag(), z.real()};
        case 2u: return {-z.real(), -z.imag()};
        default: return {z.imag(), -z.real()};
    }
}

// Naive complex product (ac - bd, ad + bc).
inline std::complex<double> cmul(std::complex<double> a,
                                 std::complex<double> b) {
    return {a.real() * b.real() - a.imag() * b.imag(),
            a.real() * b.imag() + a.imag() * b.real()};
}

inline std::complex<double> cadd(std::complex<double> a,
                                 std::complex<double> b) {
    return {a.real() + b.real(), a.imag() + b.imag()};
}

// ---- key derivation and symbol operations ----------------------------------

// Deterministic key extraction; throws unusable_key_error when |h| = 0 (or
// non-finite), since a zero coefficient carries no phase.
ModificationKey quantize_channel(const ComplexChannelState& h,
                                 const QuantizerConfig& q);

// Expands a key into n quarter-turn rotations through a keyed counter-based
// stream: same key and n always give the same sequence, and keys differing
// in a single bit give uncorrelated sequences.
RotationSequence derive_modification(const ModificationKey& key,
                                     std::size_t n);

// Inverse stream (k -> (4-k) mod 4): applying a sequence then its inverse is
// the identity, bit for bit.
RotationSequence invert_rotation(const RotationSequence& rot);

// x'_k = x_k * i^{rot_k}; block power is preserved exactly.  Throws
// std::invalid_argument on length mismatch.
SymbolBlock relay_modify(const SymbolBlock& x, const RotationSequence& rot);

// y_k * i^{-rot_k}: undoes the modification on the received samples.  When
// the destination's key matches the relay's, the result equals
// h_rd * x + (rotated noise), and rotated circular noise is statistically
// identical noise.  Throws std::invalid_argument on length mismatch.
Eigen::ArrayXcd destination_restore(const Eigen::ArrayXcd& received,
                                    const RotationSequence& rot);

// Convenience form matching the protocol narrative: the destination derives
// the rotation stream from its own reciprocal channel measurement.
Eigen::ArrayXcd destination_restore(const Eigen::ArrayXcd& received,
                                    const ComplexChannelState& h_rd,
                                    const QuantizerConfig& q);

// ---- PSK plumbing -----------------------------------------------------------

// Binary-reflected Gray code; adjacent phase sectors differ in one data bit.
std::uint32_t gray_encode(std::uint32_t x);

// Unit-power order-L PSK: phase index m -> sqrt(power) * e^{i 2 pi m / L}.
Eigen::ArrayXcd psk_modulate(const std::vector<std::uint32_t>& phase_indices,
                             int order, double power);

// Coherent nearest-sector detection of y = h*s + n given h.
std::vector<std::uint32_t> psk_detect(const Eigen::ArrayXcd& received,
                                      std::complex<double> channel,
                                      int order);

// Fraction of differing Gray-mapped data bits between two phase-index
// sequences (log2(order) bits per symbol).
double bit_error_rate(const std::vector<std::uint32_t>& sent,
                      const std::vector<std::uint32_t>& detected, int order);

// ---- end-to-end trial --------------------------------------------------------

// Stream tags and draw helpers used by run_protocol_trial, exposed so paired
// tests can reconstruct the exact realizations of a trial.
namespace protocol_streams {
inline constexpr std::uint32_t kChannel = 2;  // slot = link 0..4 (sd,sr,rd,se,re)
inline constexpr std::uint32_t kData = 3;     // counter = symbol index
inline constexpr std::uint32_t kNoise = 4;    // slot = receiver (see below)
inline constexpr std::uint32_t kRotation = 5; // keyed by the modification key

inline constexpr std::uint32_t kNoiseDestinationRelayPhase = 0;
inline constexpr std::uint32_t kNoiseEavesdropperRelayPhase = 1;
inline constexpr std::uint32_t kNoiseEavesdropperDirectPhase = 2;
}  // namespace protocol_streams

// h ~ CN(0, mean_power) for the given link slot under this trial seed.
std::complex<double> draw_channel_coefficient(std::uint64_t seed,
                                              std::uint32_t link,
                                              double mean_power);

// n samples of unit-variance circular complex noise for the given receiver.
Eigen::ArrayXcd draw_noise_block(std::uint64_t seed, std::uint32_t receiver,
                                 std::size_t n);

// n uniform phase indices in [0, order).
std::vector<std::uint32_t> draw_phase_indices(std::uint64_t seed,
                                              std::size_t n, int order);

struct ProtocolTrialConfig {
    SnrProfile profile;
    QuantizerConfig quantizer;
    std::size_t n_symbols = 10'000;
    int constellation_order = 2;  // PSK order, power of two in [2, 256]
    std::uint64_t seed = 0;
    bool noiseless = false;  // zero receiver noise: isolates the key logic
};

struct ProtocolTrialOutcome {
    // False when the first hop could not support the constellation rate
    // (x_sr < order-1); the phase-2 error rates below are then not
    // meaningful and are reported as 0.
    bool relay_decoded = false;
    double destination_ber = 0.0;         // restored relay block at D
    double eavesdropper_relay_ber = 0.0;  // un-restorable relay block at E
    double eavesdropper_direct_ber = 0.0; // direct source block at E
};

// Simulates both phases at symbol level: the source PSK block reaches relay
// and eavesdropper; the relay (if it decodes) re-modulates, applies the
// key-derived rotation, and forwards; the destination restores with its own
// reciprocally-derived key and hard-detects; the eavesdropper hard-detects
// both phases without the key.
ProtocolTrialOutcome run_protocol_trial(const ProtocolTrialConfig& cfg);

}  // namespace relaysec
