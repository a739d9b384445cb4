#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <cstring>
#include <vector>

#include "oracles.hpp"
#include "relaysec/philox.hpp"
#include "relaysec/protocol.hpp"

using namespace relaysec;

namespace {

bool bitwise_equal(std::complex<double> a, std::complex<double> b) {
  return std::memcmp(&a, &b, sizeof(a)) == 0;
}

bool bitwise_equal(const Eigen::ArrayXcd& a, const Eigen::ArrayXcd& b) {
  if (a.size() != b.size()) return false;
  for (Eigen::Index i = 0; i < a.size(); ++i)
    if (!bitwise_equal(a[i], b[i])) return false;
  return true;
}

QuantizerConfig phase_only_quantizer() {
  QuantizerConfig q;
  q.phase_levels = 4;
  q.magnitude_levels = 1;
  return q;
}

}  // namespace

// ---------------------------------------------------------------------------
// Channel quantization.
// ---------------------------------------------------------------------------

TEST_CASE("phase quantization fixed points and scale invariance") {
  const QuantizerConfig q = phase_only_quantizer();
  CHECK(q.key_bits() == 2);

  const ModificationKey k1 = quantize_channel({1.0, 0.0}, q);
  CHECK(k1.bits == std::vector<std::uint8_t>{1, 0});
  CHECK(k1.packed() == 2);

  const ModificationKey k2 = quantize_channel({0.0, 1.0}, q);
  CHECK(k2.bits == std::vector<std::uint8_t>{1, 1});

  // Magnitude carries no key bits here, so scaling cannot change the key.
  CHECK(quantize_channel({0.3, -0.7}, q) == quantize_channel({0.9, -2.1}, q));
  CHECK(quantize_channel({-2.0, -2.0}, q).packed() ==
        quantize_channel({-5.0, -5.0}, q).packed());
}

TEST_CASE("magnitude bins extend the key") {
  QuantizerConfig q;
  q.phase_levels = 4;
  q.magnitude_levels = 2;
  q.magnitude_thresholds = {1.0};
  CHECK(q.key_bits() == 3);

  const ModificationKey weak = quantize_channel({0.3, 0.0}, q);
  const ModificationKey strong = quantize_channel({3.0, 0.0}, q);
  REQUIRE(weak.bits.size() == 3);
  CHECK(weak.bits[2] == 0);
  CHECK(strong.bits[2] == 1);
  CHECK(weak.bits[0] == strong.bits[0]);  // same phase sector
  CHECK(weak.bits[1] == strong.bits[1]);
}

TEST_CASE("matched measurements at the two ends give matching keys") {
  const QuantizerConfig q = phase_only_quantizer();
  testutil::TestRng rng(17);
  for (int i = 0; i < 100; ++i) {
    const ComplexChannelState h{rng.next_uniform(-3, 3), rng.next_uniform(-3, 3)};
    if (std::hypot(h.re, h.im) == 0.0) continue;
    CHECK(quantize_channel(h, q) == quantize_channel(h, q));
  }
}

TEST_CASE("unusable channel states are rejected") {
  const QuantizerConfig q = phase_only_quantizer();
  CHECK_THROWS_AS(quantize_channel({0.0, 0.0}, q), unusable_key_error);
  CHECK_THROWS_AS(quantize_channel({std::nan(""), 1.0}, q), unusable_key_error);
  CHECK_THROWS_AS(
      quantize_channel({std::numeric_limits<double>::infinity(), 0.0}, q),
      unusable_key_error);
}

TEST_CASE("quantizer configuration validation") {
  QuantizerConfig q;
  q.phase_levels = 3;  // not a power of two
  CHECK_THROWS_AS(q.validate(), std::invalid_argument);
  q.phase_levels = 1;  // too few sectors to carry information
  CHECK_THROWS_AS(q.validate(), std::invalid_argument);
  q = QuantizerConfig{};
  q.magnitude_levels = 2;  // missing threshold
  CHECK_THROWS_AS(q.validate(), std::invalid_argument);
  q.magnitude_thresholds = {2.0, 1.0};  // wrong size and not ascending
  CHECK_THROWS_AS(q.validate(), std::invalid_argument);
  q.magnitude_thresholds = {1.0};
  CHECK_NOTHROW(q.validate());
}

// ---------------------------------------------------------------------------
// Rotation stream derivation.
// ---------------------------------------------------------------------------

TEST_CASE("rotation streams are deterministic in the key") {
  const ModificationKey key{{1, 0}};
  const RotationSequence a = derive_modification(key, 5000);
  const RotationSequence b = derive_modification(key, 5000);
  CHECK(a.quarter_turns == b.quarter_turns);
  CHECK(derive_modification(key, 0).size() == 0);
  for (std::uint8_t k : a.quarter_turns) CHECK(k <= 3);
  CHECK(a.theta(0) == a.quarter_turns[0] * std::acos(-1.0) / 2.0);
}

TEST_CASE("rotation streams are close to uniform over the quarter turns") {
  const RotationSequence seq = derive_modification(ModificationKey{{1, 1}}, 10000);
  std::vector<std::uint64_t> counts(4, 0);
  for (std::uint8_t k : seq.quarter_turns) ++counts[k];
  for (auto c : counts) CHECK(c > 0);
  CHECK(testutil::chi2_uniform(counts) < 21.1);  // chi2(3) at the 1e-4 level
}

TEST_CASE("keys differing in one bit give uncorrelated rotation streams") {
  const std::size_t n = 10000;
  const RotationSequence sa = derive_modification(ModificationKey{{1, 0}}, n);
  const RotationSequence sb = derive_modification(ModificationKey{{1, 1}}, n);
  // Map quarter turns onto the unit circle and bound the circular
  // cross-correlation over a window of lags.
  std::vector<std::complex<double>> a(n), b(n);
  const std::complex<double> unit[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = unit[sa.quarter_turns[i]];
    b[i] = unit[sb.quarter_turns[i]];
  }
  for (std::size_t lag = 0; lag < 1000; ++lag) {
    std::complex<double> acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * std::conj(b[(i + lag) % n]);
    CHECK_MESSAGE(std::abs(acc) / double(n) < 0.05, "lag=" << lag);
  }
}

TEST_CASE("inverse rotations cancel exactly") {
  const RotationSequence rot = derive_modification(ModificationKey{{0, 1}}, 256);
  const RotationSequence inv = invert_rotation(rot);
  REQUIRE(inv.size() == rot.size());
  for (std::size_t i = 0; i < rot.size(); ++i)
    CHECK((rot.quarter_turns[i] + inv.quarter_turns[i]) % 4 == 0);
  const RotationSequence back = invert_rotation(inv);
  CHECK(back.quarter_turns == rot.quarter_turns);
}

// ---------------------------------------------------------------------------
// Block modification and restoration.
// ---------------------------------------------------------------------------

namespace {
SymbolBlock random_block(testutil::TestRng& rng, std::size_t n) {
  const Eigen::Index len = static_cast<Eigen::Index>(n);
  Eigen::ArrayXcd s(len);
  for (Eigen::Index i = 0; i < s.size(); ++i)
    s[i] = std::complex<double>(rng.next_uniform(-2, 2), rng.next_uniform(-2, 2));
  return {s, 1.0};
}
}  // namespace

TEST_CASE("quarter-turn helper is an exact fourth root of unity action") {
  const std::complex<double> z{0.123456789, -9.87654321};
  CHECK(bitwise_equal(quarter_rotate(z, 0), z));
  CHECK(bitwise_equal(quarter_rotate(quarter_rotate(z, 1), 3), z));
  CHECK(bitwise_equal(quarter_rotate(quarter_rotate(z, 2), 2), z));
  CHECK(bitwise_equal(quarter_rotate(z, 1), std::complex<double>(9.87654321,
                                                                 0.123456789)));
}

TEST_CASE("modification preserves block power bit for bit") {
  testutil::TestRng rng(23);
  const SymbolBlock x = random_block(rng, 512);
  const RotationSequence rot = derive_modification(ModificationKey{{1, 0}}, 512);
  const SymbolBlock y = relay_modify(x, rot);

  double px = 0.0, py = 0.0;
  for (Eigen::Index i = 0; i < x.symbols.size(); ++i) {
    px += x.symbols[i].real() * x.symbols[i].real() +
          x.symbols[i].imag() * x.symbols[i].imag();
    py += y.symbols[i].real() * y.symbols[i].real() +
          y.symbols[i].imag() * y.symbols[i].imag();
  }
  CHECK(px == py);
}

TEST_CASE("modify then invert is the identity, bit for bit") {
  testutil::TestRng rng(29);
  const SymbolBlock x = random_block(rng, 333);
  const RotationSequence rot = derive_modification(ModificationKey{{0, 1}}, 333);
  const SymbolBlock y = relay_modify(relay_modify(x, rot), invert_rotation(rot));
  CHECK(bitwise_equal(y.symbols, x.symbols));
  // Zero rotation is a bitwise no-op.
  RotationSequence zero;
  zero.quarter_turns.assign(333, 0);
  CHECK(bitwise_equal(relay_modify(x, zero).symbols, x.symbols));
}

TEST_CASE("length mismatches are rejected") {
  testutil::TestRng rng(31);
  const SymbolBlock x = random_block(rng, 8);
  const RotationSequence rot = derive_modification(ModificationKey{{1, 1}}, 9);
  CHECK_THROWS_AS(relay_modify(x, rot), std::invalid_argument);
  Eigen::ArrayXcd y(4);
  y.setZero();
  CHECK_THROWS_AS(destination_restore(y, rot), std::invalid_argument);
  CHECK_THROWS_AS(bit_error_rate({0, 1}, {0}, 2), std::invalid_argument);
}

TEST_CASE("matched-key restoration through a noiseless channel is bit-exact") {
  const QuantizerConfig q = phase_only_quantizer();
  testutil::TestRng rng(37);
  const std::size_t n = 1000;
  const SymbolBlock x = random_block(rng, n);
  const ComplexChannelState h{0.8315, -1.277};

  const ModificationKey key = quantize_channel(h, q);
  const RotationSequence rot = derive_modification(key, n);
  const SymbolBlock modified = relay_modify(x, rot);

  const Eigen::Index len = static_cast<Eigen::Index>(n);
  Eigen::ArrayXcd received(len), reference(len);
  for (Eigen::Index i = 0; i < received.size(); ++i) {
    received[i] = cmul(h.value(), modified.symbols[i]);
    reference[i] = cmul(h.value(), x.symbols[i]);
  }

  // Explicit-stream form and reciprocal-measurement form must agree with the
  // unmodified transmission exactly.
  CHECK(bitwise_equal(destination_restore(received, rot), reference));
  CHECK(bitwise_equal(destination_restore(received, h, q), reference));

  const Eigen::ArrayXcd empty(0);
  CHECK(destination_restore(empty, RotationSequence{}).size() == 0);
}

TEST_CASE("restoration commutes with additive noise exactly") {
  const QuantizerConfig q = phase_only_quantizer();
  testutil::TestRng rng(41);
  const std::size_t n = 1000;
  const SymbolBlock x = random_block(rng, n);
  const ComplexChannelState h{-0.4042, 0.9913};
  const RotationSequence rot = derive_modification(quantize_channel(h, q), n);
  const SymbolBlock modified = relay_modify(x, rot);
  const Eigen::ArrayXcd noise = draw_noise_block(99, 0, n);

  const Eigen::Index len = static_cast<Eigen::Index>(n);
  Eigen::ArrayXcd received(len), reference(len);
  for (Eigen::Index i = 0; i < received.size(); ++i) {
    received[i] = cadd(cmul(h.value(), modified.symbols[i]), noise[i]);
    const int back = (4 - rot.quarter_turns[i]) & 3;
    reference[i] = cadd(cmul(h.value(), x.symbols[i]),
                        quarter_rotate(noise[i], back));
  }
  CHECK(bitwise_equal(destination_restore(received, rot), reference));
}

TEST_CASE("an unmatched key leaves the constellation uniformly scrambled") {
  const QuantizerConfig q = phase_only_quantizer();
  const std::size_t n = 10000;
  std::vector<std::uint32_t> sent = draw_phase_indices(3, n, 2);
  const Eigen::ArrayXcd x = psk_modulate(sent, 2, 1.0);

  const RotationSequence true_rot =
      derive_modification(ModificationKey{{1, 0}}, n);
  const RotationSequence wrong_rot =
      derive_modification(ModificationKey{{1, 1}}, n);

  const std::complex<double> h{1.3, -0.2};
  const SymbolBlock modified = relay_modify({x, 1.0}, true_rot);
  const Eigen::Index len = static_cast<Eigen::Index>(n);
  Eigen::ArrayXcd received(len);
  for (Eigen::Index i = 0; i < received.size(); ++i)
    received[i] = cmul(h, modified.symbols[i]);

  const Eigen::ArrayXcd scrambled = destination_restore(received, wrong_rot);
  // Residual rotations are uniform over the four quarter turns, so the
  // equalized phases land uniformly on the four axes.
  std::vector<std::uint64_t> sector_counts(4, 0);
  for (Eigen::Index i = 0; i < scrambled.size(); ++i) {
    const std::complex<double> v = scrambled[i] * std::conj(h);
    int sector =
        int(std::lround(std::arg(v) * 2.0 / std::acos(-1.0))) & 3;
    // Fold out the data: remove the sent symbol's own half-turn.
    if (sent[i] == 1) sector = (sector + 2) & 3;
    ++sector_counts[sector];
  }
  CHECK(testutil::chi2_uniform(sector_counts) < 21.1);
}

// ---------------------------------------------------------------------------
// PSK plumbing.
// ---------------------------------------------------------------------------

TEST_CASE("Gray code fixed points") {
  CHECK(gray_encode(0) == 0);
  CHECK(gray_encode(1) == 1);
  CHECK(gray_encode(2) == 3);
  CHECK(gray_encode(3) == 2);
  CHECK(gray_encode(7) == 4);
}

TEST_CASE("modulate/detect round trip is exact through a complex channel") {
  testutil::TestRng rng(43);
  for (int order : {2, 4, 8, 16}) {
    std::vector<std::uint32_t> sent(500);
    for (auto& m : sent)
      m = std::uint32_t(rng.next_uniform(0, double(order))) % order;
    const Eigen::ArrayXcd s = psk_modulate(sent, order, 2.0);
    for (Eigen::Index i = 0; i < s.size(); ++i)
      CHECK(std::abs(std::norm(s[i]) - 2.0) < 1e-12);

    const std::complex<double> h{-0.77, 1.31};
    Eigen::ArrayXcd y(s.size());
    for (Eigen::Index i = 0; i < y.size(); ++i) y[i] = cmul(h, s[i]);
    CHECK(psk_detect(y, h, order) == sent);
  }
}

TEST_CASE("bit error rate counts Gray-mapped bit flips") {
  const std::vector<std::uint32_t> sent{0, 1, 2, 3};
  CHECK(bit_error_rate(sent, sent, 4) == 0.0);
  // Adjacent sectors differ in exactly one Gray bit (2 bits per symbol here).
  CHECK(bit_error_rate(sent, {1, 1, 2, 3}, 4) == doctest::Approx(1.0 / 8.0));
  CHECK(bit_error_rate(sent, {0, 1, 2, 0}, 4) == doctest::Approx(1.0 / 8.0));
  // Opposite sectors differ in both Gray bits: 3 -> 1 is 10 vs 01.
  CHECK(bit_error_rate(sent, {0, 1, 2, 1}, 4) == doctest::Approx(2.0 / 8.0));
}

// ---------------------------------------------------------------------------
// Stream draw helpers.
// ---------------------------------------------------------------------------

TEST_CASE("trial randomness is deterministic and has the right scale") {
  const auto h1 = draw_channel_coefficient(5, 2, 4.0);
  const auto h2 = draw_channel_coefficient(5, 2, 4.0);
  CHECK(bitwise_equal(h1, h2));
  CHECK_FALSE(bitwise_equal(h1, draw_channel_coefficient(6, 2, 4.0)));

  double acc = 0.0;
  const int reps = 20000;
  for (int i = 0; i < reps; ++i)
    acc += std::norm(draw_channel_coefficient(i, 2, 4.0));
  CHECK(std::fabs(acc / reps - 4.0) < 0.12);  // |h|^2 is exponential(4)

  const Eigen::ArrayXcd noise = draw_noise_block(11, 1, 20000);
  double pw = 0.0;
  for (Eigen::Index i = 0; i < noise.size(); ++i) pw += std::norm(noise[i]);
  CHECK(std::fabs(pw / double(noise.size()) - 1.0) < 0.03);

  const auto idx = draw_phase_indices(13, 10000, 4);
  std::vector<std::uint64_t> counts(4, 0);
  for (auto m : idx) {
    REQUIRE(m < 4);
    ++counts[m];
  }
  CHECK(testutil::chi2_uniform(counts) < 21.1);
}

// ---------------------------------------------------------------------------
// End-to-end trials.
// ---------------------------------------------------------------------------

namespace {
ProtocolTrialConfig make_trial_config() {
  ProtocolTrialConfig cfg;
  cfg.profile = SnrProfile{10.0, 1e12, 100.0, 10.0, 31.622776601683793};
  cfg.quantizer = phase_only_quantizer();
  cfg.n_symbols = 100000;
  cfg.constellation_order = 2;
  cfg.seed = 2;
  return cfg;
}
}  // namespace

TEST_CASE("noiseless matched restoration decodes perfectly; the "
          "eavesdropper cannot") {
  ProtocolTrialConfig cfg = make_trial_config();
  cfg.noiseless = true;
  const ProtocolTrialOutcome out = run_protocol_trial(cfg);
  REQUIRE(out.relay_decoded);
  CHECK(out.destination_ber == 0.0);
  // Half turns flip the detected bit outright; odd quarter turns land the
  // symbol exactly on the decision boundary, which the detector resolves to
  // a fixed sector — an error for half the data bits.  Net effect: error
  // rate ~ 1/4 + 1/4 = 1/2 even without noise.
  CHECK(out.eavesdropper_relay_ber > 0.45);
  CHECK(out.eavesdropper_relay_ber < 0.55);
  CHECK(out.eavesdropper_direct_ber == 0.0);  // no key protects phase 1
}

TEST_CASE("with noise, the keyed relay block gives the eavesdropper a "
          "coin-flip channel") {
  const ProtocolTrialConfig cfg = make_trial_config();
  const ProtocolTrialOutcome out = run_protocol_trial(cfg);
  REQUIRE(out.relay_decoded);
  CHECK(out.destination_ber < 0.05);  // 20 dB keyed link stays reliable
  CHECK(out.eavesdropper_relay_ber > 0.45);
  CHECK(out.eavesdropper_relay_ber < 0.55);
  // Phase 1 is unprotected: conditioned on this trial's fading realization,
  // the eavesdropper's direct BER is the coherent BPSK error probability
  // Q(sqrt(2*x_se)) — far below the keyed-phase coin flip.
  const double x_se =
      std::norm(draw_channel_coefficient(cfg.seed, 3, cfg.profile.gamma_se));
  const double predicted = 0.5 * std::erfc(std::sqrt(x_se));
  CHECK(std::fabs(out.eavesdropper_direct_ber - predicted) < 2e-3);
  CHECK(out.eavesdropper_direct_ber < 0.25);
}

TEST_CASE("trials are reproducible") {
  const ProtocolTrialConfig cfg = make_trial_config();
  const ProtocolTrialOutcome a = run_protocol_trial(cfg);
  const ProtocolTrialOutcome b = run_protocol_trial(cfg);
  CHECK(a.relay_decoded == b.relay_decoded);
  CHECK(a.destination_ber == b.destination_ber);
  CHECK(a.eavesdropper_relay_ber == b.eavesdropper_relay_ber);
  CHECK(a.eavesdropper_direct_ber == b.eavesdropper_direct_ber);
}

TEST_CASE("empty trials succeed trivially") {
  ProtocolTrialConfig cfg = make_trial_config();
  cfg.n_symbols = 0;
  const ProtocolTrialOutcome out = run_protocol_trial(cfg);
  CHECK(out.relay_decoded);
  CHECK(out.destination_ber == 0.0);
}

TEST_CASE("invalid constellation orders are rejected") {
  ProtocolTrialConfig cfg = make_trial_config();
  cfg.constellation_order = 3;
  CHECK_THROWS_AS(run_protocol_trial(cfg), std::invalid_argument);
  cfg.constellation_order = 512;
  CHECK_THROWS_AS(run_protocol_trial(cfg), std::invalid_argument);
}

TEST_CASE("relay decode failures occur at the predicted Rayleigh rate") {
  ProtocolTrialConfig cfg = make_trial_config();
  cfg.profile.gamma_sr = 3.0;
  cfg.constellation_order = 4;  // decode needs x_sr >= 3
  cfg.n_symbols = 16;           // keep each trial cheap
  const int reps = 2000;
  int failures = 0;
  for (int i = 0; i < reps; ++i) {
    cfg.seed = mix_seed(77, i);
    if (!run_protocol_trial(cfg).relay_decoded) ++failures;
  }
  const double predicted = 1.0 - std::exp(-1.0);  // P(x_sr < 3), mean 3
  const double sigma = std::sqrt(predicted * (1.0 - predicted) / reps);
  CHECK(std::fabs(double(failures) / reps - predicted) < 3.0 * sigma);
}

TEST_CASE("the eavesdropper's keyed-phase observations carry negligible "
          "information about the data") {
  const ProtocolTrialConfig cfg = make_trial_config();
  const std::size_t n = cfg.n_symbols;

  // Reconstruct the trial's exact realizations from the published streams.
  const auto h_rd = draw_channel_coefficient(cfg.seed, 2, cfg.profile.gamma_rd);
  const auto h_re = draw_channel_coefficient(cfg.seed, 4, cfg.profile.gamma_re);
  const auto sent = draw_phase_indices(cfg.seed, n, 2);
  const Eigen::ArrayXcd x = psk_modulate(sent, 2, 1.0);
  const RotationSequence rot = derive_modification(
      quantize_channel({h_rd.real(), h_rd.imag()}, cfg.quantizer), n);
  const SymbolBlock modified = relay_modify({x, 1.0}, rot);
  const Eigen::ArrayXcd noise = draw_noise_block(
      cfg.seed, protocol_streams::kNoiseEavesdropperRelayPhase, n);
  const Eigen::Index len = static_cast<Eigen::Index>(n);
  Eigen::ArrayXcd y_re(len);
  for (Eigen::Index i = 0; i < y_re.size(); ++i)
    y_re[i] = cadd(cmul(h_re, modified.symbols[i]), noise[i]);
  const auto eve = psk_detect(y_re, h_re, 2);

  std::uint64_t joint[2][2] = {{0, 0}, {0, 0}};
  for (std::size_t i = 0; i < n; ++i) ++joint[sent[i] & 1][eve[i] & 1];
  CHECK(testutil::mutual_information_bits(joint) < 0.01);
}
