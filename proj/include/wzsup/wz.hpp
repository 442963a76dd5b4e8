#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "wzsup/codebook.hpp"
#include "wzsup/distribution.hpp"
#include "wzsup/group.hpp"
#include "wzsup/infotheory.hpp"
#include "wzsup/rng.hpp"

namespace wzsup {

struct WzEncodeResult {
    std::size_t i = 0;          // C0 index of the quantization point
    std::size_t j = 0;          // C1 index; only c1_j is transmitted
    double distortion = 0.0;    // per-symbol d(x, c0_i + c1_j)
    bool encoder_error = false; // distortion > target D
};

struct WzDecodeResult {
    std::size_t i_hat = 0;
    std::vector<Sym> x_hat;
    // Instrumentation, filled by the trial driver (the decoder cannot know
    // the encoder's index or x):
    bool decoder_error = false; // i_hat != encoder's i
    double end_distortion = 0.0;
};

/// Quantize x onto the superposed codebook C0 + C1. Only j (i.e. c1_j) is
/// considered transmitted; i is the index the decoder must recover.
inline WzEncodeResult wz_encode(const std::vector<Sym>& x, const Codebook& c0, const Codebook& c1,
                                double target_d) {
    const NearestPairResult near = nearest_superposed(x, c0, c1);
    WzEncodeResult out;
    out.i = near.i;
    out.j = near.j;
    out.distortion = near.distortion;
    out.encoder_error = near.distortion > target_d;
    return out;
}

/// Recover the quantization point from y and the received c1: decode
/// v = y - c1 to the ML codeword of C0 under additive noise_model, then
/// reconstruct x_hat = y + (c0_hat - v) = c0_hat + c1.
///
/// noise_model is the law of (e - z), e the quantization residual and z the
/// correlation noise; asymptotically d * p-reversed, which the symmetric
/// cases reduce to p*d. For binary noise_model with P(1) < 1/2 the ML rule
/// is plain minimum Hamming distance, taken on the fast path.
/// The channel-decoding step shared by wz_decode and the exact enumeration
/// oracle: ML index of C0 for v, taking the minimum-Hamming fast path exactly
/// when it is equivalent (binary alphabet, noise parameter < 1/2).
inline std::size_t decode_c0_index(const std::vector<Sym>& v, const Codebook& c0,
                                   const SymbolDistribution& noise_model) {
    const bool binary_min_dist = c0.alphabet().l == 1 && noise_model[1] < 0.5;
    return (binary_min_dist ? nearest_codeword(v, c0) : ml_codeword(v, c0, noise_model)).index;
}

inline WzDecodeResult wz_decode(const std::vector<Sym>& y, const std::vector<Sym>& c1_word, const Codebook& c0,
                                const SymbolDistribution& noise_model) {
    if (y.size() != c1_word.size() || static_cast<int>(y.size()) != c0.n())
        throw std::invalid_argument("wz_decode: length mismatch");
    if (!(noise_model.alphabet() == c0.alphabet()))
        throw std::invalid_argument("wz_decode: noise model alphabet mismatch");
    const GroupAlphabet& g = c0.alphabet();
    const std::vector<Sym> v = sub(g, y, c1_word);
    const std::size_t i_hat = decode_c0_index(v, c0, noise_model);
    WzDecodeResult out;
    out.i_hat = i_hat;
    out.x_hat = add(g, c0.word(i_hat), c1_word);
    return out;
}

/// A discrete side-information coding instance: X = Y + Z with Y uniform over
/// G^n and Z i.i.d. p; C0 is uniform i.i.d., C1 is q i.i.d.
struct WzInstance {
    int n = 0;
    SymbolDistribution p;        // correlation noise law
    SymbolDistribution q;        // C1 construction law
    double target_d = 0.0;
    double r0 = 0.0;
    double r1 = 0.0;
    Codebook c0;
    Codebook c1;
    SymbolDistribution decode_noise; // d * reversed(p), precomputed

    const GroupAlphabet& alphabet() const { return p.alphabet(); }
};

inline WzInstance make_wz_instance(int n, const SymbolDistribution& p, const SymbolDistribution& q,
                                   double target_d, double r0, double r1, std::uint64_t c0_seed,
                                   std::uint64_t c1_seed) {
    if (!(p.alphabet() == q.alphabet())) throw std::invalid_argument("make_wz_instance: alphabet mismatch");
    const GroupAlphabet g = p.alphabet();
    WzInstance inst{n,
                    p,
                    q,
                    target_d,
                    r0,
                    r1,
                    Codebook::discrete(n, r0, SymbolDistribution::uniform(g), c0_seed),
                    Codebook::discrete(n, r1, q, c1_seed),
                    infotheory::convolve(infotheory::d_distribution(g, target_d), p.reversed())};
    return inst;
}

struct WzTrialRecord {
    bool encoder_error = false;
    bool decoder_error = false;
    double encode_distortion = 0.0;
    double end_distortion = 0.0;
};

/// One end-to-end trial: draw y (uniform, mask on the group order), then z
/// (i.i.d. p by inverse CDF) — in that order, all n of y before all n of z,
/// which is part of the reproducibility contract — set x = y + z, encode,
/// decode from (y, c1) only, and compare.
inline WzTrialRecord simulate_wz_trial(const WzInstance& inst, std::uint64_t trial_seed) {
    const GroupAlphabet& g = inst.alphabet();
    SplitMix64 rng(trial_seed);
    const std::size_t n = static_cast<std::size_t>(inst.n);

    std::vector<Sym> y(n), z(n);
    for (std::size_t t = 0; t < n; ++t) y[t] = static_cast<Sym>(rng.next() & static_cast<std::uint64_t>(g.order - 1));
    const SymbolSampler sample_z(inst.p);
    for (std::size_t t = 0; t < n; ++t) z[t] = sample_z(rng);
    const std::vector<Sym> x = add(g, y, z);

    const WzEncodeResult enc = wz_encode(x, inst.c0, inst.c1, inst.target_d);
    const WzDecodeResult dec = wz_decode(y, inst.c1.word(enc.j), inst.c0, inst.decode_noise);

    WzTrialRecord rec;
    rec.encoder_error = enc.encoder_error;
    rec.decoder_error = dec.i_hat != enc.i;
    rec.encode_distortion = enc.distortion;
    rec.end_distortion = static_cast<double>(detail::hamming(x, dec.x_hat)) / inst.n;
    return rec;
}

// ---------------------------------------------------------------------------
// Dithered Gaussian variant: the encoder quantizes beta*x + u over C0 + C1
// and sends c1; the decoder channel-decodes v = beta*y + u - c1 over C0 and
// reconstructs x_hat = y + beta*(c0_hat - v).
// ---------------------------------------------------------------------------

struct GaussianWzInstance {
    int n = 0;
    infotheory::GaussianWzParams params;
    double r0 = 0.0;
    double r1 = 0.0;
    Codebook c0; // N(0, P0) i.i.d.
    Codebook c1; // N(0, Q) i.i.d.
    std::uint64_t dither_seed = 0;
    double encoder_slack = 0.25; // error event: residual power > D*(1+slack)
};

inline GaussianWzInstance make_gaussian_wz_instance(int n, const infotheory::GaussianWzParams& params, double r0,
                                                    double r1, std::uint64_t c0_seed, std::uint64_t c1_seed,
                                                    std::uint64_t dither_seed, double encoder_slack = 0.25) {
    GaussianWzInstance inst{n,
                            params,
                            r0,
                            r1,
                            Codebook::gaussian(n, r0, params.p0, c0_seed),
                            Codebook::gaussian(n, r1, params.q_var, c1_seed),
                            dither_seed,
                            encoder_slack};
    return inst;
}

inline WzEncodeResult gaussian_wz_encode(const std::vector<double>& x, const std::vector<double>& u, double beta,
                                         const Codebook& c0, const Codebook& c1, double target_d,
                                         double slack = 0.25) {
    if (x.size() != u.size()) throw std::invalid_argument("gaussian_wz_encode: dither length mismatch");
    std::vector<double> target(x.size());
    for (std::size_t t = 0; t < x.size(); ++t) target[t] = beta * x[t] + u[t];
    const NearestPairResult near = nearest_superposed(target, c0, c1);
    WzEncodeResult out;
    out.i = near.i;
    out.j = near.j;
    out.distortion = near.distortion; // residual power per symbol
    out.encoder_error = near.distortion > target_d * (1.0 + slack);
    return out;
}

struct GaussianWzDecodeResult {
    std::size_t i_hat = 0;
    std::vector<double> x_hat;
    bool decoder_error = false; // instrumentation
    double end_distortion = 0.0;
};

inline GaussianWzDecodeResult gaussian_wz_decode(const std::vector<double>& y, const std::vector<double>& u,
                                                 const std::vector<double>& c1_word, double beta,
                                                 const Codebook& c0) {
    if (y.size() != u.size() || y.size() != c1_word.size() || static_cast<int>(y.size()) != c0.n())
        throw std::invalid_argument("gaussian_wz_decode: length mismatch");
    std::vector<double> v(y.size());
    for (std::size_t t = 0; t < y.size(); ++t) v[t] = beta * y[t] + u[t] - c1_word[t];
    const NearestResult hit = nearest_codeword(v, c0);
    GaussianWzDecodeResult out;
    out.i_hat = hit.index;
    out.x_hat.resize(y.size());
    const auto& w = c0.real_word(hit.index);
    for (std::size_t t = 0; t < y.size(); ++t) out.x_hat[t] = y[t] + beta * (w[t] - v[t]);
    return out;
}

/// One Gaussian trial. Draw order (the reproducibility contract): all n of y
/// ~ N(0, P_Y), then all n of z ~ N(0, P_Z), from SplitMix64(trial_seed);
/// the shared dither u ~ N(0, D) comes from an independent stream seeded
/// with derive_seed(dither_seed, trial_seed) so the same u is available at
/// both ends without the decoder seeing x.
inline WzTrialRecord simulate_gaussian_wz_trial(const GaussianWzInstance& inst, std::uint64_t trial_seed) {
    const std::size_t n = static_cast<std::size_t>(inst.n);
    SplitMix64 rng(trial_seed);
    std::vector<double> y(n), z(n), x(n);
    const double sy = std::sqrt(inst.params.p_y);
    const double sz = std::sqrt(inst.params.p_z);
    for (std::size_t t = 0; t < n; ++t) y[t] = sy * rng.next_gaussian();
    for (std::size_t t = 0; t < n; ++t) z[t] = sz * rng.next_gaussian();
    for (std::size_t t = 0; t < n; ++t) x[t] = y[t] + z[t];

    SplitMix64 dither_rng(derive_seed(inst.dither_seed, trial_seed));
    std::vector<double> u(n);
    const double su = std::sqrt(inst.params.distortion);
    for (std::size_t t = 0; t < n; ++t) u[t] = su * dither_rng.next_gaussian();

    const double beta = inst.params.beta;
    const WzEncodeResult enc =
        gaussian_wz_encode(x, u, beta, inst.c0, inst.c1, inst.params.distortion, inst.encoder_slack);
    const GaussianWzDecodeResult dec = gaussian_wz_decode(y, u, inst.c1.real_word(enc.j), beta, inst.c0);

    WzTrialRecord rec;
    rec.encoder_error = enc.encoder_error;
    rec.decoder_error = dec.i_hat != enc.i;
    rec.encode_distortion = enc.distortion;
    double d = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        const double e = dec.x_hat[t] - x[t];
        d += e * e;
    }
    rec.end_distortion = d / inst.n;
    return rec;
}

struct GenieGaussianStats {
    double var_recon_error = 0.0; // Var(x_hat - x) under correct decoding
    double var_source_noise = 0.0; // Var(beta*z + z_hat)
};

/// Monte Carlo of the two power identities of the dithered scheme under
/// genie-aided (always correct) decoding: with z_hat ~ N(0, D) independent of
/// z ~ N(0, P_Z),
///   x_hat - x = -(beta*z_hat + (1 - beta^2) z)   with variance D, and
///   beta*z + z_hat                               with variance P_Z.
inline GenieGaussianStats genie_gaussian_stats(double p_z, double distortion, std::size_t samples,
                                               std::uint64_t seed) {
    const double beta = infotheory::beta_scale(p_z, distortion);
    const double sz = std::sqrt(p_z);
    const double szh = std::sqrt(distortion);
    SplitMix64 rng(seed);
    double s1 = 0.0, s2 = 0.0, q1 = 0.0, q2 = 0.0;
    for (std::size_t k = 0; k < samples; ++k) {
        const double z = sz * rng.next_gaussian();
        const double zh = szh * rng.next_gaussian();
        const double recon_err = beta * zh - (1.0 - beta * beta) * z;
        const double source_noise = beta * z + zh;
        s1 += recon_err;
        q1 += recon_err * recon_err;
        s2 += source_noise;
        q2 += source_noise * source_noise;
    }
    const double inv = 1.0 / static_cast<double>(samples);
    GenieGaussianStats out;
    out.var_recon_error = q1 * inv - (s1 * inv) * (s1 * inv);
    out.var_source_noise = q2 * inv - (s2 * inv) * (s2 * inv);
    return out;
}

}  // namespace wzsup
