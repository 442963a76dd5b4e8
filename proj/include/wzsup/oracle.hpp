#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "wzsup/codebook.hpp"
#include "wzsup/wz.hpp"

namespace wzsup {

struct ExactOracleResult {
    double encoder_error_prob = 0.0;
    double decoder_error_prob = 0.0;
    double mean_end_distortion = 0.0;
    std::vector<double> end_distortion_pmf;  // index d: P(d_H(x, x_hat) == d)
};

/// Exact event probabilities by full enumeration: x is uniform over G^n
/// (because y is uniform and independent of z, x = y + z is uniform and
/// independent of z), z is weighted by its product law. Every (x, z) pair is
/// pushed through the very same encode/decode path the Monte Carlo trials
/// use. Tractable only while |G|^(2n) <= 2^26, i.e. n*l <= 13.
inline ExactOracleResult exact_small_oracle(const WzInstance& inst) {
    const GroupAlphabet& g = inst.alphabet();
    const int nl = inst.n * g.l;
    if (nl > 13) throw std::length_error("exact_small_oracle: |G|^(2n) exceeds 2^26");
    const std::size_t total = std::size_t{1} << nl;  // |G|^n
    const unsigned sym_mask = static_cast<unsigned>(g.order - 1);
    const std::size_t n = static_cast<std::size_t>(inst.n);

    // All words of G^n, indexed with symbol t in bit field [t*l, (t+1)*l).
    std::vector<std::vector<Sym>> words(total, std::vector<Sym>(n));
    for (std::size_t idx = 0; idx < total; ++idx)
        for (std::size_t t = 0; t < n; ++t)
            words[idx][t] = static_cast<Sym>((idx >> (t * static_cast<std::size_t>(g.l))) & sym_mask);

    // Product-law weight of each z.
    std::vector<double> weight(total, 1.0);
    for (std::size_t idx = 0; idx < total; ++idx)
        for (std::size_t t = 0; t < n; ++t) weight[idx] *= inst.p[words[idx][t]];

    // Encoder table over all x, and decode table over all v = y - c1.
    struct Enc {
        std::uint32_t i, j;
        bool error;
    };
    std::vector<Enc> enc(total);
    double enc_error = 0.0;
    const double px = 1.0 / static_cast<double>(total);
    for (std::size_t idx = 0; idx < total; ++idx) {
        const WzEncodeResult e = wz_encode(words[idx], inst.c0, inst.c1, inst.target_d);
        enc[idx] = {static_cast<std::uint32_t>(e.i), static_cast<std::uint32_t>(e.j), e.encoder_error};
        enc_error += px * e.encoder_error;
    }
    std::vector<std::uint32_t> dec(total);
    for (std::size_t idx = 0; idx < total; ++idx)
        dec[idx] = static_cast<std::uint32_t>(decode_c0_index(words[idx], inst.c0, inst.decode_noise));

    // Joint sweep. v = y - c1_j = (x - z) - c1_j, accumulated per x as
    // xc = x - c1_j so the z loop only subtracts z.
    ExactOracleResult out;
    out.encoder_error_prob = enc_error;
    out.end_distortion_pmf.assign(n + 1, 0.0);
    std::vector<Sym> xc(n), v(n);
    const bool packed = g.l == 1 && inst.c0.packed() && inst.c1.packed();
    for (std::size_t xi = 0; xi < total; ++xi) {
        const Enc e = enc[xi];
        const auto& c1w = inst.c1.word(e.j);
        for (std::size_t t = 0; t < n; ++t) xc[t] = g.sub(words[xi][t], c1w[t]);

        if (packed) {
            const std::uint64_t xc_bits = Codebook::pack_bits(xc);
            const std::uint64_t x_bits = static_cast<std::uint64_t>(xi);
            const std::uint64_t c1_bits = inst.c1.packed_word(e.j);
            for (std::size_t zi = 0; zi < total; ++zi) {
                const double w = weight[zi];
                if (w == 0.0) continue;
                const std::uint32_t i_hat = dec[xc_bits ^ zi];
                if (i_hat != e.i) out.decoder_error_prob += px * w;
                const std::uint64_t xh_bits = inst.c0.packed_word(i_hat) ^ c1_bits;
                const int d = std::popcount(x_bits ^ xh_bits);
                out.end_distortion_pmf[static_cast<std::size_t>(d)] += px * w;
            }
        } else {
            for (std::size_t zi = 0; zi < total; ++zi) {
                const double w = weight[zi];
                if (w == 0.0) continue;
                std::size_t v_idx = 0;
                for (std::size_t t = 0; t < n; ++t) {
                    v[t] = g.sub(xc[t], words[zi][t]);
                    v_idx |= static_cast<std::size_t>(v[t]) << (t * static_cast<std::size_t>(g.l));
                }
                const std::uint32_t i_hat = dec[v_idx];
                if (i_hat != e.i) out.decoder_error_prob += px * w;
                const auto& c0w = inst.c0.word(i_hat);
                int d = 0;
                for (std::size_t t = 0; t < n; ++t) d += words[xi][t] != g.add(c0w[t], c1w[t]);
                out.end_distortion_pmf[static_cast<std::size_t>(d)] += px * w;
            }
        }
    }
    for (std::size_t d = 0; d <= n; ++d)
        out.mean_end_distortion += out.end_distortion_pmf[d] * static_cast<double>(d) / static_cast<double>(n);
    return out;
}

}  // namespace wzsup
