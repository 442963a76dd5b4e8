#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "wzsup/conv.hpp"
#include "wzsup/distribution.hpp"
#include "wzsup/group.hpp"
#include "wzsup/infotheory.hpp"
#include "wzsup/rng.hpp"

namespace wzsup {

struct PipelineRecord {
    double r1 = 0.0;               // transmitted rate: C1 info bits / n
    double quant_distortion = 0.0; // d_H(x, c0 + c1)/n at the encoder
    double end_distortion = 0.0;   // d_H(x, x_hat)/n
    bool c0_recovered = false;     // decoder's c0 equals the encoder's
    bool encoder_error = false;    // quant_distortion > target D
    double rate_gap_bits = 0.0;    // r1 - ideal rate at the achieved end distortion
    double distortion_gap_db = 0.0;// 10*log10(end distortion / ideal distortion at r1)
};

/// Two-stage structured scheme: quantize x over the C0 trellis, quantize the
/// residual over the C1 trellis, send only C1's info bits; the decoder
/// channel-decodes y - c1 over C0 and reconstructs c0_hat + c1. The gap
/// columns compare the operational (r1, end distortion) point against the
/// ideal rate-distortion frontier for crossover p.
inline PipelineRecord practical_wz_pipeline(const std::vector<Sym>& x, const std::vector<Sym>& y,
                                            const ConvCode& c0_code, const ConvCode& c1_code, double target_d,
                                            double p) {
    if (x.size() != y.size()) throw std::invalid_argument("practical_wz_pipeline: length mismatch");
    const GroupAlphabet g = GroupAlphabet::bits(1);
    const int n = static_cast<int>(x.size());

    // Encoder: two-stage quantization, x ~ c0 + c1.
    const TrellisResult q0 = viterbi_search(x, c0_code);
    const std::vector<Sym> residual = sub(g, x, q0.codeword);
    const TrellisResult q1 = viterbi_search(residual, c1_code);
    const std::vector<Sym>& c1 = q1.codeword;

    // Decoder sees y and c1 only.
    const std::vector<Sym> v = sub(g, y, c1);
    const TrellisResult d0 = viterbi_search(v, c0_code);
    const std::vector<Sym> x_hat = add(g, d0.codeword, c1);

    PipelineRecord rec;
    rec.r1 = static_cast<double>(q1.info.size()) / n;
    int dq = 0, de = 0;
    for (int t = 0; t < n; ++t) {
        const std::size_t u = static_cast<std::size_t>(t);
        dq += x[u] != g.add(q0.codeword[u], c1[u]);
        de += x[u] != x_hat[u];
    }
    rec.quant_distortion = static_cast<double>(dq) / n;
    rec.end_distortion = static_cast<double>(de) / n;
    rec.c0_recovered = d0.codeword == q0.codeword;
    rec.encoder_error = rec.quant_distortion > target_d;

    // Gap accounting against the ideal frontier; degenerate points (zero or
    // out-of-range distortion) report infinite/zero gaps rather than throwing.
    if (p > 0.0 && p < 0.5) {
        const double d_op = rec.end_distortion;
        rec.rate_gap_bits =
            rec.r1 - (d_op >= p ? 0.0 : infotheory::binary_wz_rd(p, d_op));
        const double r_cap = infotheory::binary_wz_rd(p, 0.0);
        const double d_ideal = infotheory::binary_wz_distortion(p, std::min(rec.r1, r_cap));
        rec.distortion_gap_db =
            d_ideal > 0.0 && d_op > 0.0 ? 10.0 * std::log10(d_op / d_ideal) : 0.0;
    }
    return rec;
}

/// Trial driver: draw y uniform and z i.i.d. Bern(p) (all n of y, then all n
/// of z), set x = y + z, and push through the pipeline.
struct PipelineInstance {
    int n = 0;          // must be a valid encoded length for both codes
    double p = 0.0;     // correlation crossover
    double target_d = 1.0;
    ConvCode c0_code;
    ConvCode c1_code;
};

inline PipelineRecord simulate_pipeline_trial(const PipelineInstance& inst, std::uint64_t trial_seed) {
    // Validates up front so a bad n fails loudly once, not per search.
    inst.c0_code.info_length(inst.n);
    inst.c1_code.info_length(inst.n);
    const std::size_t n = static_cast<std::size_t>(inst.n);
    SplitMix64 rng(trial_seed);
    std::vector<Sym> y(n), z(n);
    for (std::size_t t = 0; t < n; ++t) y[t] = static_cast<Sym>(rng.next() & 1u);
    const SymbolSampler sample_z(SymbolDistribution::bernoulli(inst.p));
    for (std::size_t t = 0; t < n; ++t) z[t] = sample_z(rng);
    const GroupAlphabet g = GroupAlphabet::bits(1);
    const std::vector<Sym> x = add(g, y, z);
    return practical_wz_pipeline(x, y, inst.c0_code, inst.c1_code, inst.target_d, inst.p);
}

}  // namespace wzsup
