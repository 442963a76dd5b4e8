#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "wzsup/codebook.hpp"
#include "wzsup/distribution.hpp"
#include "wzsup/group.hpp"
#include "wzsup/rng.hpp"

namespace wzsup {

/// Binary interference-cancellation instance: channel y = x + s + z over
/// GF(2) with the interference s known only to the encoder, z i.i.d.
/// Bern(p), and transmit cost weight(x)/n <= w. C0 is Bern(1/2) i.i.d., C1
/// is Bern(q) i.i.d.; the message is the index into C1.
struct DpcInstance {
    int n = 0;
    double p = 0.0; // channel crossover
    double w = 0.0; // cost constraint
    double q = 0.0; // C1 bias
    double r0 = 0.0;
    double r1 = 0.0;
    Codebook c0;
    Codebook c1;
};

inline DpcInstance make_dpc_instance(int n, double p, double w, double q, double r0, double r1,
                                     std::uint64_t c0_seed, std::uint64_t c1_seed) {
    if (!(p >= 0.0 && p < 0.5)) throw std::invalid_argument("make_dpc_instance: p must be in [0, 1/2)");
    if (!(w >= 0.0 && w <= 0.5)) throw std::invalid_argument("make_dpc_instance: W must be in [0, 1/2]");
    DpcInstance inst{n,
                     p,
                     w,
                     q,
                     r0,
                     r1,
                     Codebook::discrete(n, r0, SymbolDistribution::bernoulli(0.5), c0_seed),
                     Codebook::discrete(n, r1, SymbolDistribution::bernoulli(q), c1_seed)};
    return inst;
}

struct DpcEncodeResult {
    std::vector<Sym> x;        // transmitted word
    std::size_t c0_index = 0;  // quantization point of s - c1
    double cost = 0.0;         // weight(x)/n
    bool encoder_error = false;
};

/// Quantize (s - c1) onto C0 and transmit the residual x = c0 - (s - c1);
/// over GF(2) the channel then cancels s exactly: y = x + s + z = c0 + c1 + z.
inline DpcEncodeResult dpc_encode(const std::vector<Sym>& s, const std::vector<Sym>& c1_word, const Codebook& c0,
                                  double w) {
    if (s.size() != c1_word.size() || static_cast<int>(s.size()) != c0.n())
        throw std::invalid_argument("dpc_encode: length mismatch");
    const GroupAlphabet& g = c0.alphabet();
    const std::vector<Sym> target = sub(g, s, c1_word);
    const NearestResult hit = nearest_codeword(target, c0);
    DpcEncodeResult out;
    out.c0_index = hit.index;
    out.x = sub(g, c0.word(hit.index), target);
    int weight = 0;
    for (Sym b : out.x) weight += b != 0;
    out.cost = static_cast<double>(weight) / static_cast<double>(s.size());
    out.encoder_error = out.cost > w;
    return out;
}

struct DpcDecodeResult {
    std::size_t i_hat = 0;
    std::size_t j_hat = 0;
};

/// Joint ML decoding over C0 x C1: for a BSC with crossover p < 1/2 this is
/// the minimum-Hamming superposed pair (lexicographic ties).
inline DpcDecodeResult dpc_decode(const std::vector<Sym>& y, const Codebook& c0, const Codebook& c1, double p) {
    if (!(p >= 0.0 && p < 0.5)) throw std::invalid_argument("dpc_decode: p must be in [0, 1/2)");
    const NearestPairResult near = nearest_superposed(y, c0, c1);
    return {near.i, near.j};
}

struct DpcTrialRecord {
    double cost = 0.0;
    bool encoder_error = false;   // cost > W
    bool message_error = false;   // j_hat != j
    bool pair_error = false;      // (i_hat, j_hat) != (i, j)
    bool channel_identity = true; // y == c0 + c1 + z held symbolically
};

/// One trial: draw the interference s uniform, the message j uniform over
/// C1's indices, z i.i.d. Bern(p) — in that order from SplitMix64(trial_seed)
/// (all n of s, then j, then all n of z); encode, push through y = x + s + z,
/// decode jointly.
inline DpcTrialRecord simulate_dpc_trial(const DpcInstance& inst, std::uint64_t trial_seed) {
    const GroupAlphabet& g = inst.c0.alphabet();
    const std::size_t n = static_cast<std::size_t>(inst.n);
    SplitMix64 rng(trial_seed);

    std::vector<Sym> s(n), z(n);
    for (std::size_t t = 0; t < n; ++t) s[t] = static_cast<Sym>(rng.next() & 1u);
    const std::size_t j = rng.next_below(inst.c1.size());
    const SymbolSampler sample_z(SymbolDistribution::bernoulli(inst.p));
    for (std::size_t t = 0; t < n; ++t) z[t] = sample_z(rng);

    const DpcEncodeResult enc = dpc_encode(s, inst.c1.word(j), inst.c0, inst.w);
    std::vector<Sym> y = add(g, add(g, enc.x, s), z);
    const DpcDecodeResult dec = dpc_decode(y, inst.c0, inst.c1, inst.p);

    DpcTrialRecord rec;
    rec.cost = enc.cost;
    rec.encoder_error = enc.encoder_error;
    rec.message_error = dec.j_hat != j;
    rec.pair_error = dec.i_hat != enc.c0_index || dec.j_hat != j;
    rec.channel_identity = y == add(g, add(g, inst.c0.word(enc.c0_index), inst.c1.word(j)), z);
    return rec;
}

}  // namespace wzsup
