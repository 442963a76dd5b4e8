#pragma once

#include <bit>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "wzsup/group.hpp"

namespace wzsup {

/// Rate-1/n0 binary convolutional code with zero-tail termination.
///
/// Register convention: the encoder keeps the last K input bits with the
/// newest bit at position 0, so generator tap bit i touches the input from i
/// steps ago. The impulse response of generator g is therefore the bits of g
/// read from LSB to MSB. Generators are conventionally written in octal
/// (e.g. 133,171 for the K=7 pair).
struct ConvCode {
    int n0 = 2;                   // output bits per input bit
    int constraint = 3;           // K: taps span the last K inputs
    std::vector<unsigned> gens;   // tap masks, one per output

    int states() const { return 1 << (constraint - 1); }

    /// Encoded length for info_len input bits, counting the K-1 tail zeros.
    int encoded_length(int info_len) const { return n0 * (info_len + constraint - 1); }

    /// Info length recoverable from an encoded length; throws if the length
    /// is not of the form n0 * (L + K - 1) with L >= 1.
    int info_length(int encoded_len) const {
        if (encoded_len % n0 != 0) throw std::invalid_argument("ConvCode: encoded length not a multiple of n0");
        const int steps = encoded_len / n0;
        const int info = steps - (constraint - 1);
        if (info < 1) throw std::invalid_argument("ConvCode: encoded length shorter than the tail");
        return info;
    }
};

/// Parse an octal generator string such as "133".
inline unsigned parse_octal(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("parse_octal: empty generator");
    unsigned value = 0;
    for (char ch : text) {
        if (ch < '0' || ch > '7') throw std::invalid_argument("parse_octal: bad octal digit in '" + text + "'");
        value = value * 8 + static_cast<unsigned>(ch - '0');
    }
    return value;
}

inline ConvCode make_conv_code(std::vector<unsigned> gens, int constraint) {
    if (constraint < 2 || constraint > 16)
        throw std::invalid_argument("make_conv_code: constraint length must be in [2,16]");
    if (gens.empty()) throw std::invalid_argument("make_conv_code: need at least one generator");
    for (unsigned g : gens) {
        if (g == 0) throw std::invalid_argument("make_conv_code: zero generator polynomial");
        if (g >> constraint) throw std::invalid_argument("make_conv_code: generator taps exceed constraint length");
    }
    ConvCode code;
    code.n0 = static_cast<int>(gens.size());
    code.constraint = constraint;
    code.gens = std::move(gens);
    return code;
}

/// Octal CSV form, e.g. make_conv_code_octal("133,171", 7).
inline ConvCode make_conv_code_octal(const std::string& octal_list, int constraint) {
    std::vector<unsigned> gens;
    std::size_t start = 0;
    while (start <= octal_list.size()) {
        const std::size_t comma = octal_list.find(',', start);
        const std::string tok = octal_list.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        gens.push_back(parse_octal(tok));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return make_conv_code(std::move(gens), constraint);
}

namespace detail {

/// n0 output bits for a full register value (newest input at bit 0), packed
/// with generator 0's output at bit 0.
inline unsigned conv_outputs(const ConvCode& code, unsigned reg) {
    unsigned out = 0;
    for (int b = 0; b < code.n0; ++b)
        out |= static_cast<unsigned>(std::popcount(reg & code.gens[static_cast<std::size_t>(b)]) & 1) << b;
    return out;
}

}  // namespace detail

/// Shift-register encoding with K-1 tail zeros; output length
/// n0 * (info_len + K - 1).
inline std::vector<Sym> conv_encode(const std::vector<Sym>& info, const ConvCode& code) {
    const int steps = static_cast<int>(info.size()) + code.constraint - 1;
    std::vector<Sym> out;
    out.reserve(static_cast<std::size_t>(code.n0) * static_cast<std::size_t>(steps));
    unsigned reg = 0;
    const unsigned reg_mask = (1u << code.constraint) - 1;
    for (int t = 0; t < steps; ++t) {
        const unsigned bit = t < static_cast<int>(info.size()) ? (info[static_cast<std::size_t>(t)] & 1u) : 0u;
        reg = ((reg << 1) | bit) & reg_mask;
        const unsigned ow = detail::conv_outputs(code, reg);
        for (int b = 0; b < code.n0; ++b) out.push_back(static_cast<Sym>((ow >> b) & 1u));
    }
    return out;
}

struct TrellisResult {
    std::vector<Sym> info;      // input bits of the winning path
    std::vector<Sym> codeword;  // == conv_encode(info)
    double metric = 0.0;        // total branch metric of the winner
};

namespace detail {

/// Exact Viterbi over the zero-tail trellis with per-step branch costs
/// cost[t * 2^n0 + outputs]. State = the previous K-1 input bits (newest at
/// bit 0); a step with input b moves s to ((s << 1) | b) & mask, dropping the
/// oldest bit. Both branches merging into a state carry the same current
/// input (the state's bit 0) and differ in that dropped oldest bit; ties
/// prefer the branch whose dropped input bit is 0, which makes the winner the
/// minimum-metric codeword whose info word, read with time 0 at bit 0, is the
/// smallest integer.
inline TrellisResult viterbi_core(const ConvCode& code, int info_len, const std::vector<double>& cost) {
    const int k1 = code.constraint - 1;
    const int s_count = 1 << k1;
    const int steps = info_len + k1;
    const double inf = std::numeric_limits<double>::infinity();

    std::vector<std::uint8_t> otab(static_cast<std::size_t>(1) << code.constraint);
    for (unsigned full = 0; full < otab.size(); ++full)
        otab[full] = static_cast<std::uint8_t>(conv_outputs(code, full));

    std::vector<double> prev(static_cast<std::size_t>(s_count), inf);
    std::vector<double> cur(static_cast<std::size_t>(s_count), inf);
    prev[0] = 0.0;
    // decision[t * s_count + s]: the dropped oldest bit of the survivor into s
    std::vector<std::uint8_t> decision(static_cast<std::size_t>(steps) * static_cast<std::size_t>(s_count));

    const unsigned hi = k1 > 0 ? 1u << (k1 - 1) : 0u;  // oldest-bit position within a state
    for (int t = 0; t < steps; ++t) {
        const double* step_cost = cost.data() + static_cast<std::size_t>(t) * (1u << code.n0);
        std::fill(cur.begin(), cur.end(), inf);
        for (unsigned ns = 0; ns < static_cast<unsigned>(s_count); ++ns) {
            const unsigned b = ns & 1u;
            if (t >= info_len && b != 0) continue;  // tail forces zero inputs
            const unsigned ps_low = ns >> 1;
            const unsigned ps_high = ps_low | hi;
            // full register = (ps << 1 | b) plus the dropped bit at position K-1
            const unsigned full_low = ((ps_low << 1) | b);
            const unsigned full_high = ((ps_high << 1) | b);
            const double m_low = prev[ps_low] + step_cost[otab[full_low]];
            const double m_high = prev[ps_high] + step_cost[otab[full_high]];
            if (m_high < m_low) {
                cur[ns] = m_high;
                decision[static_cast<std::size_t>(t) * s_count + ns] = 1;
            } else {
                cur[ns] = m_low;
                decision[static_cast<std::size_t>(t) * s_count + ns] = 0;
            }
        }
        std::swap(prev, cur);
    }

    TrellisResult result;
    result.metric = prev[0];
    result.info.assign(static_cast<std::size_t>(info_len), 0);
    unsigned s = 0;
    for (int t = steps - 1; t >= 0; --t) {
        const unsigned b = s & 1u;
        if (t < info_len) result.info[static_cast<std::size_t>(t)] = static_cast<Sym>(b);
        const unsigned dropped = decision[static_cast<std::size_t>(t) * s_count + s];
        s = (s >> 1) | (dropped ? hi : 0u);
    }
    result.codeword = conv_encode(result.info, code);
    return result;
}

}  // namespace detail

/// Minimum-Hamming codeword of the zero-tail code against a binary target.
inline TrellisResult viterbi_search(const std::vector<Sym>& target, const ConvCode& code) {
    const int info_len = code.info_length(static_cast<int>(target.size()));
    const int steps = info_len + code.constraint - 1;
    const unsigned ow_count = 1u << code.n0;
    std::vector<double> cost(static_cast<std::size_t>(steps) * ow_count);
    for (int t = 0; t < steps; ++t) {
        unsigned tgt = 0;
        for (int b = 0; b < code.n0; ++b)
            tgt |= static_cast<unsigned>(target[static_cast<std::size_t>(t * code.n0 + b)] & 1u) << b;
        for (unsigned ow = 0; ow < ow_count; ++ow)
            cost[static_cast<std::size_t>(t) * ow_count + ow] = std::popcount(tgt ^ ow);
    }
    return detail::viterbi_core(code, info_len, cost);
}

/// Minimum squared-Euclidean codeword against a real-valued target (code bits
/// mapped to 0.0/1.0).
inline TrellisResult viterbi_search(const std::vector<double>& target, const ConvCode& code) {
    const int info_len = code.info_length(static_cast<int>(target.size()));
    const int steps = info_len + code.constraint - 1;
    const unsigned ow_count = 1u << code.n0;
    std::vector<double> cost(static_cast<std::size_t>(steps) * ow_count);
    for (int t = 0; t < steps; ++t) {
        for (unsigned ow = 0; ow < ow_count; ++ow) {
            double c = 0.0;
            for (int b = 0; b < code.n0; ++b) {
                const double e = target[static_cast<std::size_t>(t * code.n0 + b)] - static_cast<double>((ow >> b) & 1u);
                c += e * e;
            }
            cost[static_cast<std::size_t>(t) * ow_count + ow] = c;
        }
    }
    return detail::viterbi_core(code, info_len, cost);
}

}  // namespace wzsup
