#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "wzsup/distribution.hpp"
#include "wzsup/format.hpp"
#include "wzsup/group.hpp"
#include "wzsup/rng.hpp"

namespace wzsup {

enum class CodebookMode { discrete, gaussian };

/// Number of codewords at block length n and rate r: round-half-up of 2^{nr},
/// floored at 1 so rate sweeps are monotone in size.
inline std::size_t codebook_size(int n, double rate, std::size_t cap) {
    if (n < 1) throw std::invalid_argument("codebook_size: n must be >= 1");
    if (!(rate >= 0.0)) throw std::invalid_argument("codebook_size: rate must be >= 0");
    const double m = std::pow(2.0, static_cast<double>(n) * rate);
    if (!(m < static_cast<double>(cap) + 0.5))
        throw std::length_error("codebook_size: 2^(n*rate) exceeds the codeword cap");
    const auto size = static_cast<std::size_t>(std::llround(m));
    return size < 1 ? 1 : size;
}

/// Immutable random codebook: M i.i.d. codewords of length n, either group
/// symbols or reals. Codeword i is drawn from its own PRNG stream seeded with
/// derive_seed(seed, i), so growing the size extends the codebook without
/// disturbing existing words.
class Codebook {
public:
    static constexpr std::size_t kDefaultWordCap = std::size_t{1} << 24;

    static Codebook discrete(int n, double rate, const SymbolDistribution& dist, std::uint64_t seed,
                             std::size_t word_cap = kDefaultWordCap) {
        Codebook c;
        c.mode_ = CodebookMode::discrete;
        c.n_ = n;
        c.rate_ = rate;
        c.seed_ = seed;
        c.alphabet_ = dist.alphabet();
        const std::size_t m = codebook_size(n, rate, word_cap);

        const SymbolSampler sample(dist);
        c.sym_words_.resize(m);
        for (std::size_t i = 0; i < m; ++i) {
            SplitMix64 rng(derive_seed(seed, i));
            auto& w = c.sym_words_[i];
            w.resize(static_cast<std::size_t>(n));
            for (int t = 0; t < n; ++t) w[static_cast<std::size_t>(t)] = sample(rng);
        }
        c.pack_if_possible();
        return c;
    }

    static Codebook gaussian(int n, double rate, double variance, std::uint64_t seed,
                             std::size_t word_cap = kDefaultWordCap) {
        if (!(variance >= 0.0)) throw std::invalid_argument("Codebook::gaussian: variance must be >= 0");
        Codebook c;
        c.mode_ = CodebookMode::gaussian;
        c.n_ = n;
        c.rate_ = rate;
        c.seed_ = seed;
        c.variance_ = variance;
        const std::size_t m = codebook_size(n, rate, word_cap);
        const double sigma = std::sqrt(variance);
        c.real_words_.resize(m);
        for (std::size_t i = 0; i < m; ++i) {
            SplitMix64 rng(derive_seed(seed, i));
            auto& w = c.real_words_[i];
            w.resize(static_cast<std::size_t>(n));
            for (int t = 0; t < n; ++t) w[static_cast<std::size_t>(t)] = sigma * rng.next_gaussian();
        }
        return c;
    }

    /// Hand-built discrete codebook (tests and worked examples).
    static Codebook from_symbol_words(GroupAlphabet alphabet, std::vector<std::vector<Sym>> words) {
        if (words.empty()) throw std::invalid_argument("from_symbol_words: need at least one codeword");
        Codebook c;
        c.mode_ = CodebookMode::discrete;
        c.alphabet_ = alphabet;
        c.n_ = static_cast<int>(words.front().size());
        for (const auto& w : words) {
            if (static_cast<int>(w.size()) != c.n_)
                throw std::invalid_argument("from_symbol_words: ragged codeword lengths");
            for (Sym s : w)
                if (s >= alphabet.order) throw std::invalid_argument("from_symbol_words: symbol out of range");
        }
        c.rate_ = std::log2(static_cast<double>(words.size())) / c.n_;
        c.sym_words_ = std::move(words);
        c.pack_if_possible();
        return c;
    }

    /// Hand-built real codebook (tests and worked examples).
    static Codebook from_real_words(std::vector<std::vector<double>> words) {
        if (words.empty()) throw std::invalid_argument("from_real_words: need at least one codeword");
        Codebook c;
        c.mode_ = CodebookMode::gaussian;
        c.n_ = static_cast<int>(words.front().size());
        for (const auto& w : words)
            if (static_cast<int>(w.size()) != c.n_)
                throw std::invalid_argument("from_real_words: ragged codeword lengths");
        c.rate_ = std::log2(static_cast<double>(words.size())) / c.n_;
        c.real_words_ = std::move(words);
        return c;
    }

    CodebookMode mode() const { return mode_; }
    int n() const { return n_; }
    double rate() const { return rate_; }
    std::uint64_t seed() const { return seed_; }
    std::size_t size() const {
        return mode_ == CodebookMode::discrete ? sym_words_.size() : real_words_.size();
    }
    const GroupAlphabet& alphabet() const {
        if (mode_ != CodebookMode::discrete) throw std::logic_error("Codebook::alphabet: gaussian mode");
        return alphabet_;
    }
    double variance() const {
        if (mode_ != CodebookMode::gaussian) throw std::logic_error("Codebook::variance: discrete mode");
        return variance_;
    }

    const std::vector<Sym>& word(std::size_t i) const { return sym_words_.at(i); }
    const std::vector<double>& real_word(std::size_t i) const { return real_words_.at(i); }

    /// Binary codewords of length <= 64 are mirrored as packed words (symbol t
    /// in bit t) so searches can run on popcount instead of symbol loops.
    bool packed() const { return !packed_words_.empty(); }
    std::uint64_t packed_word(std::size_t i) const { return packed_words_.at(i); }

    static std::uint64_t pack_bits(const std::vector<Sym>& w) {
        std::uint64_t b = 0;
        for (std::size_t t = 0; t < w.size(); ++t) b |= static_cast<std::uint64_t>(w[t] & 1u) << t;
        return b;
    }

    void dump(std::ostream& os) const {
        os << n_ << ' ' << to_string_17(rate_) << ' ' << size() << ' '
           << (mode_ == CodebookMode::discrete ? "discrete" : "gaussian") << ' ' << seed_ << '\n';
        if (mode_ == CodebookMode::discrete) {
            for (const auto& w : sym_words_) {
                for (std::size_t t = 0; t < w.size(); ++t) os << (t ? " " : "") << static_cast<int>(w[t]);
                os << '\n';
            }
        } else {
            for (const auto& w : real_words_) {
                for (std::size_t t = 0; t < w.size(); ++t) os << (t ? " " : "") << to_string_17(w[t]);
                os << '\n';
            }
        }
    }

private:
    void pack_if_possible() {
        if (alphabet_.l != 1 || n_ > 64) return;
        packed_words_.reserve(sym_words_.size());
        for (const auto& w : sym_words_) packed_words_.push_back(pack_bits(w));
    }

    CodebookMode mode_ = CodebookMode::discrete;
    int n_ = 0;
    double rate_ = 0.0;
    std::uint64_t seed_ = 0;
    GroupAlphabet alphabet_ = GroupAlphabet::bits(1);
    double variance_ = 0.0;
    std::vector<std::vector<Sym>> sym_words_;
    std::vector<std::uint64_t> packed_words_;
    std::vector<std::vector<double>> real_words_;
};

struct NearestResult {
    std::size_t index = 0;
    double distance = 0.0;  // Hamming count (discrete) or squared-Euclidean sum (gaussian)
};

struct NearestPairResult {
    std::size_t i = 0;
    std::size_t j = 0;
    double distortion = 0.0;  // per symbol: metric / n
};

inline constexpr std::size_t kDefaultSearchCap = std::size_t{1} << 24;

namespace detail {

inline int hamming(const std::vector<Sym>& a, const std::vector<Sym>& b) {
    int d = 0;
    for (std::size_t t = 0; t < a.size(); ++t) d += a[t] != b[t];
    return d;
}

inline double squared_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t t = 0; t < a.size(); ++t) {
        const double e = a[t] - b[t];
        d += e * e;
    }
    return d;
}

}  // namespace detail

/// Minimum-Hamming codeword; ties broken by lowest index.
inline NearestResult nearest_codeword(const std::vector<Sym>& v, const Codebook& c) {
    if (c.mode() != CodebookMode::discrete) throw std::invalid_argument("nearest_codeword: mode mismatch");
    if (static_cast<int>(v.size()) != c.n()) throw std::invalid_argument("nearest_codeword: length mismatch");
    NearestResult best{0, std::numeric_limits<double>::infinity()};
    if (c.packed()) {
        const std::uint64_t pv = Codebook::pack_bits(v);
        int best_d = c.n() + 1;
        for (std::size_t i = 0; i < c.size(); ++i) {
            const int d = std::popcount(pv ^ c.packed_word(i));
            if (d < best_d) {
                best_d = d;
                best.index = i;
            }
        }
        best.distance = best_d;
        return best;
    }
    int best_d = c.n() + 1;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const int d = detail::hamming(v, c.word(i));
        if (d < best_d) {
            best_d = d;
            best.index = i;
        }
    }
    best.distance = best_d;
    return best;
}

/// Minimum squared-Euclidean codeword; ties broken by lowest index. The
/// partial sum aborts once it passes the incumbent, which cannot change the
/// winner because only strict improvements replace it.
inline NearestResult nearest_codeword(const std::vector<double>& v, const Codebook& c) {
    if (c.mode() != CodebookMode::gaussian) throw std::invalid_argument("nearest_codeword: mode mismatch");
    if (static_cast<int>(v.size()) != c.n()) throw std::invalid_argument("nearest_codeword: length mismatch");
    NearestResult best{0, std::numeric_limits<double>::infinity()};
    for (std::size_t i = 0; i < c.size(); ++i) {
        const auto& w = c.real_word(i);
        double d = 0.0;
        for (std::size_t t = 0; t < w.size() && d < best.distance; ++t) {
            const double e = v[t] - w[t];
            d += e * e;
        }
        if (d < best.distance) {
            best.distance = d;
            best.index = i;
        }
    }
    return best;
}

/// Maximum-likelihood codeword of C under v = c + noise with i.i.d. noise:
/// maximizes sum_t log noise(v_t - c_t). Zero-probability symbols get a -1e300
/// penalty per occurrence so impossible explanations lose to any possible one.
/// Ties broken by lowest index.
inline NearestResult ml_codeword(const std::vector<Sym>& v, const Codebook& c, const SymbolDistribution& noise) {
    if (c.mode() != CodebookMode::discrete) throw std::invalid_argument("ml_codeword: mode mismatch");
    if (static_cast<int>(v.size()) != c.n()) throw std::invalid_argument("ml_codeword: length mismatch");
    if (!(noise.alphabet() == c.alphabet())) throw std::invalid_argument("ml_codeword: alphabet mismatch");
    const GroupAlphabet& g = c.alphabet();
    std::vector<double> logp(static_cast<std::size_t>(g.order));
    for (int s = 0; s < g.order; ++s) logp[static_cast<std::size_t>(s)] = noise[s] > 0.0 ? std::log(noise[s]) : -1e300;

    std::size_t best_i = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    std::vector<int> count(static_cast<std::size_t>(g.order));
    for (std::size_t i = 0; i < c.size(); ++i) {
        const auto& w = c.word(i);
        // Histogram the difference symbols first: codewords with identical
        // counts then get bit-identical scores, so score ties (and the
        // lowest-index rule) do not depend on summation order.
        std::fill(count.begin(), count.end(), 0);
        for (std::size_t t = 0; t < w.size(); ++t) ++count[g.sub(v[t], w[t])];
        double score = 0.0;
        for (int s = 0; s < g.order; ++s) score += count[static_cast<std::size_t>(s)] * logp[static_cast<std::size_t>(s)];
        if (score > best_score) {
            best_score = score;
            best_i = i;
        }
    }
    // Report the Hamming distance of the winner for instrumentation.
    return {best_i, static_cast<double>(detail::hamming(v, c.word(best_i)))};
}

/// Minimum-distortion superposed pair: argmin over (i, j) of the metric
/// between x and c0_i + c1_j, ties by lowest (i, j) lexicographically.
/// Iterating i outermost with strict improvement realizes exactly that order.
inline NearestPairResult nearest_superposed(const std::vector<Sym>& x, const Codebook& c0, const Codebook& c1,
                                            std::size_t pair_cap = kDefaultSearchCap) {
    if (c0.mode() != CodebookMode::discrete || c1.mode() != CodebookMode::discrete)
        throw std::invalid_argument("nearest_superposed: mode mismatch");
    if (c0.n() != c1.n() || static_cast<int>(x.size()) != c0.n())
        throw std::invalid_argument("nearest_superposed: length mismatch");
    if (!(c0.alphabet() == c1.alphabet())) throw std::invalid_argument("nearest_superposed: alphabet mismatch");
    if (c0.size() > pair_cap / c1.size())
        throw std::length_error("nearest_superposed: candidate pair count exceeds the search cap");

    const GroupAlphabet& g = c0.alphabet();
    const int n = c0.n();
    std::size_t best_i = 0, best_j = 0;
    int best_d = n + 1;

    if (c0.packed() && c1.packed()) {
        const std::uint64_t px = Codebook::pack_bits(x);
        for (std::size_t i = 0; i < c0.size() && best_d > 0; ++i) {
            // d_H(x, c0 + c1) = d_H(x ^ c0, c1) over GF(2)
            const std::uint64_t r = px ^ c0.packed_word(i);
            for (std::size_t j = 0; j < c1.size(); ++j) {
                const int d = std::popcount(r ^ c1.packed_word(j));
                if (d < best_d) {
                    best_d = d;
                    best_i = i;
                    best_j = j;
                    if (d == 0) break;
                }
            }
        }
        return {best_i, best_j, static_cast<double>(best_d) / n};
    }

    std::vector<Sym> r(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < c0.size() && best_d > 0; ++i) {
        const auto& w0 = c0.word(i);
        // d_H(x, c0 + c1) = d_H(x - c0, c1): subtract once per i instead of
        // adding once per (i, j).
        for (int t = 0; t < n; ++t)
            r[static_cast<std::size_t>(t)] = g.sub(x[static_cast<std::size_t>(t)], w0[static_cast<std::size_t>(t)]);
        for (std::size_t j = 0; j < c1.size(); ++j) {
            const int d = detail::hamming(r, c1.word(j));
            if (d < best_d) {
                best_d = d;
                best_i = i;
                best_j = j;
                if (d == 0) break;
            }
        }
    }
    return {best_i, best_j, static_cast<double>(best_d) / n};
}

inline NearestPairResult nearest_superposed(const std::vector<double>& x, const Codebook& c0, const Codebook& c1,
                                            std::size_t pair_cap = kDefaultSearchCap) {
    if (c0.mode() != CodebookMode::gaussian || c1.mode() != CodebookMode::gaussian)
        throw std::invalid_argument("nearest_superposed: mode mismatch");
    if (c0.n() != c1.n() || static_cast<int>(x.size()) != c0.n())
        throw std::invalid_argument("nearest_superposed: length mismatch");
    if (c0.size() > pair_cap / c1.size())
        throw std::length_error("nearest_superposed: candidate pair count exceeds the search cap");

    const int n = c0.n();
    std::size_t best_i = 0, best_j = 0;
    double best_d = std::numeric_limits<double>::infinity();
    std::vector<double> r(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < c0.size(); ++i) {
        const auto& w0 = c0.real_word(i);
        for (int t = 0; t < n; ++t) r[static_cast<std::size_t>(t)] = x[static_cast<std::size_t>(t)] - w0[static_cast<std::size_t>(t)];
        for (std::size_t j = 0; j < c1.size(); ++j) {
            const auto& w1 = c1.real_word(j);
            double d = 0.0;
            for (std::size_t t = 0; t < w1.size() && d < best_d; ++t) {
                const double e = r[t] - w1[t];
                d += e * e;
            }
            if (d < best_d) {
                best_d = d;
                best_i = i;
                best_j = j;
            }
        }
    }
    return {best_i, best_j, best_d / n};
}

/// Diagnostic strong-typicality check: true iff every symbol's empirical
/// frequency is within eps (strictly) of its probability.
inline bool typicality_test(const std::vector<Sym>& v, const SymbolDistribution& dist, double eps) {
    if (v.empty()) throw std::invalid_argument("typicality_test: empty word");
    std::vector<double> freq(static_cast<std::size_t>(dist.order()), 0.0);
    for (Sym s : v) {
        if (s >= dist.order()) throw std::invalid_argument("typicality_test: symbol out of range");
        freq[s] += 1.0;
    }
    for (int g = 0; g < dist.order(); ++g) {
        if (!(std::abs(freq[static_cast<std::size_t>(g)] / v.size() - dist[g]) < eps)) return false;
    }
    return true;
}

}  // namespace wzsup
