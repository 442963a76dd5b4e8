#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wzsup/group.hpp"

namespace wzsup {

/// A probability vector over a GroupAlphabet. Probabilities must be
/// nonnegative and sum to 1 within 1e-12.
class SymbolDistribution {
  public:
    SymbolDistribution(GroupAlphabet alphabet, std::vector<double> probs)
        : alphabet_(alphabet), probs_(std::move(probs)) {
        if (probs_.size() != static_cast<std::size_t>(alphabet_.order))
            throw std::invalid_argument("SymbolDistribution: need " + std::to_string(alphabet_.order) +
                                        " probabilities, got " + std::to_string(probs_.size()));
        double sum = 0.0;
        for (double p : probs_) {
            if (!(p >= 0.0)) throw std::invalid_argument("SymbolDistribution: negative probability");
            sum += p;
        }
        if (std::abs(sum - 1.0) > 1e-12)
            throw std::invalid_argument("SymbolDistribution: probabilities sum to " + std::to_string(sum));
    }

    static SymbolDistribution uniform(GroupAlphabet g) {
        return SymbolDistribution(g, std::vector<double>(g.order, 1.0 / g.order));
    }

    static SymbolDistribution delta(GroupAlphabet g, Sym at = 0) {
        std::vector<double> p(g.order, 0.0);
        p.at(at) = 1.0;
        return SymbolDistribution(g, std::move(p));
    }

    /// Bernoulli(p1) over Z_2.
    static SymbolDistribution bernoulli(double p1) {
        if (!(p1 >= 0.0 && p1 <= 1.0)) throw std::invalid_argument("bernoulli: p must be in [0,1]");
        return SymbolDistribution(GroupAlphabet::bits(1), {1.0 - p1, p1});
    }

    /// Symbol 0 with probability 1 - flip, every other symbol equally likely.
    /// For l = 1 this is Bernoulli(flip).
    static SymbolDistribution symmetric(GroupAlphabet g, double flip) {
        if (!(flip >= 0.0 && flip <= 1.0)) throw std::invalid_argument("symmetric: flip must be in [0,1]");
        std::vector<double> p(g.order, g.order > 1 ? flip / (g.order - 1) : 0.0);
        p[0] = 1.0 - flip;
        return SymbolDistribution(g, std::move(p));
    }

    /// The pushforward under negation: reversed()(g) = (*this)(-g).
    SymbolDistribution reversed() const {
        std::vector<double> p(probs_.size());
        for (int g = 0; g < alphabet_.order; ++g) p[g] = probs_[alphabet_.neg(static_cast<Sym>(g))];
        return SymbolDistribution(alphabet_, std::move(p));
    }

    const GroupAlphabet& alphabet() const noexcept { return alphabet_; }
    int order() const noexcept { return alphabet_.order; }
    double operator[](std::size_t g) const noexcept { return probs_[g]; }
    const std::vector<double>& probs() const noexcept { return probs_; }

    friend bool operator==(const SymbolDistribution& a, const SymbolDistribution& b) {
        return a.alphabet_ == b.alphabet_ && a.probs_ == b.probs_;
    }

  private:
    GroupAlphabet alphabet_;
    std::vector<double> probs_;
};

/// Inverse-CDF sampler: returns the first symbol whose cumulative probability
/// exceeds the generator's [0,1) draw. This exact rule is part of the
/// reproducibility contract for all discrete draws in the library.
class SymbolSampler {
  public:
    explicit SymbolSampler(const SymbolDistribution& dist) : cum_(dist.probs()) {
        double acc = 0.0;
        for (double& c : cum_) {
            acc += c;
            c = acc;
        }
        cum_.back() = 1.0;  // guard against rounding shortfall
    }

    template <typename Rng>
    Sym operator()(Rng& rng) const {
        const double u = rng.next_unit();
        std::size_t g = 0;
        while (u >= cum_[g]) ++g;
        return static_cast<Sym>(g);
    }

  private:
    std::vector<double> cum_;  // cumulative probabilities
};

}  // namespace wzsup
