#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace wzsup {

/// A group element. Alphabets are capped at 2^16 symbols.
using Sym = std::uint16_t;

/// The cyclic group Z_{2^l}: addition modulo 2^l.
/// All symmetric-noise results in the library are independent of which group
/// of order 2^l is used; the cyclic law keeps symbol arithmetic to a mask.
struct GroupAlphabet {
    int l = 1;       // bits per symbol
    int order = 2;   // 2^l

    static GroupAlphabet bits(int l) {
        if (l < 1 || l > 16) throw std::invalid_argument("GroupAlphabet: l must be in [1,16], got " + std::to_string(l));
        return GroupAlphabet{l, 1 << l};
    }

    constexpr Sym add(Sym a, Sym b) const noexcept { return static_cast<Sym>((a + b) & (order - 1)); }
    constexpr Sym sub(Sym a, Sym b) const noexcept { return static_cast<Sym>((a - b) & (order - 1)); }
    constexpr Sym neg(Sym a) const noexcept { return static_cast<Sym>((order - a) & (order - 1)); }

    friend constexpr bool operator==(const GroupAlphabet& a, const GroupAlphabet& b) noexcept {
        return a.l == b.l;
    }
};

/// Elementwise a + b over the alphabet.
inline std::vector<Sym> add(const GroupAlphabet& g, const std::vector<Sym>& a, const std::vector<Sym>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("group add: length mismatch");
    std::vector<Sym> out(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) out[k] = g.add(a[k], b[k]);
    return out;
}

/// Elementwise a - b over the alphabet.
inline std::vector<Sym> sub(const GroupAlphabet& g, const std::vector<Sym>& a, const std::vector<Sym>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("group sub: length mismatch");
    std::vector<Sym> out(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) out[k] = g.sub(a[k], b[k]);
    return out;
}

}  // namespace wzsup
