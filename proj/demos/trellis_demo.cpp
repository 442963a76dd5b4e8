// Quantizes a fair binary source onto the codewords of a rate-1/2
// convolutional code and reports the per-symbol distortion against the
// rate-distortion bound at the code's effective rate.

#include <cstdio>
#include <vector>

#include "wzsup/conv.hpp"
#include "wzsup/group.hpp"
#include "wzsup/infotheory.hpp"
#include "wzsup/rng.hpp"

int main() {
    using namespace wzsup;

    const ConvCode code = make_conv_code_octal("561,753", 9);
    const std::size_t n = 100000;
    const int info_len = code.info_length(static_cast<int>(n));

    SplitMix64 rng(7);
    std::vector<Sym> source(n);
    for (auto& s : source) s = static_cast<Sym>(rng.next() & 1);

    const auto result = viterbi_search(source, code);
    std::size_t dist = 0;
    for (std::size_t t = 0; t < n; ++t)
        if (source[t] != result.codeword[t]) ++dist;

    const double rate = static_cast<double>(info_len) / static_cast<double>(n);
    const double d_op = static_cast<double>(dist) / static_cast<double>(n);
    // Fair-coin rate-distortion: D(R) = Hinv(1 - R).
    double lo = 0.0, hi = 0.5;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (infotheory::binary_entropy(mid) < 1.0 - rate ? lo : hi) = mid;
    }
    std::printf("constraint length %d, rate %.4f bit/symbol\n", code.constraint, rate);
    std::printf("measured distortion  %.5f\n", d_op);
    std::printf("ideal distortion     %.5f\n", 0.5 * (lo + hi));
    return 0;
}
