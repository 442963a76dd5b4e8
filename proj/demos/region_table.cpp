// Prints the achievable-rate corner points for a binary source with
// side information as the distortion target sweeps from near-lossless
// to the crossover probability.

#include <cstdio>

#include "wzsup/infotheory.hpp"

int main() {
    using namespace wzsup;
    using namespace wzsup::infotheory;

    const double p = 0.2;
    const GroupAlphabet g2 = GroupAlphabet::bits(1);
    const auto p_law = SymbolDistribution::bernoulli(p);
    const auto q_law = SymbolDistribution::uniform(g2);

    std::printf("# l=1, p=%.3f, uniform first-stage law\n", p);
    std::printf("%8s %12s %12s %12s %12s %9s %12s\n", "D", "r0_min", "sum_min",
                "r0_max", "r1_corner", "nonempty", "ideal_rate");
    for (int k = 1; k < 20; ++k) {
        const double d = p * k / 20.0;
        const auto region = wz_rate_region(1, p_law, q_law, d);
        std::printf("%8.4f %12.6f %12.6f %12.6f %12.6f %9s %12.6f\n", d,
                    region.r0_min, region.sum_min, region.r0_max, region.r1_corner,
                    region.nonempty ? "yes" : "no", binary_wz_rd(p, d));
    }
    return 0;
}
