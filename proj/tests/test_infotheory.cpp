#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "wzsup/infotheory.hpp"
#include "wzsup/rng.hpp"

using namespace wzsup;
using namespace wzsup::infotheory;
using Catch::Matchers::WithinAbs;

// Extended-precision reference values (60-digit evaluation, rounded to
// binary64). Frozen here so regressions in the entropy/convolution chain
// show up as hard failures, not drift.
namespace ref {
constexpr double h_025 = 0.81127812445913286;   // H(0.25)
constexpr double h_01 = 0.46899559358928122;    // H(0.1)
constexpr double h_005 = 0.28639695711595613;   // H(0.05)
constexpr double h_026 = 0.82674637249261790;   // H(0.26)
constexpr double h_0275 = 0.84854817829461581;  // H(0.275)

// Region corner points for l=1, p=0.2, q uniform, D=0.1.
constexpr double sum_min = 0.53100440641071878;
constexpr double r0_max = 0.17325362750738210;
constexpr double r1_corner = 0.35775077890333667;

constexpr double wz_rd_025_005 = 0.56215122117865969;  // H(0.275) - H(0.05)

constexpr double dprime_01 = 0.0075172364411004748;
constexpr double dprime_025 = 0.088020701109512551;
constexpr double dprime_04 = 0.30548971448003758;

constexpr double r1_star_01_025 = 0.34228253086985164;  // H(0.25) - H(0.1)
constexpr double r_half_025 = 0.18872187554086714;      // 1 - H(0.25)
}  // namespace ref

TEST_CASE("binary entropy pins the reference values") {
    CHECK_THAT(binary_entropy(0.25), WithinAbs(ref::h_025, 1e-15));
    CHECK_THAT(binary_entropy(0.1), WithinAbs(ref::h_01, 1e-15));
    CHECK_THAT(binary_entropy(0.05), WithinAbs(ref::h_005, 1e-15));
    CHECK_THAT(binary_entropy(0.26), WithinAbs(ref::h_026, 1e-15));
    CHECK_THAT(binary_entropy(0.275), WithinAbs(ref::h_0275, 1e-15));
    CHECK(binary_entropy(0.0) == 0.0);
    CHECK(binary_entropy(1.0) == 0.0);
    CHECK(binary_entropy(0.5) == 1.0);
    CHECK_THROWS_AS(binary_entropy(-0.1), std::invalid_argument);
    CHECK_THROWS_AS(binary_entropy(1.1), std::invalid_argument);
}

TEST_CASE("entropy of symbol laws") {
    const GroupAlphabet g4 = GroupAlphabet::bits(2);
    CHECK_THAT(entropy(SymbolDistribution::uniform(g4)), WithinAbs(2.0, 1e-15));
    CHECK(entropy(SymbolDistribution::delta(g4)) == 0.0);
    CHECK_THAT(entropy(SymbolDistribution::bernoulli(0.25)), WithinAbs(ref::h_025, 1e-15));
}

TEST_CASE("group convolution") {
    SECTION("binary case reduces to the crossover formula") {
        const auto pq = convolve(SymbolDistribution::bernoulli(0.2), SymbolDistribution::bernoulli(0.1));
        CHECK_THAT(pq[1], WithinAbs(binary_convolve(0.2, 0.1), 1e-15));
        CHECK_THAT(binary_convolve(0.2, 0.1), WithinAbs(0.26, 1e-15));
    }
    SECTION("delta is the identity") {
        const auto p = SymbolDistribution::symmetric(GroupAlphabet::bits(2), 0.3);
        const auto out = convolve(p, SymbolDistribution::delta(GroupAlphabet::bits(2)));
        for (int s = 0; s < 4; ++s) CHECK_THAT(out[static_cast<std::size_t>(s)], WithinAbs(p[static_cast<std::size_t>(s)], 1e-15));
    }
    SECTION("commutes and preserves normalization on random laws") {
        const GroupAlphabet g8 = GroupAlphabet::bits(3);
        SplitMix64 rng(2024);
        for (int rep = 0; rep < 20; ++rep) {
            std::vector<double> a(8), b(8);
            double sa = 0.0, sb = 0.0;
            for (int s = 0; s < 8; ++s) {
                a[static_cast<std::size_t>(s)] = rng.next_unit() + 1e-3;
                b[static_cast<std::size_t>(s)] = rng.next_unit() + 1e-3;
                sa += a[static_cast<std::size_t>(s)];
                sb += b[static_cast<std::size_t>(s)];
            }
            for (int s = 0; s < 8; ++s) {
                a[static_cast<std::size_t>(s)] /= sa;
                b[static_cast<std::size_t>(s)] /= sb;
            }
            const SymbolDistribution da(g8, a), db(g8, b);
            const auto ab = convolve(da, db);
            const auto ba = convolve(db, da);
            double sum = 0.0;
            for (int s = 0; s < 8; ++s) {
                CHECK_THAT(ab[static_cast<std::size_t>(s)], WithinAbs(ba[static_cast<std::size_t>(s)], 1e-14));
                sum += ab[static_cast<std::size_t>(s)];
            }
            CHECK_THAT(sum, WithinAbs(1.0, 1e-12));
        }
    }
    SECTION("alphabet mismatch throws") {
        CHECK_THROWS_AS(convolve(SymbolDistribution::bernoulli(0.1),
                                 SymbolDistribution::uniform(GroupAlphabet::bits(2))),
                        std::invalid_argument);
    }
}

TEST_CASE("distortion test-channel law") {
    const GroupAlphabet g4 = GroupAlphabet::bits(2);
    const auto d = d_distribution(g4, 0.3);
    CHECK_THAT(d[0], WithinAbs(0.7, 1e-15));
    for (std::size_t s = 1; s < 4; ++s) CHECK_THAT(d[s], WithinAbs(0.1, 1e-15));
    CHECK_THROWS_AS(d_distribution(g4, 0.8), std::invalid_argument);  // above (order-1)/order
    CHECK_THROWS_AS(d_distribution(g4, -0.1), std::invalid_argument);
    // l=1: the law is Bernoulli(D).
    const auto d1 = d_distribution(GroupAlphabet::bits(1), 0.1);
    CHECK_THAT(d1[1], WithinAbs(0.1, 1e-15));
}

TEST_CASE("rate region pins the reference corner (l=1, p=0.2, uniform q, D=0.1)") {
    const GroupAlphabet g2 = GroupAlphabet::bits(1);
    const auto region = wz_rate_region(1, SymbolDistribution::bernoulli(0.2), SymbolDistribution::uniform(g2), 0.1);
    CHECK_THAT(region.r0_min, WithinAbs(0.0, 1e-15));  // q*d uniform -> full entropy
    CHECK_THAT(region.sum_min, WithinAbs(ref::sum_min, 1e-14));
    CHECK_THAT(region.r0_max, WithinAbs(ref::r0_max, 1e-14));
    CHECK_THAT(region.r1_corner, WithinAbs(ref::r1_corner, 1e-14));
    CHECK(region.nonempty);
    CHECK_THAT(region.r1_corner, WithinAbs(std::max(0.0, region.sum_min - region.r0_max), 1e-15));
}

TEST_CASE("rate region emptiness follows the entropy comparison") {
    const GroupAlphabet g2 = GroupAlphabet::bits(1);
    // A deterministic C1 law cannot help: H(q*d) = H(d) < H(p*d).
    const auto region = wz_rate_region(1, SymbolDistribution::bernoulli(0.2),
                                       SymbolDistribution::delta(g2), 0.1);
    CHECK_FALSE(region.nonempty);
    CHECK(region.r0_min > region.r0_max);
    // D = 0 collapses the quantization constraint to lossless: sum_min = l.
    const auto lossless = wz_rate_region(1, SymbolDistribution::bernoulli(0.2),
                                         SymbolDistribution::uniform(g2), 0.0);
    CHECK_THAT(lossless.sum_min, WithinAbs(1.0, 1e-15));
}

TEST_CASE("time-sharing threshold solves the tangency equation") {
    CHECK_THAT(time_sharing_threshold(0.1), WithinAbs(ref::dprime_01, 1e-12));
    CHECK_THAT(time_sharing_threshold(0.25), WithinAbs(ref::dprime_025, 1e-12));
    CHECK_THAT(time_sharing_threshold(0.4), WithinAbs(ref::dprime_04, 1e-12));
    for (double p : {0.1, 0.25, 0.4}) {
        const double dp = time_sharing_threshold(p);
        CHECK(std::abs(detail::time_sharing_residual(p, dp)) < 1e-9);
    }
    CHECK_THROWS_AS(time_sharing_threshold(0.0), std::invalid_argument);
    CHECK_THROWS_AS(time_sharing_threshold(0.5), std::invalid_argument);
}

TEST_CASE("rate-distortion with side information, binary symmetric") {
    SECTION("pins the reference value below the threshold") {
        CHECK_THAT(binary_wz_rd(0.25, 0.05), WithinAbs(ref::wz_rd_025_005, 1e-13));
    }
    SECTION("endpoints") {
        CHECK_THAT(binary_wz_rd(0.25, 0.0), WithinAbs(ref::h_025, 1e-15));  // lossless needs H(p)
        CHECK(binary_wz_rd(0.25, 0.25) == 0.0);
    }
    SECTION("chord joins continuously and stays below the curve") {
        const double p = 0.25;
        const double dp = time_sharing_threshold(p);
        const double curve_at = detail::wz_curve(p, dp);
        CHECK_THAT(binary_wz_rd(p, dp), WithinAbs(curve_at, 1e-12));
        for (int k = 1; k < 100; ++k) {
            const double d = dp + (p - dp) * k / 100.0;
            CHECK(binary_wz_rd(p, d) <= detail::wz_curve(p, d) + 1e-12);
        }
    }
    SECTION("strictly decreasing in D") {
        double last = binary_wz_rd(0.25, 0.0);
        for (int k = 1; k <= 50; ++k) {
            const double r = binary_wz_rd(0.25, 0.25 * k / 50.0);
            CHECK(r < last);
            last = r;
        }
    }
    SECTION("domain checks") {
        CHECK_THROWS_AS(binary_wz_rd(0.25, 0.3), std::invalid_argument);
        CHECK_THROWS_AS(binary_wz_rd(0.6, 0.1), std::invalid_argument);
    }
}

TEST_CASE("rate -> distortion inverse") {
    for (double p : {0.1, 0.25, 0.4}) {
        for (int k = 0; k <= 10; ++k) {
            const double rate = binary_wz_rd(p, 0.0) * k / 10.0;
            const double d = binary_wz_distortion(p, rate);
            CHECK_THAT(binary_wz_rd(p, d), WithinAbs(rate, 1e-10));
        }
    }
    CHECK_THROWS_AS(binary_wz_distortion(0.25, 1.5), std::invalid_argument);
}

TEST_CASE("interference-cancellation parameters") {
    const auto params = dpc_binary_params(0.1, 0.25);
    CHECK_THAT(params.q_star, WithinAbs(0.1875, 1e-15));
    CHECK_THAT(binary_convolve(0.1, params.q_star), WithinAbs(0.25, 1e-15));
    CHECK_THAT(params.r1_star, WithinAbs(ref::r1_star_01_025, 1e-14));
    // With q = q*, the cost-capacity equals the corner rate H(W) - H(p).
    CHECK_THAT(params.cap_p_q, WithinAbs(params.r1_star, 1e-13));
    CHECK_THAT(dpc_binary_params(0.25, 0.25).r_half_w, WithinAbs(ref::r_half_025, 1e-14));

    SECTION("q* solves the crossover equation on a 100-point grid") {
        for (int k = 0; k < 100; ++k) {
            const double p = 0.005 + 0.48 * k / 99.0;
            const double w = p + (0.5 - p) * ((k * 37) % 100) / 99.0;
            const auto pr = dpc_binary_params(p, w);
            CHECK_THAT(binary_convolve(p, pr.q_star), WithinAbs(w, 1e-12));
        }
    }
    CHECK_THROWS_AS(dpc_binary_params(0.3, 0.2), std::invalid_argument);  // W < p
}

TEST_CASE("quadratic-Gaussian quantities") {
    CHECK(gaussian_wz_rate(1.0, 0.25) == 1.0);
    CHECK_THAT(gaussian_wz_rate(2.0, 0.5), WithinAbs(1.0, 1e-15));
    CHECK(gaussian_wz_rate(1.0, 1.0) == 0.0);
    CHECK_THROWS_AS(gaussian_wz_rate(1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(gaussian_wz_rate(1.0, 1.5), std::invalid_argument);

    const double beta = beta_scale(1.0, 0.25);
    CHECK_THAT(beta * beta + 0.25, WithinAbs(1.0, 1e-15));
    CHECK(beta_scale(1.0, 1.0) == 0.0);

    const auto params = make_gaussian_wz_params(1.0, 1.0, 0.25, 1.25);
    CHECK_THAT(params.p0, WithinAbs(2.25, 1e-15));  // defaults to P_Z + Q
    CHECK_THAT(params.beta, WithinAbs(beta, 1e-15));
    CHECK_THROWS_AS(make_gaussian_wz_params(1.0, 1.0, 0.25, 0.5), std::invalid_argument);  // Q + D <= P_Z
    CHECK_THROWS_AS(make_gaussian_wz_params(1.0, 1.0, 1.5, 1.25), std::invalid_argument);
}
