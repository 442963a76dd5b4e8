#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "wzsup/dpc.hpp"
#include "wzsup/infotheory.hpp"

using namespace wzsup;
using Catch::Matchers::WithinAbs;

namespace {
const GroupAlphabet g2 = GroupAlphabet::bits(1);
}

TEST_CASE("encoding cancels the interference symbolically") {
    const auto c0 = Codebook::from_symbol_words(g2, {{0, 0, 0, 0}, {1, 0, 1, 0}});
    const std::vector<Sym> c1_word{0, 1, 1, 0};
    const std::vector<Sym> s{1, 1, 0, 0};

    // target = s - c1 = 1010, covered exactly by c0[1]: x = 0, cost 0.
    const auto enc = dpc_encode(s, c1_word, c0, 0.25);
    CHECK(enc.c0_index == 1);
    CHECK(enc.x == std::vector<Sym>{0, 0, 0, 0});
    CHECK(enc.cost == 0.0);
    CHECK_FALSE(enc.encoder_error);

    // Any z: y = x + s + z must equal c0 + c1 + z.
    SplitMix64 rng(3);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<Sym> z(4);
        for (auto& b : z) b = static_cast<Sym>(rng.next() & 1u);
        const auto y = add(g2, add(g2, enc.x, s), z);
        const auto direct = add(g2, add(g2, c0.word(enc.c0_index), c1_word), z);
        CHECK(y == direct);
    }
}

TEST_CASE("encoder cost accounting and strict threshold") {
    const auto c0 = Codebook::from_symbol_words(g2, {{0, 0, 0, 0}});
    const std::vector<Sym> c1_word{0, 0, 0, 0};
    const std::vector<Sym> s{1, 0, 0, 0};  // x = 0 - s = s, cost 1/4
    const auto enc = dpc_encode(s, c1_word, c0, 0.25);
    CHECK(enc.cost == 0.25);
    CHECK_FALSE(enc.encoder_error);  // equality is within budget
    CHECK(dpc_encode(s, c1_word, c0, 0.2499).encoder_error);
    CHECK_THROWS_AS(dpc_encode({1, 0}, c1_word, c0, 0.25), std::invalid_argument);
}

TEST_CASE("instance validation") {
    CHECK_THROWS_AS(make_dpc_instance(8, 0.5, 0.25, 0.2, 0.3, 0.3, 1, 2), std::invalid_argument);
    CHECK_THROWS_AS(make_dpc_instance(8, 0.1, 0.6, 0.2, 0.3, 0.3, 1, 2), std::invalid_argument);
    const auto inst = make_dpc_instance(8, 0.1, 0.25, 0.1875, 0.3, 0.2, 1, 2);
    CHECK(inst.c0.size() == codebook_size(8, 0.3, Codebook::kDefaultWordCap));
    CHECK(inst.c1.size() == codebook_size(8, 0.2, Codebook::kDefaultWordCap));
    CHECK_THROWS_AS(dpc_decode({0, 0, 0, 0, 0, 0, 0, 0}, inst.c0, inst.c1, 0.5), std::invalid_argument);
}

TEST_CASE("joint decoding matches the double-loop reference") {
    const auto inst = make_dpc_instance(8, 0.1, 0.25, 0.1875, 0.35, 0.3, 61, 62);
    SplitMix64 rng(606);
    for (int rep = 0; rep < 300; ++rep) {
        std::vector<Sym> y(8);
        for (auto& b : y) b = static_cast<Sym>(rng.next() & 1u);
        const auto got = dpc_decode(y, inst.c0, inst.c1, inst.p);
        std::size_t want_i = 0, want_j = 0;
        int want_d = 9;
        for (std::size_t i = 0; i < inst.c0.size(); ++i)
            for (std::size_t j = 0; j < inst.c1.size(); ++j) {
                const auto sum = add(g2, inst.c0.word(i), inst.c1.word(j));
                const int d = detail::hamming(y, sum);
                if (d < want_d) {
                    want_d = d;
                    want_i = i;
                    want_j = j;
                }
            }
        CHECK(got.i_hat == want_i);
        CHECK(got.j_hat == want_j);
    }
}

TEST_CASE("trial mechanics") {
    const auto inst = make_dpc_instance(10, 0.1, 0.25, 0.1875, 0.3, 0.15, 71, 72);
    SECTION("deterministic in the trial seed") {
        const auto a = simulate_dpc_trial(inst, 9001);
        const auto b = simulate_dpc_trial(inst, 9001);
        CHECK(a.cost == b.cost);
        CHECK(a.encoder_error == b.encoder_error);
        CHECK(a.message_error == b.message_error);
        CHECK(a.pair_error == b.pair_error);
    }
    SECTION("draw order: all of s, then the message, then all of z") {
        const std::uint64_t seed = 555;
        SplitMix64 rng(seed);
        std::vector<Sym> s(10), z(10);
        for (auto& b : s) b = static_cast<Sym>(rng.next() & 1u);
        const std::size_t j = rng.next_below(inst.c1.size());
        const SymbolSampler sample(SymbolDistribution::bernoulli(inst.p));
        for (auto& b : z) b = sample(rng);

        const auto enc = dpc_encode(s, inst.c1.word(j), inst.c0, inst.w);
        const auto rec = simulate_dpc_trial(inst, seed);
        CHECK(rec.cost == enc.cost);
        CHECK(rec.encoder_error == enc.encoder_error);
        const auto y = add(g2, add(g2, enc.x, s), z);
        const auto dec = dpc_decode(y, inst.c0, inst.c1, inst.p);
        CHECK(rec.message_error == (dec.j_hat != j));
        CHECK(rec.pair_error == (dec.i_hat != enc.c0_index || dec.j_hat != j));
    }
    SECTION("the channel identity holds on every trial") {
        for (std::uint64_t k = 0; k < 500; ++k) CHECK(simulate_dpc_trial(inst, k).channel_identity);
    }
    SECTION("a message error implies a pair error") {
        for (std::uint64_t k = 0; k < 500; ++k) {
            const auto rec = simulate_dpc_trial(inst, k);
            if (rec.message_error) CHECK(rec.pair_error);
        }
    }
}

TEST_CASE("quantization of uniform interference costs about one half minus the covering gain") {
    // With s uniform, s - c1 is uniform, and the best cover of a uniform
    // target by M0 random words has expected normalized weight below 1/2 but
    // approaching it as M0 stays polynomial in n; at r0 = 0 (a single word)
    // the mean cost is exactly 1/2.
    const auto single = make_dpc_instance(12, 0.1, 0.5, 0.1875, 0.0, 0.1, 81, 82);
    REQUIRE(single.c0.size() == 1);
    double mean = 0.0;
    const std::size_t trials = 20000;
    for (std::size_t k = 0; k < trials; ++k) mean += simulate_dpc_trial(single, derive_seed(5, k)).cost;
    mean /= trials;
    CHECK_THAT(mean, WithinAbs(0.5, 3.0 * 0.5 / std::sqrt(12.0 * trials) + 0.01));

    // A real first-stage book pulls the mean strictly below 1/2.
    const auto covered = make_dpc_instance(12, 0.1, 0.5, 0.1875, 0.4, 0.1, 81, 82);
    double mean2 = 0.0;
    for (std::size_t k = 0; k < trials; ++k) mean2 += simulate_dpc_trial(covered, derive_seed(5, k)).cost;
    mean2 /= trials;
    CHECK(mean2 < 0.45);
}

TEST_CASE("error rates sit near the exact pairwise sweep on a small instance") {
    // Small enough to enumerate every (s, j, z): n = 5, so 32 * M1 * 32
    // combinations; compares Monte Carlo rates against the full average.
    const auto inst = make_dpc_instance(5, 0.1, 0.5, 0.25, 0.3, 0.25, 91, 92);
    const std::size_t m1 = inst.c1.size();
    double msg_err = 0.0, pair_err = 0.0;
    const auto p_law = SymbolDistribution::bernoulli(inst.p);
    for (unsigned si = 0; si < 32; ++si) {
        std::vector<Sym> s(5);
        for (int t = 0; t < 5; ++t) s[static_cast<std::size_t>(t)] = static_cast<Sym>((si >> t) & 1u);
        for (std::size_t j = 0; j < m1; ++j) {
            const auto enc = dpc_encode(s, inst.c1.word(j), inst.c0, inst.w);
            for (unsigned zi = 0; zi < 32; ++zi) {
                std::vector<Sym> z(5);
                double w = 1.0;
                for (int t = 0; t < 5; ++t) {
                    z[static_cast<std::size_t>(t)] = static_cast<Sym>((zi >> t) & 1u);
                    w *= p_law[z[static_cast<std::size_t>(t)]];
                }
                const auto y = add(g2, add(g2, enc.x, s), z);
                const auto dec = dpc_decode(y, inst.c0, inst.c1, inst.p);
                const double scale = w / (32.0 * static_cast<double>(m1));
                if (dec.j_hat != j) msg_err += scale;
                if (dec.i_hat != enc.c0_index || dec.j_hat != j) pair_err += scale;
            }
        }
    }
    const std::size_t trials = 100000;
    double mc_msg = 0.0, mc_pair = 0.0;
    for (std::size_t k = 0; k < trials; ++k) {
        const auto rec = simulate_dpc_trial(inst, derive_seed(17, k));
        mc_msg += rec.message_error;
        mc_pair += rec.pair_error;
    }
    mc_msg /= trials;
    mc_pair /= trials;
    const auto sigma = [&](double prob) { return std::sqrt(prob * (1.0 - prob) / trials); };
    CHECK_THAT(mc_msg, WithinAbs(msg_err, 3.0 * sigma(msg_err) + 1e-9));
    CHECK_THAT(mc_pair, WithinAbs(pair_err, 3.0 * sigma(pair_err) + 1e-9));
}

TEST_CASE("corner parameters line up with the instance laws") {
    const auto params = infotheory::dpc_binary_params(0.1, 0.25);
    const auto inst = make_dpc_instance(8, 0.1, 0.25, params.q_star, 0.3, 0.2, 1, 2);
    // The effective test channel crossover seen by the decoder is p * q = W.
    CHECK_THAT(infotheory::binary_convolve(inst.p, inst.q), WithinAbs(0.25, 1e-15));
}
