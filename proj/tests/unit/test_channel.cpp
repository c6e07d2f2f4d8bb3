#include <doctest.h>

#include <cmath>
#include <cstdint>

#include "starqcr/channel.hpp"
#include "starqcr/errors.hpp"

using namespace starqcr;

TEST_CASE("channel construction validates probabilities") {
    CHECK_NOTHROW(ChannelNoise(0.0, 0.0));
    CHECK_NOTHROW(ChannelNoise(1.0, 1.0));
    CHECK_THROWS_AS(ChannelNoise(1.2, 0.5), ConfigError);
    CHECK_THROWS_AS(ChannelNoise(-0.1, 0.5), ConfigError);
    CHECK_THROWS_AS(ChannelNoise(0.5, 1.0001), ConfigError);
    CHECK_THROWS_AS(ChannelNoise(0.5, -1.0), ConfigError);
    CHECK_THROWS_AS(ChannelNoise(std::nan(""), 0.5), ConfigError);

    const ChannelNoise noise = ChannelNoise::from_error_rates(0.15, 0.1);
    CHECK(noise.survival() == doctest::Approx(0.85));
    CHECK(noise.flip_fidelity() == doctest::Approx(0.9));
    CHECK(noise.loss() == doctest::Approx(0.15));
    CHECK(noise.flip() == doctest::Approx(0.1));
    CHECK_FALSE(noise.noiseless());
    CHECK(ChannelNoise().noiseless());
}

TEST_CASE("transmission distribution gives the three mixture weights") {
    const auto ideal = transmission_distribution(ChannelNoise(1.0, 1.0));
    CHECK(ideal.p_lost == 0.0);
    CHECK(ideal.p_flip == 0.0);
    CHECK(ideal.p_ok == 1.0);

    const auto erased = transmission_distribution(ChannelNoise(0.0, 0.5));
    CHECK(erased.p_lost == 1.0);
    CHECK(erased.p_flip == 0.0);
    CHECK(erased.p_ok == 0.0);

    const auto lossy = transmission_distribution(ChannelNoise(0.85, 1.0));
    CHECK(lossy.p_lost == doctest::Approx(0.15).epsilon(1e-15));
    CHECK(lossy.p_flip == 0.0);
    CHECK(lossy.p_ok == doctest::Approx(0.85).epsilon(1e-15));
}

TEST_CASE("transmission distribution is normalized for random parameters") {
    RandomStream rng(100);
    for (int i = 0; i < 1000; ++i) {
        const ChannelNoise noise(rng.next_unit(), rng.next_unit());
        const auto dist = transmission_distribution(noise);
        CHECK(dist.p_lost >= 0.0);
        CHECK(dist.p_flip >= 0.0);
        CHECK(dist.p_ok >= 0.0);
        CHECK(std::abs(dist.p_lost + dist.p_flip + dist.p_ok - 1.0) <= 1e-15);
    }
}

TEST_CASE("degenerate channels sample deterministically") {
    RandomStream rng(8);
    for (int i = 0; i < 50; ++i) {
        CHECK(sample_transmission(ChannelNoise(1.0, 1.0), rng) ==
              TransmissionOutcome::DeliveredClean);
        CHECK(sample_transmission(ChannelNoise(0.0, 1.0), rng) == TransmissionOutcome::Lost);
        CHECK(sample_transmission(ChannelNoise(1.0, 0.0), rng) ==
              TransmissionOutcome::DeliveredFlipped);
    }
}

TEST_CASE("every transmission consumes exactly two draws") {
    const ChannelNoise noises[] = {ChannelNoise(0.0, 1.0), ChannelNoise(1.0, 1.0),
                                   ChannelNoise(0.5, 0.5)};
    for (const auto& noise : noises) {
        RandomStream sampled(21);
        RandomStream skipped(21);
        sample_transmission(noise, sampled);
        skipped.next_unit();
        skipped.next_unit();
        CHECK(sampled.next_u64() == skipped.next_u64());
    }
}

TEST_CASE("sampled frequencies match the distribution at 100k draws") {
    const ChannelNoise cases[] = {ChannelNoise(0.85, 0.85), ChannelNoise(0.5, 0.9),
                                  ChannelNoise(0.97, 0.2), ChannelNoise(0.1, 0.6)};
    RandomStream rng(314159);
    const int n = 100000;
    for (const auto& noise : cases) {
        const auto dist = transmission_distribution(noise);
        int lost = 0, flipped = 0, ok = 0;
        for (int i = 0; i < n; ++i) {
            switch (sample_transmission(noise, rng)) {
                case TransmissionOutcome::Lost: ++lost; break;
                case TransmissionOutcome::DeliveredFlipped: ++flipped; break;
                case TransmissionOutcome::DeliveredClean: ++ok; break;
            }
        }
        const auto within = [n](int count, double p) {
            const double tolerance = 4.0 * std::sqrt(p * (1.0 - p) / n);
            return std::abs(static_cast<double>(count) / n - p) <= tolerance;
        };
        CHECK(within(lost, dist.p_lost));
        CHECK(within(flipped, dist.p_flip));
        CHECK(within(ok, dist.p_ok));
    }
}

TEST_CASE("established links normalize the error flag on loss") {
    RandomStream rng(5);
    const LinkEntanglement clean = establish_link(ChannelNoise(1.0, 1.0), rng);
    CHECK(clean.present);
    CHECK_FALSE(clean.x_error);

    const LinkEntanglement lost = establish_link(ChannelNoise(0.0, 0.0), rng);
    CHECK_FALSE(lost.present);
    CHECK_FALSE(lost.x_error);

    const LinkEntanglement flipped = establish_link(ChannelNoise(1.0, 0.0), rng);
    CHECK(flipped.present);
    CHECK(flipped.x_error);
}

TEST_CASE("swap combines presence by AND and errors by XOR") {
    const LinkEntanglement states[] = {LinkEntanglement::lost(),
                                       LinkEntanglement::delivered(false),
                                       LinkEntanglement::delivered(true)};
    for (const auto& a : states) {
        for (const auto& b : states) {
            const EndToEndPair pair = entanglement_swap(a, b);
            CHECK(pair.present == (a.present && b.present));
            const bool expected_error = pair.present && (a.x_error != b.x_error);
            CHECK(pair.x_error == expected_error);
            if (!pair.present) {
                CHECK_FALSE(pair.x_error);
            }

            // Commutativity.
            const EndToEndPair swapped = entanglement_swap(b, a);
            CHECK(pair == swapped);
        }
    }

    // The both-flipped case heralds a clean pair.
    const EndToEndPair both = entanglement_swap(LinkEntanglement::delivered(true),
                                                LinkEntanglement::delivered(true));
    CHECK(both.present);
    CHECK_FALSE(both.x_error);
}

TEST_CASE("three-link composition is associative") {
    const LinkEntanglement states[] = {LinkEntanglement::lost(),
                                       LinkEntanglement::delivered(false),
                                       LinkEntanglement::delivered(true)};
    const auto as_link = [](const EndToEndPair& pair) {
        return LinkEntanglement{pair.present, pair.x_error};
    };
    for (const auto& a : states) {
        for (const auto& b : states) {
            for (const auto& c : states) {
                const EndToEndPair left = entanglement_swap(as_link(entanglement_swap(a, b)), c);
                const EndToEndPair right = entanglement_swap(a, as_link(entanglement_swap(b, c)));
                CHECK(left == right);
            }
        }
    }
}

TEST_CASE("parity check classifies the three pair states") {
    CHECK(parity_check(EndToEndPair{true, false}) == ParityResult::Fulfilled);
    CHECK(parity_check(EndToEndPair{true, true}) == ParityResult::FailedParity);
    CHECK(parity_check(EndToEndPair{false, false}) == ParityResult::FailedAbsent);
}

TEST_CASE("two-link success probability follows the swap-success closed form") {
    RandomStream rng(77);
    for (int i = 0; i < 200; ++i) {
        const ChannelNoise one(rng.next_unit(), rng.next_unit());
        const ChannelNoise two(rng.next_unit(), rng.next_unit());
        const auto d1 = transmission_distribution(one);
        const auto d2 = transmission_distribution(two);

        // Independent joint enumeration over the 3x3 atom space.
        const double success = d1.p_ok * d2.p_ok + d1.p_flip * d2.p_flip;
        const double s1 = one.survival(), s2 = two.survival();
        const double f1 = one.flip_fidelity(), f2 = two.flip_fidelity();
        const double closed = s1 * s2 * (f1 * f2 + (1.0 - f1) * (1.0 - f2));
        CHECK(std::abs(success - closed) <= 1e-12);
    }
}
