#include <doctest.h>

#include "wavecount/rng.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

using namespace wavecount;

TEST_SUITE_BEGIN("rng");

TEST_CASE("philox 4x32-10 known-answer vectors") {
    // Reference vectors of the published Philox counter-based generator.
    const auto zero = philox4x32({0u, 0u, 0u, 0u}, {0u, 0u});
    CHECK(zero[0] == 0x6627e8d5u);
    CHECK(zero[1] == 0xe169c58du);
    CHECK(zero[2] == 0xbc57ac4cu);
    CHECK(zero[3] == 0x9b00dbd8u);

    const auto ones = philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                 {0xffffffffu, 0xffffffffu});
    CHECK(ones[0] == 0x408f276du);
    CHECK(ones[1] == 0x41c83b0eu);
    CHECK(ones[2] == 0xa20bc7c6u);
    CHECK(ones[3] == 0x6d5451fdu);

    const auto pi = philox4x32({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                               {0xa4093822u, 0x299f31d0u});
    CHECK(pi[0] == 0xd16cfe09u);
    CHECK(pi[1] == 0x94fdccebu);
    CHECK(pi[2] == 0x5001e420u);
    CHECK(pi[3] == 0x24126ea1u);
}

TEST_CASE("streams are reproducible and distinct") {
    RandomStream a(42u, 3u, 17u);
    RandomStream b(42u, 3u, 17u);
    for (int i = 0; i < 64; ++i) CHECK(a.next_u32() == b.next_u32());

    RandomStream c(42u, 3u, 18u);
    RandomStream d(42u, 4u, 17u);
    RandomStream e(43u, 3u, 17u);
    int same_sample = 0, same_stream = 0, same_seed = 0;
    RandomStream base(42u, 3u, 17u);
    for (int i = 0; i < 64; ++i) {
        const std::uint32_t r = base.next_u32();
        same_sample += r == c.next_u32();
        same_stream += r == d.next_u32();
        same_seed += r == e.next_u32();
    }
    CHECK(same_sample <= 1);
    CHECK(same_stream <= 1);
    CHECK(same_seed <= 1);
}

TEST_CASE("uniform ranges") {
    RandomStream rs(7u, 0u, 0u);
    for (int i = 0; i < 10000; ++i) {
        const double u = rs.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        const double v = rs.uniform_pos();
        CHECK(v > 0.0);
        CHECK(v <= 1.0);
    }
}

TEST_CASE("normal and chi(3) sampling moments") {
    const std::size_t n = 200000;
    double sum = 0.0, sq = 0.0, chi_sum = 0.0, chi_sq = 0.0, mx_sum = 0.0, mx_sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        RandomStream rs(99u, 1u, i);
        const double z = rs.normal();
        sum += z;
        sq += z * z;
        const double c = rs.chi3();
        chi_sum += c;
        chi_sq += c * c;
        const double m = rs.maxwell_signed();
        mx_sum += m;
        mx_sq += m * m;
    }
    const double dn = static_cast<double>(n);
    CHECK(std::abs(sum / dn) < 4.0 / std::sqrt(dn));
    CHECK(std::abs(sq / dn - 1.0) < 4.0 * std::sqrt(2.0 / dn));

    // chi(3): mean 2 sqrt(2/pi), second moment 3
    const double chi_mean = 2.0 * std::sqrt(2.0 / M_PI);
    const double chi_sd = std::sqrt(3.0 - chi_mean * chi_mean);
    CHECK(std::abs(chi_sum / dn - chi_mean) < 4.0 * chi_sd / std::sqrt(dn));
    CHECK(std::abs(chi_sq / dn - 3.0) < 4.0 * std::sqrt(6.0 / dn));

    // signed maxwell: symmetric, second moment 3
    CHECK(std::abs(mx_sum / dn) < 4.0 * std::sqrt(3.0 / dn));
    CHECK(std::abs(mx_sq / dn - 3.0) < 4.0 * std::sqrt(6.0 / dn));
}

TEST_SUITE_END();
