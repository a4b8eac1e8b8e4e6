#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "torsion/parallel.hpp"
#include "torsion/random.hpp"

using torsion::RandomStream;

TEST_CASE("philox4x32-10 known-answer vectors")
{
    // Reference vectors published with the Random123 library.
    using A4 = std::array<std::uint32_t, 4>;
    using A2 = std::array<std::uint32_t, 2>;
    CHECK(torsion::philox4x32(A4{0, 0, 0, 0}, A2{0, 0}) ==
          A4{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
    CHECK(torsion::philox4x32(A4{0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                              A2{0xffffffffu, 0xffffffffu}) ==
          A4{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
    CHECK(torsion::philox4x32(A4{0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                              A2{0xa4093822u, 0x299f31d0u}) ==
          A4{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("streams are pure functions of (seed, id)")
{
    RandomStream a(7, 3), b(7, 3), c(8, 3), d(7, 4);
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    CHECK(x != c.next_u64());
    CHECK(x != d.next_u64());

    const RandomStream root(11);
    RandomStream s1 = root.substream(5), s2 = root.substream(5), s3 = root.substream(6);
    const double u = s1.uniform();
    CHECK(u == s2.uniform());
    CHECK(u != s3.uniform());
}

TEST_CASE("uniform and normal moments")
{
    RandomStream rng(1);
    const int count = 200000;
    double s = 0, s2 = 0, g = 0, g2 = 0;
    for (int i = 0; i < count; ++i) {
        const double u = rng.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        s += u;
        s2 += u * u;
        const double z = rng.normal();
        g += z;
        g2 += z * z;
    }
    // Five standard errors of each sample moment.
    CHECK(std::abs(s / count - 0.5) < 5 * std::sqrt(1.0 / 12 / count));
    CHECK(std::abs(s2 / count - 1.0 / 3) < 5 * std::sqrt(4.0 / 45 / count));
    CHECK(std::abs(g / count) < 5 / std::sqrt(double(count)));
    CHECK(std::abs(g2 / count - 1.0) < 5 * std::sqrt(2.0 / count));
}

TEST_CASE("unit vectors are unit length and isotropic")
{
    for (int n : {2, 3, 5}) {
        RandomStream rng(2, n);
        std::vector<double> v(n), mean(n, 0.0);
        const int count = 50000;
        double second = 0.0;
        for (int i = 0; i < count; ++i) {
            rng.unit_vector(v);
            double norm = 0;
            for (int j = 0; j < n; ++j) {
                norm += v[j] * v[j];
                mean[j] += v[j];
            }
            REQUIRE(std::abs(norm - 1.0) < 1e-12);
            second += v[0] * v[0];
        }
        for (double m : mean)
            CHECK(std::abs(m / count) < 5 / std::sqrt(double(count) * n));
        // E v_1^2 = 1/n.
        CHECK(std::abs(second / count - 1.0 / n) < 0.01);
    }
}

TEST_CASE("below is unbiased over a small range")
{
    RandomStream rng(3);
    std::vector<int> counts(7, 0);
    const int total = 70000;
    for (int i = 0; i < total; ++i)
        counts[rng.below(7)]++;
    for (int c : counts)
        CHECK(std::abs(c - total / 7) < 5 * std::sqrt(total / 7.0));
}

TEST_CASE("parallel_for covers every index once for any worker count")
{
    for (unsigned workers : {1u, 2u, 3u, 8u, 64u}) {
        std::vector<int> hits(1000, 0);
        torsion::parallel_for(hits.size(), workers, [&](std::size_t b, std::size_t e) {
            for (std::size_t i = b; i < e; ++i)
                hits[i]++;
        });
        for (int h : hits)
            CHECK(h == 1);
    }
    CHECK_THROWS_AS(torsion::parallel_for(10, 2,
                                          [](std::size_t, std::size_t) {
                                              throw std::runtime_error("boom");
                                          }),
                    std::runtime_error);
}
