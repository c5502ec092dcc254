#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <set>

#include "gossipdyn/rng.hpp"

using namespace gossipdyn;

TEST_SUITE("rng") {

TEST_CASE("unit values live in [0, 1)") {
    CHECK(rng::unit(0) == 0.0);
    CHECK(rng::unit(~std::uint64_t{0}) < 1.0);
    rng::SplitMix64 gen(42);
    for (int i = 0; i < 10000; ++i) {
        const double u = gen.next_unit();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("cell uniforms are pure functions of (seed, tag, edge, time)") {
    const double a = rng::cell_unit(7, rng::kStep, 3, -12);
    const double b = rng::cell_unit(7, rng::kStep, 3, -12);
    CHECK(a == b);
    CHECK(rng::cell_unit(7, rng::kStep, 3, -12) != rng::cell_unit(7, rng::kStep, 3, -11));
    CHECK(rng::cell_unit(7, rng::kStep, 3, -12) != rng::cell_unit(7, rng::kInit, 3, -12));
    CHECK(rng::cell_unit(7, rng::kStep, 3, -12) != rng::cell_unit(8, rng::kStep, 3, -12));
}

TEST_CASE("sequential stream is deterministic and roughly uniform") {
    rng::SplitMix64 a(123), b(123);
    for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());

    rng::SplitMix64 gen(9);
    const int m = 200000;
    double sum = 0.0;
    for (int i = 0; i < m; ++i) sum += gen.next_unit();
    const double mean = sum / m;
    // mean of U(0,1): sigma = 1/sqrt(12 m)
    CHECK(std::fabs(mean - 0.5) < 4.0 / std::sqrt(12.0 * m));
}

TEST_CASE("below(n) is unbiased enough and in range") {
    rng::SplitMix64 gen(5);
    const std::uint64_t n = 7;
    std::uint64_t counts[7] = {0};
    const int m = 140000;
    for (int i = 0; i < m; ++i) {
        const std::uint64_t v = gen.below(n);
        REQUIRE(v < n);
        ++counts[v];
    }
    const double expect = static_cast<double>(m) / static_cast<double>(n);
    for (std::uint64_t v = 0; v < n; ++v) {
        CHECK(std::fabs(counts[v] - expect) < 4.0 * std::sqrt(expect));
    }
}

TEST_CASE("derived seeds do not collide on small inputs") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t seed = 0; seed < 32; ++seed) {
        for (std::uint64_t tag = 0; tag < 8; ++tag) {
            seen.insert(rng::derive(seed, tag));
        }
    }
    CHECK(seen.size() == 32 * 8);
}

}  // TEST_SUITE
