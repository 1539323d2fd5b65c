#include "fibgcd/fib.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cstdint>

using namespace fibgcd;

TEST_CASE("fib_pair_mod base cases and known values") {
    const ModPair p0 = fib_pair_mod(0, 7);
    CHECK(p0.f_n == 0);
    CHECK(p0.f_n1 == 1);

    const ModPair p10 = fib_pair_mod(10, 1000);
    CHECK(p10.f_n == 55);   // F_10
    CHECK(p10.f_n1 == 89);  // F_11

    const ModPair p12 = fib_pair_mod(12, 12);
    CHECK(p12.f_n == 0);  // F_12 = 144
    CHECK(p12.f_n1 == 5); // F_13 = 233

    CHECK(fib_mod(1, 5) == 1);
    CHECK(fib_mod(15, 10) == 0);  // F_15 = 610
    CHECK(fib_mod(30, 30) == 20); // F_30 = 832040
}

TEST_CASE("fib_pair_mod rejects bad moduli") {
    CHECK_THROWS_AS(fib_pair_mod(10, 0), std::invalid_argument);
    CHECK_THROWS_AS(fib_pair_mod(10, std::uint64_t{1} << 63), std::invalid_argument);
    // largest accepted modulus
    CHECK_NOTHROW(fib_pair_mod(10, (std::uint64_t{1} << 63) - 1));
}

TEST_CASE("fib_pair_mod with modulus 1 collapses to zero") {
    for (std::uint64_t n : {std::uint64_t{0}, std::uint64_t{1}, std::uint64_t{97}}) {
        const ModPair p = fib_pair_mod(n, 1);
        CHECK(p.f_n == 0);
        CHECK(p.f_n1 == 0);
    }
}

TEST_CASE("fib_exact_small values and overflow boundary") {
    CHECK(fib_exact_small(0) == 0);
    CHECK(fib_exact_small(1) == 1);
    CHECK(fib_exact_small(2) == 1);
    CHECK(fib_exact_small(12) == 144);
    CHECK(fib_exact_small(92) == std::uint64_t{7540113804746346429});
    CHECK_THROWS_AS(fib_exact_small(93), std::overflow_error);
}

TEST_CASE("fib_mod agrees with the exact iterative oracle") {
    for (std::uint64_t m = 2; m <= 1000; m += (m < 50 ? 1 : 7))
        for (std::uint64_t n = 0; n <= 90; ++n)
            REQUIRE(fib_mod(n, m) == fib_exact_small(n) % m);
}

TEST_CASE("fib_mod satisfies the Fibonacci recurrence mod m") {
    for (std::uint64_t m : {2ull, 3ull, 7ull, 10ull, 97ull, 1000ull, 99991ull}) {
        for (std::uint64_t n = 0; n + 2 <= 10'000; ++n)
            REQUIRE(fib_mod(n + 2, m) == (fib_mod(n + 1, m) + fib_mod(n, m)) % m);
    }
}

TEST_CASE("fib_pair_mod second component matches fib_mod of n+1") {
    for (std::uint64_t n : {0ull, 1ull, 2ull, 17ull, 1024ull, 999999ull})
        for (std::uint64_t m : {2ull, 9ull, 1000ull, 123457ull})
            REQUIRE(fib_pair_mod(n, m).f_n1 == fib_mod(n + 1, m));
}

TEST_CASE("fib_pair_mod handles huge indices without overflow") {
    // pairwise consistency at the top of the index range
    const std::uint64_t n = std::uint64_t{1} << 63;
    const std::uint64_t m = (std::uint64_t{1} << 63) - 25;
    const ModPair p = fib_pair_mod(n, m);
    const ModPair q = fib_pair_mod(n - 1, m);
    CHECK(p.f_n1 == (q.f_n + p.f_n) % m); // F_{n+1} = F_{n-1} + F_n
    CHECK(q.f_n1 == p.f_n);
}
