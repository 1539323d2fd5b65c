#include "fibgcd/members.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cstdint>
#include <set>
#include <sstream>
#include <vector>

using namespace fibgcd;

namespace {

const PrimeTable& table20k() {
    static const PrimeTable t = sieve_primes(20'000);
    return t;
}

const RankCache& cache20k() {
    static const RankCache c = build_rank_cache(table20k());
    return c;
}

const std::vector<std::uint64_t> kFirstMembers = {1,  2,  5,  7,  10, 12, 13, 17,
                                                  24, 25, 26, 29, 34, 35, 36};

// brute force: collect gcd(m, F_m mod m) for every m <= 2x^2 and keep [1, x]
std::vector<std::uint64_t> brute_members(std::uint64_t x) {
    std::set<std::uint64_t> values;
    for (std::uint64_t m = 1; m <= 2 * x * x; ++m) {
        const std::uint64_t v = fib_gcd(m);
        if (v <= x)
            values.insert(v);
    }
    return {values.begin(), values.end()};
}

} // namespace

TEST_CASE("is_member witnesses") {
    const MemberWitness w1 = is_member(1, cache20k(), table20k());
    CHECK(w1.member);
    CHECK(w1.z_n == 1);
    CHECK(w1.ell_n == 1);
    CHECK(w1.g_of_ell == 1);

    const MemberWitness w3 = is_member(3, cache20k(), table20k());
    CHECK_FALSE(w3.member);
    CHECK(w3.z_n == 4);
    CHECK(w3.ell_n == 12);
    CHECK(w3.g_of_ell == 12);

    const MemberWitness w10 = is_member(10, cache20k(), table20k());
    CHECK(w10.member);
    CHECK(w10.ell_n == 30);
    CHECK(w10.g_of_ell == 10);
}

TEST_CASE("enumerate_members reproduces the leading members") {
    const EnumerationResult r = enumerate_members(36, cache20k(), table20k(), 1, 10);
    CHECK(r.members == kFirstMembers);
    CHECK(r.limit == 36);

    const std::vector<Checkpoint> expected = {{10, 5}, {20, 8}, {30, 12}, {36, 15}};
    CHECK(r.checkpoints == expected);
}

TEST_CASE("enumerate_members trivial and error cases") {
    const EnumerationResult r1 = enumerate_members(1, cache20k(), table20k());
    CHECK(r1.members == std::vector<std::uint64_t>{1});
    REQUIRE(r1.checkpoints.size() == 1);
    CHECK(r1.checkpoints[0] == Checkpoint{1, 1});

    CHECK_THROWS_AS(enumerate_members(0, cache20k(), table20k()), std::invalid_argument);
    CHECK_THROWS_AS(enumerate_members(30'000, cache20k(), table20k()), std::invalid_argument);
    CHECK_THROWS_AS(enumerate_members(36, cache20k(), table20k(), 1, 0), std::invalid_argument);
}

TEST_CASE("enumeration equals the brute-force image") {
    CHECK(enumerate_members(100, cache20k(), table20k()).members == brute_members(100));
}

TEST_CASE("enumeration equals the brute-force image at x = 300") {
    CHECK(enumerate_members(300, cache20k(), table20k(), 2).members == brute_members(300));
}

TEST_CASE("every computed gcd value is itself a member") {
    for (std::uint64_t m = 1; m <= 10'000; ++m) {
        const std::uint64_t v = fib_gcd(m);
        REQUIRE(is_member(v, cache20k(), table20k()).member);
    }
}

TEST_CASE("member witnesses are idempotent") {
    const EnumerationResult r = enumerate_members(2000, cache20k(), table20k());
    for (std::uint64_t n : r.members) {
        const std::uint64_t ell = witness_index(n, cache20k(), table20k());
        REQUIRE(fib_gcd(ell) == n);
    }
}

TEST_CASE("enumeration is deterministic across thread counts") {
    const EnumerationResult a = enumerate_members(20'000, cache20k(), table20k(), 1);
    const EnumerationResult b = enumerate_members(20'000, cache20k(), table20k(), 8);
    REQUIRE(a.members == b.members);
    REQUIRE(a.checkpoints == b.checkpoints);

    std::ostringstream sa, sb;
    write_members(a, MemberFormat::bfile, sa);
    write_members(b, MemberFormat::bfile, sb);
    REQUIRE(sa.str() == sb.str());
}

TEST_CASE("write_members formats") {
    EnumerationResult r;
    r.limit = 36;
    r.members = kFirstMembers;

    std::ostringstream bf;
    write_members(r, MemberFormat::bfile, bf);
    std::istringstream lines(bf.str());
    std::vector<std::string> row;
    for (std::string line; std::getline(lines, line);)
        row.push_back(line);
    REQUIRE(row.size() == 15);
    CHECK(row[0] == "1 1");
    CHECK(row[3] == "4 7");
    CHECK(row[14] == "15 36");

    std::ostringstream csv;
    write_members(r, MemberFormat::csv, csv);
    CHECK(csv.str().rfind("k,a_k\n1,1\n", 0) == 0);
}

TEST_CASE("write_checkpoints format") {
    EnumerationResult r;
    r.checkpoints = {{10, 5}, {20, 8}};
    std::ostringstream out;
    write_checkpoints(r, out);
    CHECK(out.str() == "x,count\n10,5\n20,8\n");
}
