#pragma once

// Rank of appearance z(n): the least k >= 1 with n | F_k. Built per prime
// from the divisor structure of p - (p/5), lifted to prime powers through
// the valuation e(p) = nu_p(F_{z(p)}), and assembled for composites as an
// lcm over prime-power components.

#include "fibgcd/arith.hpp"
#include "fibgcd/fib.hpp"

#include <algorithm>
#include <exception>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace fibgcd {

struct RankRecord {
    std::uint64_t p; // prime
    std::uint64_t z; // rank of appearance of p
    std::uint32_t e; // nu_p(F_z), >= 1
};

/// Immutable per-prime store: one record for every prime <= limit, ascending.
struct RankCache {
    std::uint64_t limit = 0;
    std::vector<RankRecord> records;

    const RankRecord* find(std::uint64_t p) const {
        auto it = std::lower_bound(records.begin(), records.end(), p,
                                   [](const RankRecord& r, std::uint64_t v) { return r.p < v; });
        if (it == records.end() || it->p != p)
            return nullptr;
        return &*it;
    }

    const RankRecord& at(std::uint64_t p) const {
        const RankRecord* r = find(p);
        if (r == nullptr)
            throw std::runtime_error("RankCache: prime " + std::to_string(p) + " not cached");
        return *r;
    }
};

/// z(p). Starts from M = p - (p/5), a known multiple of z(p), and strips
/// prime factors of M while divisibility F_{M/q} = 0 (mod p) survives.
inline std::uint64_t prime_rank(std::uint64_t p, const PrimeTable& table) {
    if (p == 5)
        return 5;
    std::uint64_t m = legendre5(p) == 1 ? p - 1 : p + 1;
    for (const auto& f : factorize(m, table).factors)
        for (std::uint32_t i = 0; i < f.exponent; ++i) {
            if (fib_mod(m / f.prime, p) != 0)
                break;
            m /= f.prime;
        }
    return m;
}

/// e(p) = nu_p(F_{z(p)}), probed through moduli p^j below 2^63. A valuation
/// that still divides at the largest testable power cannot be pinned down and
/// is reported as an error (never observed; e(p) = 1 for every known prime).
inline std::uint32_t rank_valuation(std::uint64_t p, std::uint64_t z_p) {
    using u128 = unsigned __int128;
    std::uint32_t e = 1;
    u128 pw = u128(p) * p;
    while (pw < (u128(1) << 63)) {
        if (fib_mod(z_p, static_cast<std::uint64_t>(pw)) != 0)
            return e;
        ++e;
        pw *= p;
    }
    throw std::runtime_error("rank_valuation: cap reached, nu_" + std::to_string(p) +
                             "(F_z) >= " + std::to_string(e));
}

/// z(p^k). For odd p this is p^max(k - e(p), 0) * z(p): the valuation of
/// F_{m z(p)} grows by exactly nu_p(m), so each extra power of p past e(p)
/// costs one factor of p in the index. At p = 2 that growth law breaks
/// (F_3 = 2 but F_6 = 8, a jump of two), so the 2-adic ranks are lifted one
/// exponent at a time with an explicit divisibility check: z(2^j) stays put
/// when 2^j | F_{z(2^{j-1})} and doubles otherwise.
inline std::uint64_t prime_power_rank(std::uint64_t p, std::uint32_t k, const RankRecord& rec) {
    if (k == 0)
        throw std::invalid_argument("prime_power_rank: exponent must be >= 1");
    if (p != 2) {
        unsigned __int128 r = rec.z;
        for (std::uint32_t i = rec.e; i < k; ++i) {
            r *= p;
            if (r > ~std::uint64_t{0})
                throw std::overflow_error("prime_power_rank: z(p^k) exceeds 64 bits");
        }
        return static_cast<std::uint64_t>(r);
    }
    std::uint64_t z = rec.z;
    for (std::uint32_t j = 2; j <= k; ++j) {
        if (j > 62)
            throw std::overflow_error("prime_power_rank: modulus 2^k exceeds 2^63");
        const std::uint64_t pw = std::uint64_t{1} << j;
        if (fib_mod(z, pw) != 0)
            z *= 2; // z < 2 * 2^62 here, no wraparound
    }
    return z;
}

/// z(n) as the lcm of z over the prime-power components of n.
inline std::uint64_t rank_of(std::uint64_t n, const RankCache& cache, const PrimeTable& table) {
    if (n == 0)
        throw std::invalid_argument("rank_of: n must be >= 1");
    std::uint64_t r = 1;
    for (const auto& f : factorize(n, table).factors)
        r = lcm(r, prime_power_rank(f.prime, f.exponent, cache.at(f.prime)));
    return r;
}

/// lcm(n, z(n)): the single index at which membership of n must be witnessed.
inline std::uint64_t witness_index(std::uint64_t n, const RankCache& cache,
                                   const PrimeTable& table) {
    return lcm(n, rank_of(n, cache, table));
}

/// gcd(n, F_n), computed against F_n mod n so n never has to be exact.
inline std::uint64_t fib_gcd(std::uint64_t n) {
    if (n == 0)
        throw std::invalid_argument("fib_gcd: n must be >= 1");
    return std::gcd(n, fib_mod(n, n));
}

/// Computes records for every prime in the table. Workers own disjoint index
/// ranges of the output, so the result is identical for any thread count.
inline RankCache build_rank_cache(const PrimeTable& table, unsigned threads = 1) {
    RankCache cache;
    cache.limit = table.limit;
    cache.records.resize(table.primes.size());
    if (threads < 1)
        threads = 1;

    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const std::uint64_t p = table.primes[i];
            const std::uint64_t z = prime_rank(p, table);
            cache.records[i] = {p, z, rank_valuation(p, z)};
        }
    };

    const std::size_t n = table.primes.size();
    if (threads == 1 || n < 2048) {
        work(0, n);
        return cache;
    }

    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    const std::size_t chunk = (n + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        const std::size_t begin = std::min(n, t * chunk);
        const std::size_t end = std::min(n, begin + chunk);
        pool.emplace_back([&, t, begin, end] {
            try {
                work(begin, end);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool)
        th.join();
    for (const auto& err : errors)
        if (err)
            std::rethrow_exception(err);
    return cache;
}

/// CSV persistence: header "p,z,e", one row per prime, ascending.
inline void save_rank_cache(const RankCache& cache, std::ostream& out) {
    out << "p,z,e\n";
    for (const auto& r : cache.records)
        out << r.p << ',' << r.z << ',' << r.e << '\n';
    if (!out)
        throw std::runtime_error("save_rank_cache: write failed");
}

inline RankCache load_rank_cache(std::istream& in) {
    RankCache cache;
    std::string line;
    if (!std::getline(in, line) || line != "p,z,e")
        throw std::runtime_error("load_rank_cache: missing \"p,z,e\" header");
    std::uint64_t prev = 0;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        RankRecord rec{};
        char c1 = 0, c2 = 0;
        std::istringstream row(line);
        if (!(row >> rec.p >> c1 >> rec.z >> c2 >> rec.e) || c1 != ',' || c2 != ',')
            throw std::runtime_error("load_rank_cache: malformed row: " + line);
        if (rec.p <= prev)
            throw std::runtime_error("load_rank_cache: rows not ascending at p=" +
                                     std::to_string(rec.p));
        prev = rec.p;
        cache.records.push_back(rec);
    }
    cache.limit = prev;
    return cache;
}

/// Re-attach a loaded cache to the table it must cover. The file format does
/// not carry the sieve limit, so completeness is checked record-by-record.
inline void rebind_cache(RankCache& cache, const PrimeTable& table) {
    if (cache.records.size() != table.primes.size())
        throw std::runtime_error("rebind_cache: cache has " +
                                 std::to_string(cache.records.size()) + " records, table has " +
                                 std::to_string(table.primes.size()) + " primes");
    for (std::size_t i = 0; i < table.primes.size(); ++i)
        if (cache.records[i].p != table.primes[i])
            throw std::runtime_error("rebind_cache: record mismatch at index " + std::to_string(i));
    cache.limit = table.limit;
}

} // namespace fibgcd
