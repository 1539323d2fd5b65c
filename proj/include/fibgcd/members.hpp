#pragma once

// Membership test and enumeration for the set of values gcd(n, F_n).
// A number n belongs to the set exactly when g(ell(n)) = n, so each
// candidate is settled by one rank computation and one modular Fibonacci
// evaluation at the witness index.

#include "fibgcd/rank.hpp"

#include <atomic>
#include <cstdint>
#include <ostream>
#include <thread>
#include <vector>

namespace fibgcd {

/// Full audit trail of one membership test.
struct MemberWitness {
    std::uint64_t n;
    std::uint64_t z_n;
    std::uint64_t ell_n;     // lcm(n, z_n)
    std::uint64_t g_of_ell;  // gcd(ell_n, F_{ell_n} mod ell_n)
    bool member;             // g_of_ell == n
};

inline MemberWitness is_member(std::uint64_t n, const RankCache& cache, const PrimeTable& table) {
    const std::uint64_t z = rank_of(n, cache, table);
    const std::uint64_t ell = lcm(n, z);
    const std::uint64_t g = fib_gcd(ell);
    return {n, z, ell, g, g == n};
}

struct Checkpoint {
    std::uint64_t x;
    std::uint64_t count;
    bool operator==(const Checkpoint&) const = default;
};

struct EnumerationResult {
    std::uint64_t limit = 0;
    std::vector<std::uint64_t> members;   // ascending, all <= limit
    std::vector<Checkpoint> checkpoints;  // running counts at sampled x
};

/// All members up to x, ascending, plus counts at every multiple of
/// checkpoint_step (and at x itself when x is not a multiple). Work is cut
/// into fixed chunks merged in index order, so the output is byte-identical
/// for every thread count.
inline EnumerationResult enumerate_members(std::uint64_t x, const RankCache& cache,
                                           const PrimeTable& table, unsigned threads = 1,
                                           std::uint64_t checkpoint_step = 10'000) {
    if (x == 0)
        throw std::invalid_argument("enumerate_members: x must be >= 1");
    if (x > 100'000'000)
        throw std::invalid_argument("enumerate_members: x capped at 10^8");
    if (x > cache.limit)
        throw std::invalid_argument("enumerate_members: cache limit below x");
    if (checkpoint_step == 0)
        throw std::invalid_argument("enumerate_members: checkpoint_step must be >= 1");
    if (threads < 1)
        threads = 1;

    constexpr std::uint64_t kChunk = 8192;
    const std::uint64_t nchunks = (x + kChunk - 1) / kChunk;
    std::vector<std::vector<std::uint64_t>> found(nchunks);

    auto scan_chunk = [&](std::uint64_t ci) {
        const std::uint64_t lo = ci * kChunk + 1;
        const std::uint64_t hi = std::min(x, lo + kChunk - 1);
        auto& out = found[ci];
        for (std::uint64_t n = lo; n <= hi; ++n)
            if (is_member(n, cache, table).member)
                out.push_back(n);
    };

    if (threads == 1 || nchunks < 2) {
        for (std::uint64_t ci = 0; ci < nchunks; ++ci)
            scan_chunk(ci);
    } else {
        std::atomic<std::uint64_t> next{0};
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(threads);
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back([&, t] {
                try {
                    for (std::uint64_t ci = next.fetch_add(1); ci < nchunks;
                         ci = next.fetch_add(1))
                        scan_chunk(ci);
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        for (auto& th : pool)
            th.join();
        for (const auto& err : errors)
            if (err)
                std::rethrow_exception(err);
    }

    EnumerationResult result;
    result.limit = x;
    for (auto& chunk : found)
        result.members.insert(result.members.end(), chunk.begin(), chunk.end());

    std::size_t idx = 0;
    for (std::uint64_t cx = checkpoint_step; cx <= x; cx += checkpoint_step) {
        while (idx < result.members.size() && result.members[idx] <= cx)
            ++idx;
        result.checkpoints.push_back({cx, idx});
    }
    if (x % checkpoint_step != 0)
        result.checkpoints.push_back({x, result.members.size()});
    return result;
}

enum class MemberFormat { bfile, csv };

/// b-file: "k a(k)" per line, 1-indexed; csv: header "k,a_k".
inline void write_members(const EnumerationResult& result, MemberFormat format,
                          std::ostream& out) {
    if (format == MemberFormat::csv)
        out << "k,a_k\n";
    std::uint64_t k = 0;
    for (std::uint64_t a : result.members) {
        ++k;
        if (format == MemberFormat::bfile)
            out << k << ' ' << a << '\n';
        else
            out << k << ',' << a << '\n';
    }
    if (!out)
        throw std::runtime_error("write_members: write failed");
}

/// Checkpoint counts as CSV with header "x,count".
inline void write_checkpoints(const EnumerationResult& result, std::ostream& out) {
    out << "x,count\n";
    for (const auto& cp : result.checkpoints)
        out << cp.x << ',' << cp.count << '\n';
    if (!out)
        throw std::runtime_error("write_checkpoints: write failed");
}

} // namespace fibgcd
