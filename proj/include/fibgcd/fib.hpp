#pragma once

// Fibonacci numbers modulo m via fast doubling. Indexing follows
// F_0 = 0, F_1 = 1, F_{n+2} = F_{n+1} + F_n.

#include <bit>
#include <cstdint>
#include <stdexcept>

namespace fibgcd {

namespace detail {

using u128 = unsigned __int128;

// All moduli are < 2^63, so sums of two residues never wrap uint64_t
// and products fit in 128 bits.
inline std::uint64_t add_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    std::uint64_t s = a + b;
    return s >= m ? s - m : s;
}

inline std::uint64_t sub_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return a >= b ? a - b : a + (m - b);
}

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(u128(a) * b % m);
}

} // namespace detail

/// (F_n mod m, F_{n+1} mod m) for one modulus m.
struct ModPair {
    std::uint64_t f_n;
    std::uint64_t f_n1;
    std::uint64_t modulus;
};

/// Fast doubling: F_{2k} = F_k (2 F_{k+1} - F_k), F_{2k+1} = F_k^2 + F_{k+1}^2.
/// O(log n) multiplications. Requires 1 <= m < 2^63.
inline ModPair fib_pair_mod(std::uint64_t n, std::uint64_t m) {
    if (m == 0)
        throw std::invalid_argument("fib_pair_mod: modulus must be nonzero");
    if (m >= (std::uint64_t{1} << 63))
        throw std::invalid_argument("fib_pair_mod: modulus must be below 2^63");
    std::uint64_t a = 0;      // F_k
    std::uint64_t b = 1 % m;  // F_{k+1}
    if (n == 0)
        return {a, b, m};
    for (int i = std::bit_width(n) - 1; i >= 0; --i) {
        using namespace detail;
        std::uint64_t c = mul_mod(a, sub_mod(add_mod(b, b, m), a, m), m); // F_{2k}
        std::uint64_t d = add_mod(mul_mod(a, a, m), mul_mod(b, b, m), m); // F_{2k+1}
        if ((n >> i) & 1) {
            a = d;
            b = add_mod(c, d, m);
        } else {
            a = c;
            b = d;
        }
    }
    return {a, b, m};
}

/// F_n mod m.
inline std::uint64_t fib_mod(std::uint64_t n, std::uint64_t m) {
    return fib_pair_mod(n, m).f_n;
}

/// Exact F_n by iteration; F_92 is the largest Fibonacci number below 2^63.
inline std::uint64_t fib_exact_small(std::uint64_t n) {
    if (n > 92)
        throw std::overflow_error("fib_exact_small: F_n exceeds 63 bits for n > 92");
    std::uint64_t a = 0, b = 1;
    for (std::uint64_t i = 0; i < n; ++i) {
        std::uint64_t t = a + b;
        a = b;
        b = t;
    }
    return a;
}

} // namespace fibgcd
