#pragma once

// Integer utilities shared by the whole toolkit: prime sieve, trial-division
// factorization, Legendre symbol (p/5), p-adic valuation, Euler phi, checked
// lcm, and the integral logarithm.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace fibgcd {

/// All primes up to `limit`, ascending.
struct PrimeTable {
    std::uint64_t limit = 0;
    std::vector<std::uint64_t> primes;
};

/// Sieve of Eratosthenes over an odd-only bitmap.
inline PrimeTable sieve_primes(std::uint64_t limit) {
    if (limit < 2)
        throw std::invalid_argument("sieve_primes: limit must be >= 2");
    if (limit > 1'000'000'000)
        throw std::invalid_argument("sieve_primes: limit capped at 10^9");
    PrimeTable table;
    table.limit = limit;
    table.primes.push_back(2);
    if (limit < 3)
        return table;

    // bit i stands for the odd number 2i+1; index 0 (the number 1) stays unused
    const std::uint64_t half = (limit - 1) / 2;
    std::vector<std::uint64_t> composite((half >> 6) + 1, 0);
    const auto test = [&](std::uint64_t i) { return (composite[i >> 6] >> (i & 63)) & 1; };
    const auto set = [&](std::uint64_t i) { composite[i >> 6] |= std::uint64_t{1} << (i & 63); };

    for (std::uint64_t i = 1; (2 * i + 1) * (2 * i + 1) <= limit; ++i) {
        if (test(i))
            continue;
        const std::uint64_t p = 2 * i + 1;
        for (std::uint64_t j = (p * p - 1) / 2; j <= half; j += p)
            set(j);
    }
    for (std::uint64_t i = 1; i <= half; ++i)
        if (!test(i))
            table.primes.push_back(2 * i + 1);
    return table;
}

struct PrimePower {
    std::uint64_t prime;
    std::uint32_t exponent;
};

/// Canonical factorization: primes strictly increasing, exponents >= 1,
/// empty list iff value == 1.
struct Factorization {
    std::uint64_t value = 1;
    std::vector<PrimePower> factors;
};

/// Trial division by sieved primes. Succeeds whenever every prime factor of n
/// is <= table.limit or n <= table.limit^2; otherwise reports the leftover
/// cofactor as incomplete.
inline Factorization factorize(std::uint64_t n, const PrimeTable& table) {
    if (n == 0)
        throw std::invalid_argument("factorize: n must be >= 1");
    Factorization f;
    f.value = n;
    std::uint64_t rem = n;
    for (std::uint64_t p : table.primes) {
        if (p * p > rem)
            break;
        if (rem % p != 0)
            continue;
        std::uint32_t e = 0;
        do {
            rem /= p;
            ++e;
        } while (rem % p == 0);
        f.factors.push_back({p, e});
    }
    if (rem > 1) {
        // rem has no prime factor <= table.limit (or <= sqrt(rem)), so it is
        // prime exactly when it fits under limit^2
        if (static_cast<unsigned __int128>(rem) >
            static_cast<unsigned __int128>(table.limit) * table.limit)
            throw std::runtime_error("factorize: incomplete factorization, cofactor " +
                                     std::to_string(rem) + " exceeds table limit squared");
        f.factors.push_back({rem, 1});
    }
    return f;
}

/// Legendre symbol (p/5) for prime p: 0 at p = 5, +1 for p = +-1 (mod 5),
/// -1 for p = +-2 (mod 5).
inline int legendre5(std::uint64_t p) {
    if (p == 5)
        return 0;
    const std::uint64_t r = p % 5;
    return (r == 1 || r == 4) ? 1 : -1;
}

/// p-adic valuation: largest e with p^e | n.
inline std::uint32_t nu_p(std::uint64_t p, std::uint64_t n) {
    if (p < 2)
        throw std::invalid_argument("nu_p: p must be >= 2");
    if (n == 0)
        throw std::invalid_argument("nu_p: n must be >= 1");
    std::uint32_t e = 0;
    while (n % p == 0) {
        n /= p;
        ++e;
    }
    return e;
}

/// Euler totient via the factorization of n.
inline std::uint64_t euler_phi(std::uint64_t n, const PrimeTable& table) {
    std::uint64_t phi = n;
    for (const auto& f : factorize(n, table).factors)
        phi = phi / f.prime * (f.prime - 1);
    return phi;
}

/// lcm(a, b) with overflow detection instead of silent wraparound.
inline std::uint64_t lcm(std::uint64_t a, std::uint64_t b) {
    if (a == 0 || b == 0)
        return 0;
    const std::uint64_t g = std::gcd(a, b);
    const unsigned __int128 prod = static_cast<unsigned __int128>(a / g) * b;
    if (prod > ~std::uint64_t{0})
        throw std::overflow_error("lcm: result exceeds 64 bits");
    return static_cast<std::uint64_t>(prod);
}

namespace detail {

inline double li_simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double li_adapt(double a, double b, double fa, double fm, double fb, double whole,
                       double eps, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = 1.0 / std::log(lm);
    const double frm = 1.0 / std::log(rm);
    const double left = li_simpson(a, m, fa, flm, fm);
    const double right = li_simpson(m, b, fm, frm, fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * eps)
        return left + right + delta / 15.0;
    return li_adapt(a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
           li_adapt(m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}

} // namespace detail

/// Integral logarithm over [2, x]: the main term of prime counting.
/// Adaptive Simpson, absolute tolerance 1e-9 * max(1, result scale).
inline double li(double x) {
    if (!(x >= 2.0))
        throw std::invalid_argument("li: x must be >= 2");
    if (x == 2.0)
        return 0.0;
    const double fa = 1.0 / std::log(2.0);
    const double fb = 1.0 / std::log(x);
    const double fm = 1.0 / std::log(0.5 * (2.0 + x));
    const double whole = detail::li_simpson(2.0, x, fa, fm, fb);
    const double eps = 1e-9 * std::max(1.0, x / std::log(x));
    return detail::li_adapt(2.0, x, fa, fm, fb, whole, eps, 60);
}

} // namespace fibgcd
