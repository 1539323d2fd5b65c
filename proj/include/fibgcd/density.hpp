#pragma once

// Empirical side of the density statements: the explicit density delta(d) of
// primes whose rank of appearance is divisible by d, prime counts against
// delta(d) * Li(x), reciprocal sums, Mertens-type products, the member split
// by rank-divisible prime factors, the bound-balancing parameters, and the
// growth-exponent fit for the member counting function.

#include "fibgcd/arith.hpp"
#include "fibgcd/members.hpp"
#include "fibgcd/rank.hpp"
#include "fibgcd/rational.hpp"

#include <cmath>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <utility>
#include <vector>

namespace fibgcd {

/// delta(d) = (1/d) prod_{p|d} (1 - 1/p^2)^-1 * m with the 5-adic case split
/// m = 1 (10 not | d), 5/4 (d = 10 mod 20), 1/2 (20 | d). Exact for d < 2^32.
inline Rational delta_exact(std::uint64_t d, const PrimeTable& table) {
    if (d == 0)
        throw std::invalid_argument("delta_exact: d must be >= 1");
    if (d >= (std::uint64_t{1} << 32))
        throw std::invalid_argument("delta_exact: exact arithmetic limited to d < 2^32");
    Rational r(1, d);
    for (const auto& f : factorize(d, table).factors) {
        const Rational::u128 p2 = Rational::u128(f.prime) * f.prime;
        r *= Rational(p2, p2 - 1);
    }
    if (d % 20 == 10)
        r *= Rational(5, 4);
    else if (d % 20 == 0)
        r *= Rational(1, 2);
    return r;
}

inline double delta(std::uint64_t d, const PrimeTable& table) {
    if (d == 0)
        throw std::invalid_argument("delta: d must be >= 1");
    if (d < (std::uint64_t{1} << 32))
        return delta_exact(d, table).value();
    double r = 1.0 / static_cast<double>(d);
    for (const auto& f : factorize(d, table).factors) {
        const double p2 = static_cast<double>(f.prime) * static_cast<double>(f.prime);
        r *= p2 / (p2 - 1.0);
    }
    if (d % 20 == 10)
        r *= 1.25;
    else if (d % 20 == 0)
        r *= 0.5;
    return r;
}

/// Count of primes p <= x with d | z(p), against the predicted density.
struct DensityReport {
    std::uint64_t d;
    std::uint64_t x;
    std::uint64_t count;
    double delta_d;
    double li_x;
    double predicted; // delta_d * li_x
    double ratio;     // count / predicted
    double bt_ratio;  // count * phi(d) * log(x/d) / x, finite for x > d
};

inline DensityReport density_report(std::uint64_t d, std::uint64_t x, const RankCache& cache,
                                    const PrimeTable& table) {
    if (d == 0)
        throw std::invalid_argument("density_report: d must be >= 1");
    if (x < 2)
        throw std::invalid_argument("density_report: x must be >= 2");
    if (x > cache.limit)
        throw std::invalid_argument("density_report: x exceeds cache limit");

    std::uint64_t count = 0;
    for (const auto& rec : cache.records) {
        if (rec.p > x)
            break;
        if (rec.z % d == 0)
            ++count;
    }

    DensityReport rep{};
    rep.d = d;
    rep.x = x;
    rep.count = count;
    rep.delta_d = delta(d, table);
    rep.li_x = li(static_cast<double>(x));
    rep.predicted = rep.delta_d * rep.li_x;
    rep.ratio = rep.predicted > 0.0 ? static_cast<double>(count) / rep.predicted
                                    : std::numeric_limits<double>::quiet_NaN();
    rep.bt_ratio = x > d ? static_cast<double>(count) *
                               static_cast<double>(euler_phi(d, table)) *
                               std::log(static_cast<double>(x) / static_cast<double>(d)) /
                               static_cast<double>(x)
                         : std::numeric_limits<double>::quiet_NaN();
    return rep;
}

/// Sum of 1/p over primes p <= x with d | z(p), vs delta(d) * log log x.
struct ReciprocalReport {
    std::uint64_t d;
    std::uint64_t x;
    double sum;
    double predicted;
    double deviation; // sum - predicted
};

inline ReciprocalReport reciprocal_sum(std::uint64_t d, std::uint64_t x, const RankCache& cache,
                                       const PrimeTable& table) {
    if (d == 0 || d % 2 == 0)
        throw std::invalid_argument("reciprocal_sum: d must be odd");
    if (x < 3)
        throw std::invalid_argument("reciprocal_sum: x must be >= 3");
    if (x > cache.limit)
        throw std::invalid_argument("reciprocal_sum: x exceeds cache limit");

    // Kahan summation; the terms span many orders of magnitude
    double sum = 0.0, carry = 0.0;
    for (const auto& rec : cache.records) {
        if (rec.p > x)
            break;
        if (rec.z % d != 0)
            continue;
        const double y = 1.0 / static_cast<double>(rec.p) - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }

    ReciprocalReport rep{};
    rep.d = d;
    rep.x = x;
    rep.sum = sum;
    rep.predicted = delta(d, table) * std::log(std::log(static_cast<double>(x)));
    rep.deviation = rep.sum - rep.predicted;
    return rep;
}

/// prod (1 - 1/p) over primes p <= x with d | z(p).
inline double mertens_product(std::uint64_t d, std::uint64_t x, const RankCache& cache) {
    if (d == 0)
        throw std::invalid_argument("mertens_product: d must be >= 1");
    if (x > cache.limit)
        throw std::invalid_argument("mertens_product: x exceeds cache limit");
    double prod = 1.0;
    for (const auto& rec : cache.records) {
        if (rec.p > x)
            break;
        if (rec.z % d == 0)
            prod *= 1.0 - 1.0 / static_cast<double>(rec.p);
    }
    return prod;
}

/// Does n have a prime factor p with d | z(p)?
inline bool has_rank_multiple_factor(std::uint64_t n, std::uint64_t d, const RankCache& cache,
                                     const PrimeTable& table) {
    for (const auto& f : factorize(n, table).factors)
        if (cache.at(f.prime).z % d == 0)
            return true;
    return false;
}

/// Member split at d = 5^k: counts members without/with a prime factor p
/// having d | z(p), and whether every member on the "with" side is itself a
/// multiple of d.
struct MemberSplit {
    std::uint64_t d;
    std::uint64_t count_without;
    std::uint64_t count_with;
    bool with_all_divisible;
};

inline MemberSplit split_members(std::uint32_t k, std::uint64_t x,
                                 const EnumerationResult& members, const RankCache& cache,
                                 const PrimeTable& table) {
    if (k == 0)
        throw std::invalid_argument("split_members: k must be >= 1");
    if (k > 27)
        throw std::overflow_error("split_members: 5^k exceeds 64 bits");
    if (x > members.limit)
        throw std::invalid_argument("split_members: x exceeds enumeration limit");
    std::uint64_t d = 1;
    for (std::uint32_t i = 0; i < k; ++i)
        d *= 5;

    MemberSplit split{d, 0, 0, true};
    for (std::uint64_t n : members.members) {
        if (n > x)
            break;
        if (has_rank_multiple_factor(n, d, cache, table)) {
            ++split.count_with;
            if (n % d != 0)
                split.with_all_divisible = false;
        } else {
            ++split.count_without;
        }
    }
    return split;
}

/// Power-of-five modulus balancing the sieve bound against the multiples
/// bound, for a given value of log log x.
struct BoundParams {
    double loglog_x;
    std::uint32_t k;
    std::uint64_t d; // 5^k
    double delta_d;
    bool constraint_ok; // (log d) / delta(d) <= log log x
};

inline BoundParams bound_params(double loglog_x) {
    if (!(loglog_x > std::exp(1.0)))
        throw std::invalid_argument("bound_params: log log x must exceed e");
    const double log5 = std::log(5.0);
    const double arg = 25.0 / (24.0 * log5) * (loglog_x / std::log(loglog_x));
    const double kf = std::floor(std::log(arg) / log5);
    const std::uint32_t k = kf < 0.0 ? 0 : static_cast<std::uint32_t>(kf);
    if (k > 27)
        throw std::overflow_error("bound_params: 5^k exceeds 64 bits");
    std::uint64_t d = 1;
    for (std::uint32_t i = 0; i < k; ++i)
        d *= 5;
    const double delta_d = k == 0 ? 1.0 : 25.0 / 24.0 * std::pow(5.0, -static_cast<double>(k));
    const bool ok = std::log(static_cast<double>(d)) / delta_d <= loglog_x;
    return {loglog_x, k, d, delta_d, ok};
}

/// Least-squares estimate of c in count(x) ~ x / (log x)^c, with intercept:
/// log(x/count) regressed on log log x.
struct FitReport {
    double c;
    double intercept;
    double rms_residual;
    std::size_t points;
};

inline FitReport fit_growth_exponent(const std::vector<std::pair<double, double>>& counts,
                                     double min_x) {
    if (!(min_x >= 3.0))
        throw std::invalid_argument("fit_growth_exponent: min_x must be >= 3");

    std::vector<double> t, y;
    for (const auto& [x, count] : counts) {
        if (x < min_x || !(count > 0.0))
            continue;
        t.push_back(std::log(std::log(x)));
        y.push_back(std::log(x / count));
    }
    const std::size_t n = t.size();
    if (n < 2)
        throw std::invalid_argument("fit_growth_exponent: need at least 2 usable checkpoints");

    double mt = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mt += t[i];
        my += y[i];
    }
    mt /= static_cast<double>(n);
    my /= static_cast<double>(n);

    double stt = 0.0, sty = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        stt += (t[i] - mt) * (t[i] - mt);
        sty += (t[i] - mt) * (y[i] - my);
    }
    if (stt <= 0.0)
        throw std::invalid_argument("fit_growth_exponent: degenerate fit, all x equal");

    FitReport rep{};
    rep.c = sty / stt;
    rep.intercept = my - rep.c * mt;
    rep.points = n;
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (rep.c * t[i] + rep.intercept);
        ss += r * r;
    }
    rep.rms_residual = std::sqrt(ss / static_cast<double>(n));
    return rep;
}

inline FitReport fit_growth_exponent(const std::vector<Checkpoint>& checkpoints,
                                     std::uint64_t min_x) {
    std::vector<std::pair<double, double>> counts;
    counts.reserve(checkpoints.size());
    for (const auto& cp : checkpoints)
        counts.emplace_back(static_cast<double>(cp.x), static_cast<double>(cp.count));
    return fit_growth_exponent(counts, static_cast<double>(min_x));
}

namespace detail {

// reports print reals with 6 significant digits so golden files stay stable
inline std::string fmt6(double v) {
    std::ostringstream os;
    os << std::setprecision(6) << v;
    return os.str();
}

} // namespace detail

/// Density reports as CSV, header "d,x,count,predicted,ratio,bt_ratio".
inline void write_density_csv(const std::vector<DensityReport>& reports, std::ostream& out) {
    out << "d,x,count,predicted,ratio,bt_ratio\n";
    for (const auto& r : reports)
        out << r.d << ',' << r.x << ',' << r.count << ',' << detail::fmt6(r.predicted) << ','
            << detail::fmt6(r.ratio) << ',' << detail::fmt6(r.bt_ratio) << '\n';
    if (!out)
        throw std::runtime_error("write_density_csv: write failed");
}

/// Normalized growth curve as CSV "x,ratio" with ratio = count/(x/(log x)^c).
inline void write_fit_curve(const std::vector<Checkpoint>& checkpoints, double c,
                            std::ostream& out) {
    out << "x,ratio\n";
    for (const auto& cp : checkpoints) {
        const double x = static_cast<double>(cp.x);
        const double ratio = static_cast<double>(cp.count) / (x / std::pow(std::log(x), c));
        out << cp.x << ',' << detail::fmt6(ratio) << '\n';
    }
    if (!out)
        throw std::runtime_error("write_fit_curve: write failed");
}

} // namespace fibgcd
