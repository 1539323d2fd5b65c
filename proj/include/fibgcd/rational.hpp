#pragma once

// Exact nonnegative rationals with 128-bit numerator and denominator, just
// wide enough to hold the density values delta(d) for d < 2^32 before
// reduction.

#include <cstdint>
#include <stdexcept>
#include <string>

namespace fibgcd {

class Rational {
public:
    using u128 = unsigned __int128;

    Rational() = default;
    Rational(u128 num, u128 den) : num_(num), den_(den) {
        if (den_ == 0)
            throw std::invalid_argument("Rational: zero denominator");
        reduce();
    }

    u128 num() const { return num_; }
    u128 den() const { return den_; }

    Rational& operator*=(const Rational& o) {
        // cross-reduce before multiplying so intermediates stay in 128 bits
        const u128 g1 = gcd128(num_, o.den_);
        const u128 g2 = gcd128(o.num_, den_);
        num_ = (num_ / g1) * (o.num_ / g2);
        den_ = (den_ / g2) * (o.den_ / g1);
        return *this;
    }

    friend Rational operator*(Rational a, const Rational& b) {
        a *= b;
        return a;
    }

    bool operator==(const Rational& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const Rational& o) const { return !(*this == o); }

    double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    std::string str() const {
        if (den_ == 1)
            return to_string(num_);
        return to_string(num_) + "/" + to_string(den_);
    }

    static std::string to_string(u128 v) {
        if (v == 0)
            return "0";
        std::string s;
        while (v > 0) {
            s.insert(s.begin(), static_cast<char>('0' + static_cast<unsigned>(v % 10)));
            v /= 10;
        }
        return s;
    }

private:
    static u128 gcd128(u128 a, u128 b) {
        while (b != 0) {
            const u128 t = a % b;
            a = b;
            b = t;
        }
        return a;
    }

    void reduce() {
        const u128 g = gcd128(num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
        if (num_ == 0)
            den_ = 1;
    }

    u128 num_ = 0;
    u128 den_ = 1;
};

} // namespace fibgcd
