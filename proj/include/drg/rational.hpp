#ifndef DRG_RATIONAL_HPP
#define DRG_RATIONAL_HPP

#include <cstdint>
#include <numeric>
#include <string>

#include "drg/errors.hpp"

namespace drg {

/// Exact rational arithmetic on 64-bit numerator/denominator with overflow
/// detection. The coefficient systems assembled here involve binomials of
/// order <= a few hundred, so 64 bits leave ample headroom; Overflow is
/// thrown rather than silently wrapping if a hostile input exceeds it.
class Rational {
public:
    Rational() = default;
    Rational(std::int64_t value) : num_(value) {} // NOLINT(google-explicit-constructor)
    Rational(std::int64_t num, std::int64_t den) : num_(num), den_(den) { normalize(); }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }
    bool is_zero() const { return num_ == 0; }
    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    Rational operator-() const { return Rational(-num_, den_); }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return Rational(checked(static_cast<__int128>(a.num_) * b.den_ +
                                static_cast<__int128>(b.num_) * a.den_),
                        checked(static_cast<__int128>(a.den_) * b.den_));
    }
    friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return Rational(checked(static_cast<__int128>(a.num_) * b.num_),
                        checked(static_cast<__int128>(a.den_) * b.den_));
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0)
            throw Error("rational division by zero");
        return Rational(checked(static_cast<__int128>(a.num_) * b.den_),
                        checked(static_cast<__int128>(a.den_) * b.num_));
    }
    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }

    std::string str() const {
        return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
    }

private:
    static std::int64_t checked(__int128 v) {
        if (v > INT64_MAX || v < INT64_MIN)
            throw Overflow("rational arithmetic exceeded 64 bits");
        return static_cast<std::int64_t>(v);
    }

    void normalize() {
        if (den_ == 0)
            throw Error("rational with zero denominator");
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        const std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
        if (num_ == 0)
            den_ = 1;
    }

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

/// Exact binomial coefficient as a Rational (throws Overflow if it cannot fit).
inline Rational binomial(int n, int k) {
    if (k < 0 || k > n)
        return Rational(0);
    Rational out(1);
    for (int i = 1; i <= k; ++i)
        out = out * Rational(n - k + i) / Rational(i);
    return out;
}

} // namespace drg

#endif
