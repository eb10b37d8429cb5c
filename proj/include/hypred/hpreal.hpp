#pragma once

#include "hypred/rational.hpp"

#include <mpfr.h>

#include <compare>
#include <iosfwd>
#include <string>

namespace hypred {

inline constexpr int kDefaultDigits = 50;
inline constexpr int kMinDigits = 15;

/// Arbitrary-precision real carrying its own working precision in decimal
/// digits. Binary operations round to the larger precision of the operands.
class HpReal {
public:
    explicit HpReal(int digits = kDefaultDigits);
    HpReal(long v, int digits);
    HpReal(const Rat& r, int digits);
    HpReal(double v, int digits);

    HpReal(const HpReal& o);
    HpReal(HpReal&& o) noexcept;
    HpReal& operator=(const HpReal& o);
    HpReal& operator=(HpReal&& o) noexcept;
    ~HpReal();

    static HpReal parse(const std::string& text, int digits);
    static HpReal pi(int digits);
    static HpReal euler_gamma(int digits);
    /// 10^k at the given precision.
    static HpReal pow10(long k, int digits);

    int digits() const { return digits_; }
    /// Same value rounded to a different precision.
    HpReal with_digits(int digits) const;

    mpfr_srcptr raw() const { return v_; }
    mpfr_ptr raw() { return v_; }

    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    bool is_finite() const { return mpfr_number_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

    /// Scientific notation with digits() significant digits.
    std::string str() const;
    std::string str(int significant) const;

    HpReal& operator+=(const HpReal& o);
    HpReal& operator-=(const HpReal& o);
    HpReal& operator*=(const HpReal& o);
    HpReal& operator/=(const HpReal& o);
    HpReal& operator+=(long o);
    HpReal& operator*=(long o);
    HpReal& operator/=(long o);

    friend HpReal operator+(HpReal a, const HpReal& b) { return a += b; }
    friend HpReal operator-(HpReal a, const HpReal& b) { return a -= b; }
    friend HpReal operator*(HpReal a, const HpReal& b) { return a *= b; }
    friend HpReal operator/(HpReal a, const HpReal& b) { return a /= b; }
    friend HpReal operator+(HpReal a, long b) { return a += b; }
    friend HpReal operator*(HpReal a, long b) { return a *= b; }
    friend HpReal operator/(HpReal a, long b) { return a /= b; }
    friend HpReal operator-(const HpReal& a);

    friend bool operator==(const HpReal& a, const HpReal& b) {
        return mpfr_equal_p(a.v_, b.v_) != 0;
    }
    friend std::partial_ordering operator<=>(const HpReal& a, const HpReal& b);

private:
    void grow_to(int digits);

    mpfr_t v_;
    int digits_;
};

std::ostream& operator<<(std::ostream& os, const HpReal& x);

int digits_to_bits(int digits);

HpReal abs(const HpReal& x);
HpReal sqrt(const HpReal& x);
HpReal log(const HpReal& x);
HpReal exp(const HpReal& x);
HpReal pow(const HpReal& x, const HpReal& y);

/// |a - b| / max(|a|, |b|), or |a - b| when both are zero-ish.
HpReal relative_difference(const HpReal& a, const HpReal& b);

} // namespace hypred
