#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace hypred {

/// Exact rational number, always in lowest terms with a positive denominator.
class Rat {
public:
    Rat() = default;
    Rat(long n) : v_(n) {}  // NOLINT: implicit on purpose, integers are rationals
    Rat(int n) : v_(static_cast<long>(n)) {}  // NOLINT
    Rat(long num, long den);
    explicit Rat(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }

    /// Parses "p/q" or "p" (optional sign, decimal digits only).
    static Rat parse(std::string_view text);

    const mpq_class& get() const { return v_; }
    mpz_class num() const { return v_.get_num(); }
    mpz_class den() const { return v_.get_den(); }

    bool is_zero() const { return sgn(v_) == 0; }
    bool is_integer() const { return v_.get_den() == 1; }
    bool is_nonpositive_integer() const { return is_integer() && sgn(v_) <= 0; }
    int sign() const { return sgn(v_); }

    /// Integer value; only meaningful when is_integer() and it fits.
    long to_long() const;
    double to_double() const { return v_.get_d(); }

    std::string str() const;

    Rat& operator+=(const Rat& o) { v_ += o.v_; return *this; }
    Rat& operator-=(const Rat& o) { v_ -= o.v_; return *this; }
    Rat& operator*=(const Rat& o) { v_ *= o.v_; return *this; }
    Rat& operator/=(const Rat& o);

    friend Rat operator+(Rat a, const Rat& b) { return a += b; }
    friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
    friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
    friend Rat operator/(Rat a, const Rat& b) { return a /= b; }
    friend Rat operator-(const Rat& a) { return Rat(mpq_class(-a.v_)); }

    friend bool operator==(const Rat& a, const Rat& b) { return a.v_ == b.v_; }
    friend std::strong_ordering operator<=>(const Rat& a, const Rat& b) {
        const int c = cmp(a.v_, b.v_);
        return c < 0 ? std::strong_ordering::less
             : c > 0 ? std::strong_ordering::greater
                     : std::strong_ordering::equal;
    }

private:
    mpq_class v_{0};
};

std::ostream& operator<<(std::ostream& os, const Rat& r);

Rat abs(const Rat& r);

/// Rising factorial x(x+1)...(x+n-1); 1 for n = 0.
Rat pochhammer(const Rat& x, long n);

Rat factorial(long n);

} // namespace hypred
