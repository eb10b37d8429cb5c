#include "hypred/hpreal.hpp"

#include "hypred/errors.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace hypred {

int digits_to_bits(int digits) {
    return static_cast<int>(std::ceil(digits * 3.321928094887362)) + 1;
}

HpReal::HpReal(int digits) : digits_(digits) {
    if (digits < kMinDigits)
        throw std::invalid_argument("HpReal: precision below 15 digits");
    mpfr_init2(v_, digits_to_bits(digits));
    mpfr_set_zero(v_, 1);
}

HpReal::HpReal(long v, int digits) : HpReal(digits) { mpfr_set_si(v_, v, MPFR_RNDN); }

HpReal::HpReal(const Rat& r, int digits) : HpReal(digits) {
    mpfr_set_q(v_, r.get().get_mpq_t(), MPFR_RNDN);
}

HpReal::HpReal(double v, int digits) : HpReal(digits) { mpfr_set_d(v_, v, MPFR_RNDN); }

HpReal::HpReal(const HpReal& o) : digits_(o.digits_) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
}

HpReal::HpReal(HpReal&& o) noexcept : digits_(o.digits_) {
    // Steal the limbs; leave `o` as a valid zero of the same precision.
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_swap(v_, o.v_);
}

HpReal& HpReal::operator=(const HpReal& o) {
    if (this != &o) {
        mpfr_set_prec(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
        digits_ = o.digits_;
    }
    return *this;
}

HpReal& HpReal::operator=(HpReal&& o) noexcept {
    mpfr_swap(v_, o.v_);
    std::swap(digits_, o.digits_);
    return *this;
}

HpReal::~HpReal() { mpfr_clear(v_); }

HpReal HpReal::parse(const std::string& text, int digits) {
    HpReal x(digits);
    if (mpfr_set_str(x.v_, text.c_str(), 10, MPFR_RNDN) != 0)
        throw ParseError("not a real number: '" + text + "'");
    return x;
}

HpReal HpReal::pi(int digits) {
    HpReal x(digits);
    mpfr_const_pi(x.v_, MPFR_RNDN);
    return x;
}

HpReal HpReal::euler_gamma(int digits) {
    HpReal x(digits);
    mpfr_const_euler(x.v_, MPFR_RNDN);
    return x;
}

HpReal HpReal::pow10(long k, int digits) {
    HpReal x(10L, digits);
    mpfr_pow_si(x.v_, x.v_, k, MPFR_RNDN);
    return x;
}

HpReal HpReal::with_digits(int digits) const {
    HpReal x(digits);
    mpfr_set(x.v_, v_, MPFR_RNDN);
    return x;
}

void HpReal::grow_to(int digits) {
    if (digits <= digits_)
        return;
    mpfr_prec_round(v_, digits_to_bits(digits), MPFR_RNDN);
    digits_ = digits;
}

std::string HpReal::str() const { return str(digits_); }

std::string HpReal::str(int significant) const {
    char* buf = nullptr;
    mpfr_asprintf(&buf, "%.*Re", std::max(significant - 1, 0), v_);
    std::string out(buf);
    mpfr_free_str(buf);
    return out;
}

HpReal& HpReal::operator+=(const HpReal& o) {
    grow_to(o.digits_);
    mpfr_add(v_, v_, o.v_, MPFR_RNDN);
    return *this;
}

HpReal& HpReal::operator-=(const HpReal& o) {
    grow_to(o.digits_);
    mpfr_sub(v_, v_, o.v_, MPFR_RNDN);
    return *this;
}

HpReal& HpReal::operator*=(const HpReal& o) {
    grow_to(o.digits_);
    mpfr_mul(v_, v_, o.v_, MPFR_RNDN);
    return *this;
}

HpReal& HpReal::operator/=(const HpReal& o) {
    grow_to(o.digits_);
    mpfr_div(v_, v_, o.v_, MPFR_RNDN);
    return *this;
}

HpReal& HpReal::operator+=(long o) {
    mpfr_add_si(v_, v_, o, MPFR_RNDN);
    return *this;
}

HpReal& HpReal::operator*=(long o) {
    mpfr_mul_si(v_, v_, o, MPFR_RNDN);
    return *this;
}

HpReal& HpReal::operator/=(long o) {
    mpfr_div_si(v_, v_, o, MPFR_RNDN);
    return *this;
}

HpReal operator-(const HpReal& a) {
    HpReal r(a);
    mpfr_neg(r.v_, r.v_, MPFR_RNDN);
    return r;
}

std::partial_ordering operator<=>(const HpReal& a, const HpReal& b) {
    if (mpfr_unordered_p(a.v_, b.v_))
        return std::partial_ordering::unordered;
    const int c = mpfr_cmp(a.v_, b.v_);
    return c < 0 ? std::partial_ordering::less
         : c > 0 ? std::partial_ordering::greater
                 : std::partial_ordering::equivalent;
}

std::ostream& operator<<(std::ostream& os, const HpReal& x) { return os << x.str(); }

HpReal abs(const HpReal& x) {
    HpReal r(x);
    mpfr_abs(r.raw(), r.raw(), MPFR_RNDN);
    return r;
}

HpReal sqrt(const HpReal& x) {
    HpReal r(x);
    mpfr_sqrt(r.raw(), r.raw(), MPFR_RNDN);
    return r;
}

HpReal log(const HpReal& x) {
    HpReal r(x);
    mpfr_log(r.raw(), r.raw(), MPFR_RNDN);
    return r;
}

HpReal exp(const HpReal& x) {
    HpReal r(x);
    mpfr_exp(r.raw(), r.raw(), MPFR_RNDN);
    return r;
}

HpReal pow(const HpReal& x, const HpReal& y) {
    HpReal r(std::max(x.digits(), y.digits()));
    mpfr_pow(r.raw(), x.raw(), y.raw(), MPFR_RNDN);
    return r;
}

HpReal relative_difference(const HpReal& a, const HpReal& b) {
    HpReal diff = abs(a - b);
    HpReal scale = std::max(abs(a), abs(b), [](const HpReal& x, const HpReal& y) { return x < y; });
    if (scale.is_zero())
        return diff;
    return diff / scale;
}

} // namespace hypred
