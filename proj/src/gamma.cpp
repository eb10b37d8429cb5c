#include "hypred/gamma.hpp"

#include "hypred/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hypred {

namespace {

constexpr int kGuardDigits = 10;
constexpr int kMaxDigits = 400;
constexpr std::size_t kBernoulliCount = 120;

// B_0, B_2, B_4, ... as exact rationals, from the recurrence
// sum_{k=0}^{m} C(m+1, k) B_k = 0.
const std::vector<Rat>& even_bernoulli() {
    static const std::vector<Rat> table = [] {
        const long top = 2 * static_cast<long>(kBernoulliCount);
        std::vector<Rat> b(static_cast<std::size_t>(top) + 1);
        b[0] = Rat(1);
        for (long m = 1; m <= top; ++m) {
            if (m > 1 && m % 2 == 1) {
                b[static_cast<std::size_t>(m)] = Rat(0);
                continue;
            }
            Rat acc(0);
            Rat binom(1);  // C(m+1, k)
            for (long k = 0; k < m; ++k) {
                acc += binom * b[static_cast<std::size_t>(k)];
                binom = binom * Rat(m + 1 - k) / Rat(k + 1);
            }
            b[static_cast<std::size_t>(m)] = -acc / Rat(m + 1);
        }
        std::vector<Rat> even;
        for (long m = 0; m <= top; m += 2)
            even.push_back(b[static_cast<std::size_t>(m)]);
        return even;
    }();
    return table;
}

int working_digits(int digits) {
    if (digits > kMaxDigits)
        throw std::invalid_argument("gamma kernels support at most 400 digits");
    return digits + kGuardDigits;
}

// Shift threshold: the asymptotic series at y >= this reaches 10^-work.
long asymptotic_threshold(int work) { return std::max<long>(20, 2L * work); }

void check_pole(const HpReal& x, const char* who) {
    const int d = x.digits();
    HpReal nearest(d);
    mpfr_round(nearest.raw(), x.raw());
    if (nearest.sign() > 0)
        return;
    if (abs(x - nearest) < HpReal::pow10(5 - d, d))
        throw PoleError(std::string(who) + ": argument " + x.str(20) +
                        " is at a nonpositive integer");
}

// Number of unit shifts that move x above the threshold.
long shift_count(const HpReal& x, long threshold) {
    const double xd = x.to_double();
    if (xd >= static_cast<double>(threshold))
        return 0;
    return static_cast<long>(std::ceil(static_cast<double>(threshold) - xd));
}

// ln Gamma(y) for y >= threshold via Stirling's series.
HpReal log_gamma_asymptotic(const HpReal& y, int work) {
    const auto& bern = even_bernoulli();
    const HpReal eps = HpReal::pow10(-work - 2, work);
    HpReal half(Rat(1, 2), work);
    HpReal result = (y - half) * log(y) - y + log(HpReal::pi(work) * 2L) * half;

    const HpReal inv_y = HpReal(1L, work) / y;
    const HpReal inv_y2 = inv_y * inv_y;
    HpReal power = inv_y;  // y^-(2k-1)
    for (std::size_t k = 1; k < bern.size(); ++k) {
        const long kk = static_cast<long>(k);
        HpReal term = HpReal(bern[k], work) * power / (2 * kk * (2 * kk - 1));
        result += term;
        if (abs(term) < eps)
            return result;
        power *= inv_y2;
    }
    throw std::logic_error("log_gamma_asymptotic: Bernoulli table exhausted");
}

// psi(y) for y >= threshold.
HpReal digamma_asymptotic(const HpReal& y, int work) {
    const auto& bern = even_bernoulli();
    const HpReal eps = HpReal::pow10(-work - 2, work);
    const HpReal inv_y = HpReal(1L, work) / y;
    HpReal result = log(y) - inv_y / 2L;

    const HpReal inv_y2 = inv_y * inv_y;
    HpReal power = inv_y2;  // y^-2k
    for (std::size_t k = 1; k < bern.size(); ++k) {
        HpReal term = HpReal(bern[k], work) * power / (2 * static_cast<long>(k));
        result -= term;
        if (abs(term) < eps)
            return result;
        power *= inv_y2;
    }
    throw std::logic_error("digamma_asymptotic: Bernoulli table exhausted");
}

} // namespace

HpReal hp_gamma(const HpReal& x) {
    check_pole(x, "hp_gamma");
    const int d = x.digits();
    const int work = working_digits(d);
    HpReal y = x.with_digits(work);
    const long n = shift_count(y, asymptotic_threshold(work));

    HpReal prod(1L, work);
    for (long k = 0; k < n; ++k) {
        prod *= y;
        y += 1;
    }
    HpReal g = exp(log_gamma_asymptotic(y, work)) / prod;
    return g.with_digits(d);
}

HpReal hp_gamma(const Rat& x, int digits) {
    if (x.is_nonpositive_integer())
        throw PoleError("hp_gamma: argument " + x.str() + " is a nonpositive integer");
    return hp_gamma(HpReal(x, digits + kGuardDigits)).with_digits(digits);
}

HpReal hp_rgamma(const Rat& x, int digits) {
    if (x.is_nonpositive_integer())
        return HpReal(0L, digits);
    return (HpReal(1L, digits + kGuardDigits) / hp_gamma(x, digits + kGuardDigits))
        .with_digits(digits);
}

HpReal hp_digamma(const HpReal& x) {
    check_pole(x, "hp_digamma");
    const int d = x.digits();
    const int work = working_digits(d);
    HpReal y = x.with_digits(work);
    const long n = shift_count(y, asymptotic_threshold(work));

    HpReal harmonic(0L, work);
    for (long k = 0; k < n; ++k) {
        harmonic += HpReal(1L, work) / y;
        y += 1;
    }
    return (digamma_asymptotic(y, work) - harmonic).with_digits(d);
}

GammaFactor GammaFactor::scaled(const Rat& k) const {
    GammaFactor g = *this;
    g.prefactor *= k;
    return g;
}

std::string GammaFactor::str() const {
    std::ostringstream os;
    os << prefactor;
    for (const auto& a : numer)
        os << " * Gamma(" << a << ")";
    if (!denom.empty()) {
        os << " / (";
        for (std::size_t i = 0; i < denom.size(); ++i)
            os << (i ? " * " : "") << "Gamma(" << denom[i] << ")";
        os << ")";
    }
    return os.str();
}

GammaFactor operator*(const GammaFactor& x, const GammaFactor& y) {
    GammaFactor g;
    g.prefactor = x.prefactor * y.prefactor;
    g.numer = x.numer;
    g.numer.insert(g.numer.end(), y.numer.begin(), y.numer.end());
    g.denom = x.denom;
    g.denom.insert(g.denom.end(), y.denom.begin(), y.denom.end());
    return g;
}

namespace {

void check_factor_poles(const GammaFactor& g) {
    for (const auto* args : {&g.numer, &g.denom})
        for (const auto& a : *args)
            if (a.is_nonpositive_integer())
                throw PoleError("gamma factor argument " + a.str() +
                                " is a nonpositive integer: " + g.str());
}

} // namespace

HpReal eval_gamma_factor(const GammaFactor& g, int digits) {
    check_factor_poles(g);
    const int work = digits + kGuardDigits;
    HpReal value(g.prefactor, work);
    for (const auto& a : g.numer)
        value *= hp_gamma(a, work);
    for (const auto& a : g.denom)
        value /= hp_gamma(a, work);
    return value.with_digits(digits);
}

std::optional<Rat> rationalize_gamma_factor(const GammaFactor& g) {
    check_factor_poles(g);
    if (g.numer.size() != g.denom.size())
        return std::nullopt;

    std::vector<Rat> open = g.denom;
    Rat value = g.prefactor;
    for (const auto& x : g.numer) {
        auto it = std::find_if(open.begin(), open.end(),
                               [&](const Rat& y) { return (x - y).is_integer(); });
        if (it == open.end())
            return std::nullopt;
        // Gamma(x)/Gamma(y) with x = y + n.
        const long n = (x - *it).to_long();
        if (n >= 0) {
            value *= pochhammer(*it, n);
        } else {
            const Rat p = pochhammer(x, -n);
            if (p.is_zero())
                throw PoleError("zero Pochhammer denominator pairing Gamma(" + x.str() +
                                ")/Gamma(" + it->str() + ")");
            value /= p;
        }
        open.erase(it);
    }
    return value;
}

} // namespace hypred
