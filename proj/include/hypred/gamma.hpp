#pragma once

#include "hypred/hpreal.hpp"
#include "hypred/rational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hypred {

/// Gamma(x) at x.digits() precision, relative error <= 10^(5-D).
/// Throws PoleError within 10^(5-D) of a nonpositive integer.
HpReal hp_gamma(const HpReal& x);

/// Digamma psi(x), absolute error <= 10^(5-D). Same pole rule as hp_gamma.
HpReal hp_digamma(const HpReal& x);

/// 1/Gamma(x); exactly zero at nonpositive integers (exact Rat test).
HpReal hp_rgamma(const Rat& x, int digits);

HpReal hp_gamma(const Rat& x, int digits);

/// prefactor * prod Gamma(numer[i]) / prod Gamma(denom[j]).
struct GammaFactor {
    Rat prefactor{1};
    std::vector<Rat> numer;
    std::vector<Rat> denom;

    GammaFactor scaled(const Rat& k) const;
    std::string str() const;

    friend GammaFactor operator*(const GammaFactor& x, const GammaFactor& y);
    friend bool operator==(const GammaFactor&, const GammaFactor&) = default;
};

/// Throws PoleError if any argument is a nonpositive integer.
HpReal eval_gamma_factor(const GammaFactor& g, int digits = kDefaultDigits);

/// Exact value when numerator and denominator arguments pair up with integer
/// differences (greedy, in list order); std::nullopt otherwise.
/// Throws PoleError if any argument is a nonpositive integer.
std::optional<Rat> rationalize_gamma_factor(const GammaFactor& g);

} // namespace hypred
