#pragma once

#include "hypred/errors.hpp"
#include "hypred/hpreal.hpp"
#include "hypred/perturb.hpp"
#include "hypred/rational.hpp"
#include "hypred/series.hpp"

#include <string>
#include <vector>

namespace hypred {

struct ParamTuple6 {
    Rat a, b, c, d, e, f;

    /// d + e - a - b - c - 1
    Rat s() const { return d + e - a - b - c - 1; }
    /// All six parameters raised by j.
    ParamTuple6 shifted(long j) const;
    std::string str() const;

    friend bool operator==(const ParamTuple6&, const ParamTuple6&) = default;
};

/// 4F3(a,b,c,f+m; d,e,f) = W * 4F3(a,b,c,mu+1; d,e,mu); params carries f = mu.
struct UnitShiftReduction {
    Rat W;
    Rat mu;
    ParamTuple6 params;
};

template <class T>
struct W2Mu2 {
    T W;
    T mu;
};

namespace detail {
inline Rat lift(const Rat& r, const Rat&) { return r; }
inline HpReal lift(const Rat& r, const HpReal& like) { return HpReal(r, like.digits()); }
} // namespace detail

/// W2 and mu2 over any field type (Rat, or HpReal for an irrational f).
template <class T>
W2Mu2<T> w2_mu2_values(const Rat& a, const Rat& b, const Rat& c, const Rat& d, const Rat& e,
                       const T& f) {
    using detail::lift;
    const Rat s = d + e - a - b - c - 1;
    if (s == Rat(1))
        throw SingularReduction("W2: s - 1 = 0");
    const T f1 = f + lift(1, f);
    if (f.is_zero() || f1.is_zero())
        throw SingularReduction("W2: f(f+1) = 0");
    const T ff = f * f1;
    const T W = lift(1, f) + lift(a * b * c, f) / (lift(s - 1, f) * ff);
    const T den = lift(a * b + a * c + b * c - d * e + d + e - 1, f) +
                  lift(s - 1, f) * (lift(2, f) * f + lift(1, f));
    if (den.is_zero())
        throw SingularReduction("mu2: denominator ab+ac+bc-de+d+e+(s-1)(2f+1)-1 = 0");
    const T mu = (lift(a * b * c, f) + lift(s - 1, f) * ff) / den;
    return {tweak(Formula::W2, W), tweak(Formula::Mu2, mu)};
}

/// Closed form for m = 2.
UnitShiftReduction w2_mu2(const ParamTuple6& p);

enum class MemoOrder { BottomUp, TopDown };

/// Reduction of the f+m / f pair to a unit shift, m >= 1.
UnitShiftReduction reduce_plus_m(const ParamTuple6& p, long m, MemoOrder order = MemoOrder::BottomUp);

/// 4F3(a,b,c,mu+1; d,e,mu) = coefficient * 4F3(a,b,c,eta+1; d-1,e,eta).
struct KillbottomResult {
    Rat coefficient;
    Rat eta;
};
KillbottomResult killbottom(const Rat& a, const Rat& b, const Rat& c, const Rat& d, const Rat& e,
                            const Rat& mu);

/// Cleared polynomial of the constraint on f when d + e = a + b + c + 3,
/// coefficients of f^0, f^1, f^2.
std::vector<Rat> corollary1_polynomial(const Rat& a, const Rat& b, const Rat& c, const Rat& d);

struct Corollary1Roots {
    std::vector<HpReal> roots;
    /// Roots of the cleared polynomial that make a denominator of the
    /// original constraint vanish, or put f at 0 or -1.
    std::vector<HpReal> spurious;
};

/// Real roots of the constraint, isolated by bisection on the exact polynomial.
/// Throws IdenticallyZero, NoRealRoot, SingularReduction.
Corollary1Roots corollary1_f_roots(const Rat& a, const Rat& b, const Rat& c, const Rat& d,
                                   int digits = kDefaultDigits);

/// Closed-form value of 4F3(a,b,c,f+2; d,e,f) at a root f, e = a+b+c+3-d.
/// Reciprocal gammas vanish at poles of Gamma(a), Gamma(b), Gamma(c).
HpReal corollary1_value(const Rat& a, const Rat& b, const Rat& c, const Rat& d, const HpReal& f);

} // namespace hypred
