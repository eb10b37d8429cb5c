#pragma once

#include "hypred/gamma.hpp"
#include "hypred/rational.hpp"
#include "hypred/series.hpp"

#include <string>
#include <utility>
#include <vector>

namespace hypred {

struct NegParams {
    Rat a, b, c, e, f;

    std::string str() const;
    friend bool operator==(const NegParams&, const NegParams&) = default;
};

/// 4F3(a,b,c,f+1; b+m,e,f) = R * 4F3(a,b,c,f+1; b+1,e,f) + Q * gamma.
struct RQReduction {
    Rat R;
    Rat Q;
    GammaFactor gamma;
};

/// A F(b+k+2) + B F(b+k+1) + C F(b+k) = 0 for F(x) = 4F3(a,b,c,f+1; x,e,f).
struct ThreeTermCoeffs {
    Rat A, B, C;
};

/// 4F3(a,b,c,f+1; b+k,e,f) with the lower b-parameter raised by k.
PFQParams neg_series(const NegParams& p, long k);

/// Coefficients with (b)_n/(b+m)_n = sum_q A_q (b+q)_n/(b+q+1)_n:
///   A_q = (-1)^q (b)_m / (q! (m-1-q)! (b+q)).
Rat partial_fraction_Aq(const Rat& b, long m, long q);

/// The product form as printed: (b)_m/(b+q)_m * prod_{l != q+1} 1/(l-q-1).
/// Fails the n = 0 normalization; kept only to demonstrate that.
Rat partial_fraction_Aq_printed(const Rat& b, long m, long q);

std::vector<std::pair<Rat, PFQParams>> expand_negative_shift(const NegParams& p, long m);

ThreeTermCoeffs three_term_coeffs(const NegParams& p, long k);

RQReduction rq_reduce(const NegParams& p, long m);
RQReduction corollary2(const NegParams& p);

/// 4F3(a,b,c,f+1; b+1,e,f) = series_coeff * 3F2(a+1,b,c; b+1,e) + gamma_coeff * gamma.
struct NegShiftBridge {
    Rat series_coeff;
    PFQParams series;
    Rat gamma_coeff;
    GammaFactor gamma;
};
NegShiftBridge unit_negshift_to_3f2(const NegParams& p);

/// 3F2(a+1,b,c; b+k+1,e) = R2 3F2(a,b,c; b+k+1,e) + R1 3F2(a+1,b,c; b+k+2,e).
struct ThreeTerm3F2 {
    Rat R1, R2;
};
ThreeTerm3F2 three_term_3f2_coeffs(const Rat& a, const Rat& b, const Rat& c, const Rat& e, long k);

/// 4F3(a,b,c,f+1; d,e,f) = coefficient * 4F3(a-1,b,c,mu+1; d,e,mu).
struct InverseResult {
    Rat coefficient;
    Rat mu;
};
InverseResult inverse_transform(const Rat& a, const Rat& b, const Rat& c, const Rat& d, const Rat& e,
                                const Rat& f);

enum class Decomposition { Middle, Lower, Upper };

/// source = shifted_coeff * shifted + unshifted_coeff * unshifted, where
/// shifted has upper a+1 and unshifted is 3F2(a,b,c; b+k+1,e).
///   Middle: source lower b+k+1, shifted lower b+k+1
///   Lower:  source lower b+k,   shifted lower b+k+1
///   Upper:  source lower b+k+2, shifted lower b+k+2
struct Decomposed {
    PFQParams source;
    Rat shifted_coeff;
    PFQParams shifted;
    Rat unshifted_coeff;
    PFQParams unshifted;
};
Decomposed decompose_to_3f2(const NegParams& p, long k, Decomposition which);

std::string to_string(Decomposition d);

enum class Section3Form { Corrected, AsPrinted };

/// lhs_factor * lhs_series = constant + series_coeff * rhs_series, with
///   lhs_factor = Gamma(e-c)Gamma(e-a)(f)_2 / (Gamma(e)Gamma(e-a-c)(b)_2)
///   lhs_series = 4F3(a,b,c,f+2; b+2,e,f)
///   rhs_series = 3F2(1, s+1, e-b-1; e-c+1, e-a+1),  s = e-a-c
struct Section3Identity {
    GammaFactor lhs_factor;
    PFQParams lhs_series;
    Rat constant;
    Rat series_coeff;
    PFQParams rhs_series;
};
Section3Identity section3_identity(const Rat& a, const Rat& b, const Rat& c, const Rat& e, const Rat& f,
                                   Section3Form form = Section3Form::Corrected);

std::pair<HpReal, HpReal> section3_example_lhs_rhs(const Rat& a, const Rat& b, const Rat& c, const Rat& e,
                                                   const Rat& f, const SeriesOptions& opts = {},
                                                   Section3Form form = Section3Form::Corrected);

} // namespace hypred
