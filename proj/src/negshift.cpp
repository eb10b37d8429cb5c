#include "hypred/negshift.hpp"

#include "hypred/errors.hpp"
#include "hypred/perturb.hpp"

#include <sstream>

namespace hypred {

namespace {

bool terminates(const Rat& x, const Rat& y) {
    return x.is_nonpositive_integer() || y.is_nonpositive_integer();
}

Rat alpha_k(const NegParams& p, long k) {
    const auto& [a, b, c, e, f] = p;
    return (b - f) * (a * (c - f) + f * (e - c - 1)) + k * f * (e - f - 1);
}

GammaFactor gauss_shift1(const NegParams& p) {
    return GammaFactor{Rat(1), {p.e, p.e - p.a - p.c - 1}, {p.e - p.a, p.e - p.c}};
}

PFQParams f32(Rat u1, Rat u2, Rat u3, Rat l1, Rat l2) {
    return PFQParams{{std::move(u1), std::move(u2), std::move(u3)}, {std::move(l1), std::move(l2)}};
}

} // namespace

std::string NegParams::str() const {
    std::ostringstream os;
    os << "(a=" << a << ", b=" << b << ", c=" << c << ", e=" << e << ", f=" << f << ")";
    return os.str();
}

PFQParams neg_series(const NegParams& p, long k) {
    return PFQParams{{p.a, p.b, p.c, p.f + 1}, {p.b + k, p.e, p.f}};
}

Rat partial_fraction_Aq(const Rat& b, long m, long q) {
    const Rat bq = b + q;
    if (bq.is_zero())
        throw PoleError("A_q: b + q = 0 at q = " + std::to_string(q));
    Rat v = pochhammer(b, m) / (factorial(q) * factorial(m - 1 - q) * bq);
    if (q % 2)
        v = -v;
    return tweak(Formula::PartialFractionAq, v);
}

Rat partial_fraction_Aq_printed(const Rat& b, long m, long q) {
    const Rat den = pochhammer(b + q, m);
    if (den.is_zero())
        throw PoleError("printed A_q: (b+q)_m = 0");
    Rat v = pochhammer(b, m) / den;
    for (long l = 1; l <= m; ++l)
        if (l != q + 1)
            v /= Rat(l - q - 1);
    return v;
}

std::vector<std::pair<Rat, PFQParams>> expand_negative_shift(const NegParams& p, long m) {
    std::vector<std::pair<Rat, PFQParams>> out;
    for (long q = 0; q < m; ++q)
        out.emplace_back(partial_fraction_Aq(p.b, m, q),
                         PFQParams{{p.a, p.b + q, p.c, p.f + 1}, {p.b + q + 1, p.e, p.f}});
    return out;
}

ThreeTermCoeffs three_term_coeffs(const NegParams& p, long k) {
    const auto& [a, b, c, e, f] = p;
    if ((b + k + 1).is_zero())
        throw PoleError("three-term coefficients: b + k + 1 = 0 at k = " + std::to_string(k));
    const Rat beta = a * (c - k) + f * (e - a - c - 1 + k);
    const Rat A = -alpha_k(p, k) * (k + 1) * (b - a + k + 1) * (b - c + k + 1) / (b + k + 1);
    const Rat B = beta * (b - a + k) * (b - f + k + 1) * (e - a - c + k) +
                  ((k + 1) * (a - f) * (b - c + k + 1) - a * (a - e + 1) * (b - f + k + 1)) *
                      (beta + k * (b - c + k));
    const Rat C = -alpha_k(p, k + 1) * (b + k) * (e - a - c - 1 + k);
    return {tweak(Formula::ThreeTermA, A), tweak(Formula::ThreeTermB, B), tweak(Formula::ThreeTermC, C)};
}

RQReduction rq_reduce(const NegParams& p, long m) {
    if (m < 0)
        throw ShapeError("rq_reduce needs m >= 0");
    if (p.f.is_zero())
        throw SingularReduction("rq_reduce: f = 0");
    Rat r_prev(0), r(1);
    Rat q_prev = tweak(Formula::RQInitialQ, p.e - p.a - p.c - 1 + p.a * p.c / p.f), q(0);
    if (m == 0)
        return {r_prev, q_prev, gauss_shift1(p)};
    for (long j = 2; j <= m; ++j) {
        const auto [A, B, C] = three_term_coeffs(p, j - 2);
        if (A.is_zero())
            throw SingularReduction("rq_reduce: A(" + std::to_string(j - 2) + ") = 0");
        Rat r_next = -(B / A) * r - (C / A) * r_prev;
        Rat q_next = -(B / A) * q - (C / A) * q_prev;
        r_prev = std::exchange(r, std::move(r_next));
        q_prev = std::exchange(q, std::move(q_next));
    }
    if (m >= 2) {
        r = tweak(Formula::RRecursion, r);
        q = tweak(Formula::QRecursion, q);
    }
    return {r, q, gauss_shift1(p)};
}

RQReduction corollary2(const NegParams& p) {
    if (p.f.is_zero())
        throw SingularReduction("corollary2: f = 0");
    const auto [A, B, C] = three_term_coeffs(p, 0);
    if (A.is_zero())
        throw SingularReduction("corollary2: A(0) = 0");
    const auto& [a, b, c, e, f] = p;
    return {tweak(Formula::Corollary2R, -B / A),
            tweak(Formula::Corollary2Q, -C / (A * f) * ((e - a - c - 1) * f + a * c)),
            gauss_shift1(p)};
}

NegShiftBridge unit_negshift_to_3f2(const NegParams& p) {
    const auto& [a, b, c, e, f] = p;
    if ((f * (b - a)).is_zero())
        throw SingularReduction("3F2 bridge: f(b-a) = 0");
    if ((e - a - c).sign() <= 0 && !terminates(a, c))
        throw DivergentError("3F2 bridge needs e-a-c > 0 or a terminating series");
    return {tweak(Formula::BridgeCoef3F2, a * (b - f) / (f * (b - a))),
            f32(a + 1, b, c, b + 1, e),
            tweak(Formula::BridgeCoefGamma, b * (f - a) / (f * (b - a))),
            GammaFactor{Rat(1), {e, e - a - c}, {e - a, e - c}}};
}

ThreeTerm3F2 three_term_3f2_coeffs(const Rat& a, const Rat& b, const Rat& c, const Rat& e, long k) {
    const Rat d2 = a + c - e - k;
    const Rat d1 = (b + k + 1) * (e + k - a - c);
    if (d2.is_zero() || d1.is_zero())
        throw SingularReduction("3term3F2: (a+c-e-k)(b+k+1) = 0");
    return {tweak(Formula::ThreeTerm3F2R1, (k + 1) * (b - c + k + 1) / d1),
            tweak(Formula::ThreeTerm3F2R2, (a - e + 1) / d2)};
}

InverseResult inverse_transform(const Rat& a, const Rat& b, const Rat& c, const Rat& d, const Rat& e,
                                const Rat& f) {
    const Rat t = a + b + c - d - e + 1;
    if ((f * t).is_zero())
        throw SingularReduction("inverse: f(a+b+c-d-e+1) = 0");
    const Rat top = t * f - b * c;
    const Rat den = top - (a - 1) * (d + e - a - 1) + d * e - d - e + 1;
    if (den.is_zero())
        throw SingularReduction("inverse: mu denominator = 0");
    const Rat mu = (a - 1) * top / den;
    // mu = 0 (for instance a = 1) leaves a zero lower parameter on the right.
    if (mu.is_zero())
        throw SingularReduction("inverse: mu = 0");
    return {tweak(Formula::InverseCoeff, top / (f * t)), tweak(Formula::InverseMu, mu)};
}

std::string to_string(Decomposition d) {
    switch (d) {
    case Decomposition::Middle: return "middle";
    case Decomposition::Lower: return "lower";
    case Decomposition::Upper: return "upper";
    }
    return "?";
}

Decomposed decompose_to_3f2(const NegParams& p, long k, Decomposition which) {
    const auto& [a, b, c, e, f] = p;
    if (f.is_zero())
        throw SingularReduction("decompose: f = 0");
    const PFQParams unshifted = f32(a, b, c, b + k + 1, e);
    switch (which) {
    case Decomposition::Middle:
        return {neg_series(p, k + 1), tweak(Formula::MiddleShifted, a / f), f32(a + 1, b, c, b + k + 1, e),
                tweak(Formula::MiddleUnshifted, (f - a) / f), unshifted};
    case Decomposition::Lower: {
        const Rat s = k + e - a - c - 1;
        const Rat den = f * s * (b + k);
        if (den.is_zero())
            throw SingularReduction("decompose lower: f s (b+k) = 0");
        const Rat lambda = a * (f * s + k * (b + k - c) + a * (c - k)) / den;
        const Rat eta = (a - b - k) * (a * (k - c) - f * s) / den;
        return {neg_series(p, k), tweak(Formula::LowerLambda, lambda), f32(a + 1, b, c, b + k + 1, e),
                tweak(Formula::LowerEta, eta), unshifted};
    }
    case Decomposition::Upper: {
        const Rat den = f * (b - a + k + 1);
        if (den.is_zero())
            throw SingularReduction("decompose upper: f(b-a+k+1) = 0");
        return {neg_series(p, k + 2), tweak(Formula::UpperAlpha, a * (b - f + k + 1) / den),
                f32(a + 1, b, c, b + k + 2, e), tweak(Formula::UpperBeta, (f - a) * (b + k + 1) / den),
                unshifted};
    }
    }
    throw SingularReduction("decompose: unknown decomposition");
}

Section3Identity section3_identity(const Rat& a, const Rat& b, const Rat& c, const Rat& e, const Rat& f,
                                   Section3Form form) {
    const Rat s = e - a - c;
    const Rat rden = pochhammer(1 + b - e, 2);
    if (rden.is_zero())
        throw SingularReduction("section 3 identity: (1+b-e)_2 = 0");
    const Rat bracket_den = b * (b + f - 2 * e + 3);
    if (bracket_den.is_zero())
        throw SingularReduction("section 3 identity: b(b+f-2e+3) = 0");
    if (((e - a) * (e - c)).is_zero())
        throw SingularReduction("section 3 identity: (e-a)(e-c) = 0");
    const Rat b2 = pochhammer(b, 2);
    if (b2.is_zero())
        throw SingularReduction("section 3 identity: (b)_2 = 0");

    const Rat r = pochhammer(1 + f - e, 2) / rden;
    Rat numer = b * b * (1 - s) + b * (f + e - 1) * (s + 1) - 3 * b * (e - 1) - s * (f + 1) * (e - 2);
    if (form == Section3Form::Corrected)
        numer += b;
    const Rat constant = r + (1 - r) * numer / bracket_den;
    const Rat series_coeff = -(1 - r) * s * (b - e + 2) / (bracket_den * (e - a) * (e - c)) *
                             (b * b * (1 - s) + b * f * (s + 1) - b * (e - 2) - a * b * c +
                              (a - 1) * (c - 1) * (f + 1));
    return {GammaFactor{pochhammer(f, 2) / b2, {e - c, e - a}, {e, s}},
            PFQParams{{a, b, c, f + 2}, {b + 2, e, f}},
            tweak(Formula::Section3Alpha, constant),
            tweak(Formula::Section3Beta, series_coeff),
            f32(1, s + 1, e - b - 1, e - c + 1, e - a + 1)};
}

std::pair<HpReal, HpReal> section3_example_lhs_rhs(const Rat& a, const Rat& b, const Rat& c, const Rat& e,
                                                   const Rat& f, const SeriesOptions& opts,
                                                   Section3Form form) {
    const auto id = section3_identity(a, b, c, e, f, form);
    const int work = opts.digits + 5;
    SeriesOptions inner = opts;
    inner.digits = work;
    HpReal lhs = eval_gamma_factor(id.lhs_factor, work) * eval_pfq1(id.lhs_series, inner).value;
    HpReal rhs = HpReal(id.constant, work) + HpReal(id.series_coeff, work) * eval_pfq1(id.rhs_series, inner).value;
    return {lhs.with_digits(opts.digits), rhs.with_digits(opts.digits)};
}

} // namespace hypred
