#include "hypred/psibridge.hpp"

#include "hypred/errors.hpp"
#include "hypred/perturb.hpp"

namespace hypred {

namespace {

bool terminates(const Rat& x, const Rat& y) {
    return x.is_nonpositive_integer() || y.is_nonpositive_integer();
}

} // namespace

PsiBridgeResult theorem4_decompose(const NegParams& p) {
    const auto& [a, b, c, e, f] = p;
    const Rat den = f * (b - a) * (b - c);
    if (den.is_zero())
        throw SingularReduction("theorem4: f(b-a)(b-c) = 0");
    if (e.is_zero())
        throw SingularReduction("theorem4: e = 0");
    if ((e - a - c - 1).sign() <= 0 && !terminates(a, c))
        throw DivergentError("theorem4: psi series need e-a-c-1 > 0");
    const Rat pre = a * b * c * (b - f) / den;
    return {tweak(Formula::Theorem4Psi1, pre),
            PsiSeriesParams{a, c, e, b},
            tweak(Formula::Theorem4Psi2, pre * (1 + a + c - e) / e),
            PsiSeriesParams{a + 1, c + 1, e + 1, b + 1},
            tweak(Formula::Theorem4Gamma,
                  (f * (b - c) * (a * a + (a - b) * (c - e + 1)) + a * b * b * (c - f)) / den),
            GammaFactor{Rat(1), {e, e - a - c - 1}, {e - a, e - c}}};
}

PsiBridgeResult corollary3_decompose(const Rat& a, const Rat& b, const Rat& c, const Rat& e) {
    if ((b - c).is_zero() || (e - a).is_zero())
        throw SingularReduction("corollary3: (b-c)(e-a) = 0");
    if (e.is_zero())
        throw SingularReduction("corollary3: e = 0");
    if ((e - a - c).sign() <= 0 && !terminates(a, c))
        throw DivergentError("corollary3: psi series need e-a-c > 0");
    const Rat pre = b * c / (b - c);
    return {tweak(Formula::Corollary3Psi1, pre),
            PsiSeriesParams{a - 1, c, e, b},
            tweak(Formula::Corollary3Psi2, pre * (a + c - e) / e),
            PsiSeriesParams{a, c + 1, e + 1, b + 1},
            tweak(Formula::Corollary3Gamma, 1 + c * c / ((b - c) * (e - a))),
            GammaFactor{Rat(1), {e, e - a - c}, {e - a, e - c}}};
}

Rat eval_psi_bridge_exact(const PsiBridgeResult& r) {
    auto g = rationalize_gamma_factor(r.gamma);
    if (!g)
        throw NotTerminating("psi bridge: gamma factor is not rational");
    Rat v = r.gamma_coeff * *g;
    if (!r.psi_coeff1.is_zero())
        v += r.psi_coeff1 * eval_psi_series_exact(r.psi_args1);
    if (!r.psi_coeff2.is_zero())
        v += r.psi_coeff2 * eval_psi_series_exact(r.psi_args2);
    return v;
}

HpReal eval_psi_bridge(const PsiBridgeResult& r, const SeriesOptions& opts) {
    const int work = opts.digits + 5;
    SeriesOptions inner = opts;
    inner.digits = work;
    HpReal v = HpReal(r.gamma_coeff, work) * eval_gamma_factor(r.gamma, work);
    if (!r.psi_coeff1.is_zero())
        v += HpReal(r.psi_coeff1, work) * eval_psi_series(r.psi_args1, inner).value;
    if (!r.psi_coeff2.is_zero())
        v += HpReal(r.psi_coeff2, work) * eval_psi_series(r.psi_args2, inner).value;
    return v.with_digits(opts.digits);
}

} // namespace hypred
