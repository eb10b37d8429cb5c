#include "hypred/perturb.hpp"

#include <array>

namespace hypred {

namespace {

thread_local std::optional<Formula> active;

constexpr std::array kAll = {
    Formula::W2, Formula::Mu2, Formula::WRecursion, Formula::MuRecursion,
    Formula::KillbottomCoeff, Formula::KillbottomEta, Formula::Corollary1Value,
    Formula::PartialFractionAq, Formula::ThreeTermA, Formula::ThreeTermB,
    Formula::ThreeTermC, Formula::RQInitialQ, Formula::RRecursion, Formula::QRecursion,
    Formula::Corollary2R, Formula::Corollary2Q, Formula::BridgeCoef3F2,
    Formula::BridgeCoefGamma, Formula::ThreeTerm3F2R1, Formula::ThreeTerm3F2R2,
    Formula::InverseCoeff, Formula::InverseMu, Formula::MiddleShifted,
    Formula::MiddleUnshifted, Formula::LowerLambda, Formula::LowerEta,
    Formula::UpperAlpha, Formula::UpperBeta, Formula::Section3Alpha,
    Formula::Section3Beta, Formula::Theorem4Psi1, Formula::Theorem4Psi2,
    Formula::Theorem4Gamma, Formula::Corollary3Psi1, Formula::Corollary3Psi2,
    Formula::Corollary3Gamma, Formula::GaussFactor, Formula::UnitSumPrefactor,
    Formula::ThomaeCoefficient, Formula::KdfPrefactor,
};

const Rat& factor() {
    static const Rat k(1'000'001, 1'000'000);
    return k;
}

} // namespace

std::span<const Formula> all_formulas() { return kAll; }

std::optional<Formula> active_perturbation() { return active; }

std::string_view to_string(Formula f) {
    switch (f) {
    case Formula::W2: return "W2";
    case Formula::Mu2: return "mu2";
    case Formula::WRecursion: return "W-recursion";
    case Formula::MuRecursion: return "mu-recursion";
    case Formula::KillbottomCoeff: return "killbottom-coefficient";
    case Formula::KillbottomEta: return "killbottom-eta";
    case Formula::Corollary1Value: return "corollary1-value";
    case Formula::PartialFractionAq: return "partial-fraction-Aq";
    case Formula::ThreeTermA: return "three-term-A";
    case Formula::ThreeTermB: return "three-term-B";
    case Formula::ThreeTermC: return "three-term-C";
    case Formula::RQInitialQ: return "rq-initial-Q0";
    case Formula::RRecursion: return "R-recursion";
    case Formula::QRecursion: return "Q-recursion";
    case Formula::Corollary2R: return "corollary2-R";
    case Formula::Corollary2Q: return "corollary2-Q";
    case Formula::BridgeCoef3F2: return "bridge-3f2-coefficient";
    case Formula::BridgeCoefGamma: return "bridge-gamma-coefficient";
    case Formula::ThreeTerm3F2R1: return "3term3F2-R1";
    case Formula::ThreeTerm3F2R2: return "3term3F2-R2";
    case Formula::InverseCoeff: return "inverse-coefficient";
    case Formula::InverseMu: return "inverse-mu";
    case Formula::MiddleShifted: return "middle-shifted";
    case Formula::MiddleUnshifted: return "middle-unshifted";
    case Formula::LowerLambda: return "lower-lambda";
    case Formula::LowerEta: return "lower-eta";
    case Formula::UpperAlpha: return "upper-alpha";
    case Formula::UpperBeta: return "upper-beta";
    case Formula::Section3Alpha: return "section3-rational-part";
    case Formula::Section3Beta: return "section3-3f2-coefficient";
    case Formula::Theorem4Psi1: return "theorem4-psi1";
    case Formula::Theorem4Psi2: return "theorem4-psi2";
    case Formula::Theorem4Gamma: return "theorem4-gamma";
    case Formula::Corollary3Psi1: return "corollary3-psi1";
    case Formula::Corollary3Psi2: return "corollary3-psi2";
    case Formula::Corollary3Gamma: return "corollary3-gamma";
    case Formula::GaussFactor: return "gauss-factor";
    case Formula::UnitSumPrefactor: return "3f2-unit-sum-prefactor";
    case Formula::ThomaeCoefficient: return "thomae-coefficient";
    case Formula::KdfPrefactor: return "kdf-prefactor";
    }
    return "unknown";
}

ScopedPerturbation::ScopedPerturbation(Formula f) : previous_(active) { active = f; }

ScopedPerturbation::~ScopedPerturbation() { active = previous_; }

Rat tweak(Formula f, Rat value) {
    if (active == f)
        value *= factor();
    return value;
}

HpReal tweak(Formula f, HpReal value) {
    if (active == f)
        value *= HpReal(factor(), value.digits());
    return value;
}

} // namespace hypred
