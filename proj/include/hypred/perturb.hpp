#pragma once

// Fault injection for the adversarial mutation test: while a
// ScopedPerturbation is alive on the current thread, the named coefficient
// formula returns its value multiplied by (1 + 10^-6). Inert otherwise.

#include "hypred/hpreal.hpp"
#include "hypred/rational.hpp"

#include <optional>
#include <span>
#include <string_view>

namespace hypred {

enum class Formula {
    W2,
    Mu2,
    WRecursion,
    MuRecursion,
    KillbottomCoeff,
    KillbottomEta,
    Corollary1Value,
    PartialFractionAq,
    ThreeTermA,
    ThreeTermB,
    ThreeTermC,
    RQInitialQ,
    RRecursion,
    QRecursion,
    Corollary2R,
    Corollary2Q,
    BridgeCoef3F2,
    BridgeCoefGamma,
    ThreeTerm3F2R1,
    ThreeTerm3F2R2,
    InverseCoeff,
    InverseMu,
    MiddleShifted,
    MiddleUnshifted,
    LowerLambda,
    LowerEta,
    UpperAlpha,
    UpperBeta,
    Section3Alpha,
    Section3Beta,
    Theorem4Psi1,
    Theorem4Psi2,
    Theorem4Gamma,
    Corollary3Psi1,
    Corollary3Psi2,
    Corollary3Gamma,
    GaussFactor,
    UnitSumPrefactor,
    ThomaeCoefficient,
    KdfPrefactor,
};

std::span<const Formula> all_formulas();
std::string_view to_string(Formula f);

class ScopedPerturbation {
public:
    explicit ScopedPerturbation(Formula f);
    ~ScopedPerturbation();
    ScopedPerturbation(const ScopedPerturbation&) = delete;
    ScopedPerturbation& operator=(const ScopedPerturbation&) = delete;

private:
    std::optional<Formula> previous_;
};

/// The formula perturbed on this thread, if any.
std::optional<Formula> active_perturbation();

Rat tweak(Formula f, Rat value);
HpReal tweak(Formula f, HpReal value);

} // namespace hypred
