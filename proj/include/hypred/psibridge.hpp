#pragma once

#include "hypred/gamma.hpp"
#include "hypred/negshift.hpp"
#include "hypred/series.hpp"

namespace hypred {

/// lhs = psi_coeff1 * 2F1hat(psi_args1) + psi_coeff2 * 2F1hat(psi_args2) + gamma_coeff * gamma
struct PsiBridgeResult {
    Rat psi_coeff1;
    PsiSeriesParams psi_args1;
    Rat psi_coeff2;
    PsiSeriesParams psi_args2;
    Rat gamma_coeff;
    GammaFactor gamma;
};

/// lhs = 4F3(a,b,c,f+1; b+1,e,f).
PsiBridgeResult theorem4_decompose(const NegParams& p);

/// lhs = 3F2(a,c,b; e,b+1).
PsiBridgeResult corollary3_decompose(const Rat& a, const Rat& b, const Rat& c, const Rat& e);

Rat eval_psi_bridge_exact(const PsiBridgeResult& r);
HpReal eval_psi_bridge(const PsiBridgeResult& r, const SeriesOptions& opts = {});

} // namespace hypred
