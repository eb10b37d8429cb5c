#pragma once

#include "hypred/errors.hpp"
#include "hypred/gamma.hpp"
#include "hypred/hpreal.hpp"
#include "hypred/rational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hypred {

/// Parameters of pFq(upper; lower; 1).
struct PFQParams {
    std::vector<Rat> upper;
    std::vector<Rat> lower;

    /// Index of the last nonzero term when some upper parameter is a
    /// nonpositive integer.
    std::optional<long> termination_index() const;
    std::string str() const;

    friend bool operator==(const PFQParams&, const PFQParams&) = default;
};

struct SeriesResult {
    HpReal value;
    long terms_used = 0;
    HpReal tail_estimate;
    bool terminated = false;
};

struct SeriesOptions {
    int digits = kDefaultDigits;
    long max_terms = 2'000'000;
    /// Relative truncation target for the tail-bound stopping rule;
    /// 10^-digits when unset.
    std::optional<double> rel_tol;
};

/// Thrown when max_terms is reached first; carries the best partial sum.
class BudgetExceeded : public HypError {
public:
    BudgetExceeded(const std::string& what, SeriesResult best)
        : HypError(ErrorKind::BudgetExceeded, what), best_(std::move(best)) {}
    const SeriesResult& best() const { return best_; }

private:
    SeriesResult best_;
};

/// sum(lower) - sum(upper); requires p = q + 1.
Rat convergence_margin(const PFQParams& p);

SeriesResult eval_pfq1(const PFQParams& p, const SeriesOptions& opts = {});
Rat eval_pfq1_exact(const PFQParams& p);

/// Finite sum of pFq(1) with real parameters, terms n = 0..last_index.
struct FiniteSum {
    HpReal value;
    HpReal largest_term;
};
FiniteSum sum_pfq1_finite(const std::vector<HpReal>& upper, const std::vector<HpReal>& lower, long last_index);

/// Gamma(e)Gamma(e-a-c) / (Gamma(e-a)Gamma(e-c)) = 2F1(a, c; e; 1).
GammaFactor gauss_2f1(const Rat& a, const Rat& c, const Rat& e);

/// 3F2(a, c, f+1; e, f; 1) = prefactor * gamma.
struct UnitShiftSum {
    Rat prefactor;
    GammaFactor gamma;
};
UnitShiftSum sum_3f2_unit_shift(const Rat& a, const Rat& c, const Rat& e, const Rat& f);

/// 3F2(a,b,c; d,e) = coefficient * 3F2(transformed).
struct ThomaeResult {
    GammaFactor coefficient;
    PFQParams transformed;
};
ThomaeResult thomae_3f2(const Rat& a, const Rat& b, const Rat& c, const Rat& d, const Rat& e);

/// Arguments of the psi-weighted series
///   sum_{k>=1} (a)_k (c)_k / ((e)_k k!) * (psi(b+k) - psi(b)).
struct PsiSeriesParams {
    Rat a, c, e, b;

    std::string str() const;
    friend bool operator==(const PsiSeriesParams&, const PsiSeriesParams&) = default;
};

SeriesResult eval_psi_series(const PsiSeriesParams& p, const SeriesOptions& opts = {});
Rat eval_psi_series_exact(const PsiSeriesParams& p);

/// The same value through its Kampe de Feriet double series, summed over
/// diagonals r + s = N. max_terms caps each summation index.
SeriesResult eval_kdf_check(const PsiSeriesParams& p, const SeriesOptions& opts = {.max_terms = 100'000});

} // namespace hypred
