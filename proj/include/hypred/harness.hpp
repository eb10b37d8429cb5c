#pragma once

#include "hypred/gamma.hpp"
#include "hypred/hpreal.hpp"
#include "hypred/rational.hpp"
#include "hypred/series.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

namespace hypred {

enum class Tier { Exact, Numeric };
std::string to_string(Tier t);
std::optional<Tier> parse_tier(const std::string& s);

struct NamedParam {
    std::string name;
    Rat value;
    friend bool operator==(const NamedParam&, const NamedParam&) = default;
};
using ParamList = std::vector<NamedParam>;

const Rat& param(const ParamList& ps, const std::string& name);

struct IdentityCase {
    std::string identity;
    Tier tier = Tier::Exact;
    std::uint64_t seed = 0;
    ParamList params;
    friend bool operator==(const IdentityCase&, const IdentityCase&) = default;
};

/// Kampe de Feriet double series standing for a psi series.
struct KdfSeries {
    PsiSeriesParams p;
};

/// coeff * [gamma] * object, where object is 1, a pFq(1), a psi series or
/// its double-series form.
struct Term {
    Rat coeff;
    std::optional<GammaFactor> gamma;
    std::variant<std::monostate, PFQParams, PsiSeriesParams, KdfSeries> object;
};

struct IdentityInstance {
    std::vector<Term> lhs;
    std::vector<Term> rhs;
};

struct EvalOptions {
    int digits = 30;
    long max_terms = 2'000'000;
    double rel_tol = 1e-12;
    double tolerance = 1e-9;
};

struct NumericSides {
    HpReal lhs, rhs;
    HpReal scale;  // max(|lhs|, |rhs|, largest |term|)
    HpReal tail;   // summed truncation estimates, in absolute terms
    long terms_used = 0;
};

using Rng = std::mt19937_64;

struct IdentitySpec {
    std::string name;  // full name, e.g. "theorem1(m=3)"
    std::string family;  // e.g. "theorem1"
    bool exact = true;
    bool numeric = true;
    /// Draws a raw parameter set; may throw HypError to reject.
    std::function<ParamList(Tier, Rng&)> draw;
    /// Both sides as terms; throws HypError when the reduction is singular.
    std::function<IdentityInstance(const ParamList&)> build;
    /// Replaces build-based numeric evaluation when set.
    std::function<NumericSides(const ParamList&, const EvalOptions&)> numeric_eval;
};

const std::vector<IdentitySpec>& registry();
const IdentitySpec* find_identity(const std::string& name);
/// Registry entries whose full name or family equals the filter (all when empty).
std::vector<const IdentitySpec*> select_identities(const std::string& filter);

Rat eval_side_exact(const std::vector<Term>& side);
NumericSides eval_instance_numeric(const IdentityInstance& inst, const EvalOptions& opts);

/// Deterministic in (identity, tier, seed). Throws SamplingExhausted with a
/// histogram of rejection reasons.
IdentityCase sample_params(const IdentitySpec& spec, Tier tier, std::uint64_t seed,
                           const EvalOptions& opts = {}, int max_attempts = 4000);

struct IdentityReport {
    IdentityCase identity_case;
    std::string lhs, rhs;
    double rel_error = 0;
    double tolerance = 0;
    bool pass = false;
    std::optional<std::string> reason;
    long terms_used = 0;
    double elapsed_ms = 0;
};

IdentityReport run_identity(const IdentitySpec& spec, const IdentityCase& c, const EvalOptions& opts = {});

struct SuiteOptions {
    std::string filter;
    std::vector<Tier> tiers{Tier::Exact, Tier::Numeric};
    int cases = 10;
    std::uint64_t seed = 1;
    int jobs = 1;
    EvalOptions eval;
};

struct SuiteSummary {
    std::vector<IdentityReport> reports;
    int passed = 0;
    int failed = 0;
    bool all_passed() const { return failed == 0; }
};

/// Reports are ordered by (identity, tier, case index) regardless of jobs.
/// Worker threads inherit the caller's active perturbation.
SuiteSummary run_suite(const SuiteOptions& opts);

std::uint64_t case_seed(std::uint64_t base, const std::string& identity, Tier tier, int index);

} // namespace hypred
