// One line per acceptance criterion; exit status 0 iff every criterion passes.
#include "hypred/errors.hpp"
#include "hypred/gamma.hpp"
#include "hypred/harness.hpp"
#include "hypred/negshift.hpp"
#include "hypred/perturb.hpp"
#include "hypred/posshift.hpp"
#include "hypred/series.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

using namespace hypred;

namespace {

constexpr int kExactCases = 200;
constexpr int kNumericCases = 50;
constexpr double kNumericRelTol = 1e-9;
constexpr double kLemma1Seconds = 10;
constexpr double kTheorem1Seconds = 60;
constexpr double kNumericSeconds = 15 * 60;
constexpr int kCorollary1Samples = 25;
constexpr int kCorollary1Digits = 40;
constexpr int kCorollary1Slack = 12;  // agreement to 10^(-D+12)
constexpr int kKernelPoints = 100;
constexpr int kKernelDigits = 40;
constexpr int kKernelSlack = 6;  // D-6 digits
constexpr double kDoublingRelTol = 1e-24;
constexpr int kMutationExactCases = 5;
constexpr int kMutationNumericCases = 3;
constexpr std::uint64_t kSeed = 20240601;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
    bool pass;
    std::string detail;
};

int failures = 0;

void report(int n, const std::string& what, const std::function<Outcome()>& check) {
    Outcome o;
    try {
        o = check();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass)
        ++failures;
    std::printf("criterion %2d: %s  %s  [%s]\n", n, o.pass ? "PASS" : "FAIL", what.c_str(), o.detail.c_str());
    std::fflush(stdout);
}

SuiteSummary suite(const std::string& filter, Tier tier, int cases, std::uint64_t seed = kSeed) {
    SuiteOptions o;
    o.filter = filter;
    o.tiers = {tier};
    o.cases = cases;
    o.seed = seed;
    return run_suite(o);
}

std::string first_failure(const SuiteSummary& s) {
    for (const auto& r : s.reports)
        if (!r.pass)
            return "; first failure " + r.identity_case.identity + " seed " + std::to_string(r.identity_case.seed) +
                   (r.reason ? ": " + *r.reason : "");
    return "";
}

std::string counts(const SuiteSummary& s) {
    std::ostringstream os;
    os << s.passed << " passed, " << s.failed << " failed" << first_failure(s);
    return os.str();
}

NegParams neg_of(const ParamList& ps) {
    return {param(ps, "a"), param(ps, "b"), param(ps, "c"), param(ps, "e"), param(ps, "f")};
}

Outcome exact_families(const std::vector<std::string>& filters, int expected_per_identity) {
    int passed = 0, failed = 0, identities = 0;
    std::string why;
    for (const auto& f : filters) {
        identities += static_cast<int>(select_identities(f).size());
        const auto s = suite(f, Tier::Exact, kExactCases);
        passed += s.passed;
        failed += s.failed;
        if (why.empty())
            why = first_failure(s);
    }
    const bool ok = failed == 0 && passed == identities * expected_per_identity;
    return {ok, std::to_string(passed) + " passed, " + std::to_string(failed) + " failed" + why};
}

Rat draw_exact_free(std::mt19937_64& g) {
    return Rat(std::uniform_int_distribution<long>(-40, 40)(g), std::uniform_int_distribution<long>(1, 40)(g));
}

} // namespace

int main() {
    report(1, "Lemma 1, exact tier, 200 cases, < 10 s", [] {
        const auto t0 = Clock::now();
        const auto s = suite("lemma1", Tier::Exact, kExactCases);
        const double t = seconds_since(t0);
        return Outcome{s.failed == 0 && s.passed == kExactCases && t < kLemma1Seconds,
                       counts(s) + ", " + std::to_string(t) + " s"};
    });

    report(2, "Theorem 1, m = 2..6, exact tier, 200 cases each, closed form at m = 2, < 60 s", [] {
        const auto t0 = Clock::now();
        const auto s = suite("theorem1", Tier::Exact, kExactCases);
        const double t = seconds_since(t0);
        int closed_form_checked = 0, closed_form_mismatch = 0;
        for (const auto& r : s.reports) {
            if (r.identity_case.identity != "theorem1(m=2)")
                continue;
            const auto& ps = r.identity_case.params;
            const ParamTuple6 p{param(ps, "a"), param(ps, "b"), param(ps, "c"),
                                param(ps, "d"), param(ps, "e"), param(ps, "f")};
            const auto rec = reduce_plus_m(p, 2);
            const auto closed = w2_mu2(p);
            ++closed_form_checked;
            if (!(rec.W == closed.W && rec.mu == closed.mu))
                ++closed_form_mismatch;
        }
        const bool ok = s.failed == 0 && s.passed == 5 * kExactCases && closed_form_checked == kExactCases &&
                        closed_form_mismatch == 0 && t < kTheorem1Seconds;
        return Outcome{ok, counts(s) + ", m=2 closed form " + std::to_string(closed_form_checked - closed_form_mismatch) +
                               "/" + std::to_string(closed_form_checked) + ", " + std::to_string(t) + " s"};
    });

    report(3, "Theorem 3, three-term residual exactly 0, k = 0..6, 200 cases each",
           [] { return exact_families({"theorem3"}, kExactCases); });

    report(4, "Theorem 2, m = 0..8, and Corollary 2, exact tier; m = 2 equals Corollary 2", [] {
        auto o = exact_families({"theorem2", "corollary2"}, kExactCases);
        const auto s = suite("theorem2(m=2)", Tier::Exact, kExactCases);
        int agree = 0;
        for (const auto& r : s.reports) {
            const auto p = neg_of(r.identity_case.params);
            const auto a = rq_reduce(p, 2), b = corollary2(p);
            if (a.R == b.R && a.Q == b.Q && a.gamma == b.gamma)
                ++agree;
        }
        o.pass = o.pass && agree == kExactCases;
        o.detail += ", m=2 vs Corollary 2 " + std::to_string(agree) + "/" + std::to_string(kExactCases);
        return o;
    });

    report(5, "negative-shift expansion exact for m = 2..8; sum A_q = 1 for m <= 10; printed A_q inconsistent", [] {
        auto o = exact_families({"dec2"}, kExactCases);
        std::mt19937_64 g(kSeed);
        int sums = 0, bad_sums = 0;
        for (int i = 0; i < 50; ++i) {
            Rat b = draw_exact_free(g);
            if (b.is_nonpositive_integer() || (b + 1).is_nonpositive_integer())
                continue;
            for (long m = 1; m <= 10; ++m) {
                try {
                    Rat sum(0);
                    for (long q = 0; q < m; ++q)
                        sum += partial_fraction_Aq(b, m, q);
                    ++sums;
                    if (sum != Rat(1))
                        ++bad_sums;
                } catch (const PoleError&) {
                }
            }
        }
        const Rat b(3, 7);
        const Rat printed = partial_fraction_Aq_printed(b, 2, 0) + partial_fraction_Aq_printed(b, 2, 1);
        const bool printed_inconsistent = printed != Rat(1);
        o.pass = o.pass && sums > 0 && bad_sums == 0 && printed_inconsistent;
        o.detail += ", sum A_q = 1 in " + std::to_string(sums - bad_sums) + "/" + std::to_string(sums) +
                    ", printed form at m=2, n=0 sums to " + printed.str() + " (expected-fail fixture)";
        return o;
    });

    report(6, "Theorem 4 and Corollary 3, exact tier, 200 cases each",
           [] { return exact_families({"theorem4", "corollary3"}, kExactCases); });

    report(7, "numeric tier, every identity, 50 cases, relative error <= 1e-9, < 15 min", [] {
        const auto t0 = Clock::now();
        SuiteOptions o;
        o.tiers = {Tier::Numeric};
        o.cases = kNumericCases;
        o.seed = kSeed;
        const auto s = run_suite(o);
        const double t = seconds_since(t0);
        int above = 0;
        double worst = 0;
        for (const auto& r : s.reports) {
            worst = std::max(worst, r.rel_error);
            if (r.rel_error > kNumericRelTol)
                ++above;
        }
        int numeric_identities = 0;
        for (const auto& spec : registry())
            numeric_identities += spec.numeric;
        const bool ok = s.failed == 0 && above == 0 && s.passed == numeric_identities * kNumericCases &&
                        t < kNumericSeconds;
        std::ostringstream os;
        os << counts(s) << ", worst relative error " << worst << ", " << t << " s";
        return Outcome{ok, os.str()};
    });

    report(8, "Corollary 1 closed form vs terminating 4F3 at a real root, 25 samples, 1e-(D-12) at D = 40", [] {
        const int D = kCorollary1Digits;
        std::mt19937_64 g(kSeed);
        int done = 0, bad = 0, attempts = 0;
        std::string why;
        while (done < kCorollary1Samples && attempts < 100000) {
            ++attempts;
            const Rat a = draw_exact_free(g), b = draw_exact_free(g), d = draw_exact_free(g);
            const Rat c(-std::uniform_int_distribution<long>(1, 6)(g));
            const Rat e = a + b + c + 3 - d;
            if (d.is_nonpositive_integer() || e.is_nonpositive_integer() || a.is_nonpositive_integer() ||
                b.is_nonpositive_integer())
                continue;
            try {
                const auto roots = corollary1_f_roots(a, b, c, d, D + 10);
                const HpReal& f = roots.roots[std::uniform_int_distribution<std::size_t>(0, roots.roots.size() - 1)(g)];
                const HpReal closed = corollary1_value(a, b, c, d, f.with_digits(D));
                const int W = D + 10;
                const auto direct = sum_pfq1_finite({HpReal(a, W), HpReal(b, W), HpReal(c, W), f + 2L},
                                                    {HpReal(d, W), HpReal(e, W), f}, -c.to_long());
                const HpReal scale = std::max(HpReal(1L, W), direct.largest_term);
                ++done;
                if (abs(closed - direct.value) > HpReal::pow10(kCorollary1Slack - D, 20) * scale) {
                    ++bad;
                    if (why.empty())
                        why = "; mismatch at a=" + a.str() + " b=" + b.str() + " c=" + c.str() + " d=" + d.str();
                }
            } catch (const HypError&) {
            }
        }
        return Outcome{done == kCorollary1Samples && bad == 0,
                       std::to_string(done - bad) + "/" + std::to_string(done) + " agree" + why};
    });

    report(9, "Gamma and psi recurrences to D-6 digits on 100 points; 30 vs 60 digits within 1e-24", [] {
        const int D = kKernelDigits;
        std::mt19937_64 g(kSeed);
        int bad = 0;
        for (int i = 0; i < kKernelPoints; ++i) {
            Rat x(std::uniform_int_distribution<long>(-400, 4000)(g), std::uniform_int_distribution<long>(1, 97)(g));
            if (x.is_nonpositive_integer())
                x += Rat(1, 2);
            const HpReal tol = HpReal::pow10(kKernelSlack - D, 20);
            if (relative_difference(hp_gamma(x + 1, D), HpReal(x, D) * hp_gamma(x, D)) > tol)
                ++bad;
            if (abs(hp_digamma(HpReal(x + 1, D)) - hp_digamma(HpReal(x, D)) - HpReal(Rat(1) / x, D)) > tol)
                ++bad;
        }
        // fixed truncation target so both precisions stop at the same term
        const std::vector<PFQParams> series{
            {{Rat(1, 2), Rat(1, 3), Rat(1, 4), Rat(9, 5)}, {Rat(3), Rat(7, 2), Rat(4, 5)}},
            {{Rat(1, 2), Rat(1, 2)}, {Rat(4)}},
            {{Rat(2, 3), Rat(5, 4), Rat(7, 3)}, {Rat(9, 2), Rat(11, 3)}},
            {{Rat(-7), Rat(1, 3), Rat(5, 2), Rat(4, 3)}, {Rat(2, 7), Rat(9, 4), Rat(1, 3)}},
        };
        double worst = 0;
        for (const auto& p : series) {
            const auto lo = eval_pfq1(p, {.digits = 30, .rel_tol = 1e-15});
            const auto hi = eval_pfq1(p, {.digits = 60, .rel_tol = 1e-15});
            worst = std::max(worst, relative_difference(lo.value, hi.value).to_double());
        }
        const PsiSeriesParams q{Rat(1, 2), Rat(1, 3), Rat(3), Rat(5, 4)};
        const auto plo = eval_psi_series(q, {.digits = 30, .rel_tol = 1e-10});
        const auto phi = eval_psi_series(q, {.digits = 60, .rel_tol = 1e-10});
        worst = std::max(worst, relative_difference(plo.value, phi.value).to_double());
        std::ostringstream os;
        os << 2 * kKernelPoints - bad << "/" << 2 * kKernelPoints << " recurrence checks, worst 30/60 difference "
           << worst;
        return Outcome{bad == 0 && worst < kDoublingRelTol, os.str()};
    });

    report(10, "perturbing any coefficient formula by 1e-6 makes the suite fail", [] {
        // The numeric-only identities run only when the exact tier saw nothing.
        auto run = [](bool stop_early) {
            SuiteSummary total;
            auto add = [&](const SuiteSummary& s) {
                total.passed += s.passed;
                total.failed += s.failed;
            };
            add(suite("", Tier::Exact, kMutationExactCases));
            for (const auto& spec : registry())
                if (!spec.exact && !(stop_early && total.failed > 0))
                    add(suite(spec.name, Tier::Numeric, kMutationNumericCases));
            return total;
        };
        const auto baseline = run(false);
        if (!baseline.all_passed())
            return Outcome{false, "unperturbed baseline fails: " + std::to_string(baseline.failed)};
        std::vector<std::string> missed;
        for (Formula f : all_formulas()) {
            ScopedPerturbation guard(f);
            if (run(true).failed == 0)
                missed.emplace_back(to_string(f));
        }
        std::string detail = std::to_string(all_formulas().size() - missed.size()) + "/" +
                             std::to_string(all_formulas().size()) + " perturbations detected, baseline " +
                             std::to_string(baseline.passed) + " passes";
        for (const auto& m : missed)
            detail += "; undetected " + m;
        return Outcome{missed.empty(), detail};
    });

    std::printf("%s\n", failures == 0 ? "all criteria pass" : (std::to_string(failures) + " criteria fail").c_str());
    return failures == 0 ? 0 : 1;
}
