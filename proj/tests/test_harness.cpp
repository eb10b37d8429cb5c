#include "hypred/harness.hpp"
#include "hypred/negshift.hpp"
#include "hypred/perturb.hpp"

#include <doctest.h>

#include <set>

using namespace hypred;

namespace {

bool same_reports(const SuiteSummary& x, const SuiteSummary& y) {
    if (x.reports.size() != y.reports.size())
        return false;
    for (std::size_t i = 0; i < x.reports.size(); ++i) {
        const auto &a = x.reports[i], &b = y.reports[i];
        if (!(a.identity_case == b.identity_case) || a.lhs != b.lhs || a.rhs != b.rhs || a.pass != b.pass ||
            a.reason != b.reason || a.rel_error != b.rel_error || a.terms_used != b.terms_used)
            return false;
    }
    return true;
}

} // namespace

TEST_CASE("registry covers every identity family") {
    std::set<std::string> families;
    for (const auto& s : registry())
        families.insert(s.family);
    for (const char* f : {"lemma1", "theorem1", "killbottom", "corollary1", "dec2", "theorem2", "theorem3",
                          "eq-3term3F2", "eq-inverse", "corollary2", "section3-example", "theorem4", "corollary3",
                          "gauss", "3f2-unit-sum", "thomae", "kdf-check"})
        CHECK(families.count(f) == 1);
    CHECK(select_identities("theorem1").size() == 5);
    CHECK(find_identity("theorem2(m=4)") != nullptr);
    CHECK(find_identity("theorem2(m=99)") == nullptr);
}

TEST_CASE("sampling is deterministic") {
    const auto& spec = *find_identity("theorem3(k=2)");
    for (Tier t : {Tier::Exact, Tier::Numeric})
        CHECK(sample_params(spec, t, 99) == sample_params(spec, t, 99));
    CHECK(!(sample_params(spec, Tier::Exact, 99) == sample_params(spec, Tier::Exact, 100)));
    CHECK(case_seed(1, "gauss", Tier::Exact, 0) == case_seed(1, "gauss", Tier::Exact, 0));
    CHECK(case_seed(1, "gauss", Tier::Exact, 0) != case_seed(1, "gauss", Tier::Numeric, 0));
}

TEST_CASE("exact samples respect the tier constraints") {
    const auto& spec = *find_identity("theorem2(m=4)");
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto c = sample_params(spec, Tier::Exact, seed);
        const Rat &a = param(c.params, "a"), &cc = param(c.params, "c");
        CHECK((a >= Rat(1) && a <= Rat(3) && a.is_integer()));
        CHECK((cc >= Rat(-6) && cc <= Rat(-1) && cc.is_integer()));
        const NegParams p{a, param(c.params, "b"), cc, param(c.params, "e"), param(c.params, "f")};
        for (long j = 0; j <= 2; ++j)
            CHECK(three_term_coeffs(p, j).A != Rat(0));
        for (const auto& np : c.params)
            if (np.name != "a" && np.name != "c") {
                CHECK(abs(Rat(mpq_class(np.value.num()))) <= Rat(40));
                CHECK(Rat(mpq_class(np.value.den())) <= Rat(40));
            }
    }
}

TEST_CASE("numeric samples respect the margin") {
    const auto& spec = *find_identity("lemma1");
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto c = sample_params(spec, Tier::Numeric, seed);
        const Rat s = param(c.params, "d") + param(c.params, "e") - param(c.params, "a") - param(c.params, "b") -
                      param(c.params, "c") - 1;
        CHECK(s - 1 >= Rat(2));
    }
}

TEST_CASE("single identities") {
    const auto& t2 = *find_identity("theorem2(m=1)");
    for (Tier t : {Tier::Exact, Tier::Numeric}) {
        const auto rep = run_identity(t2, sample_params(t2, t, 5));
        CHECK(rep.pass);
        CHECK(rep.lhs == rep.rhs);
    }
    const auto& g = *find_identity("gauss");
    const IdentityCase c{"gauss", Tier::Exact, 0, {{"a", Rat(-1)}, {"c", Rat(3, 5)}, {"e", Rat(11, 4)}}};
    const auto rep = run_identity(g, c);
    CHECK(rep.pass);
    CHECK(rep.rel_error == 0);

    // a singular point is a recorded failure, not a crash
    const auto& t1 = *find_identity("theorem1(m=2)");
    const IdentityCase bad{"theorem1(m=2)", Tier::Exact, 0,
                           {{"a", Rat(1)}, {"b", Rat(1)}, {"c", Rat(-1)}, {"d", Rat(1)}, {"e", Rat(2)}, {"f", Rat(1)}}};
    const auto fail = run_identity(t1, bad);
    CHECK_FALSE(fail.pass);
    REQUIRE(fail.reason);
    CHECK(fail.reason->find("SingularReduction") != std::string::npos);
}

TEST_CASE("suite runs") {
    SuiteOptions o;
    o.filter = "theorem1";
    o.tiers = {Tier::Exact};
    o.cases = 10;
    const auto s = run_suite(o);
    CHECK(s.passed == 50);
    CHECK(s.all_passed());

    o.filter = "no-such-identity";
    const auto empty = run_suite(o);
    CHECK(empty.reports.empty());
    CHECK(empty.all_passed());
}

TEST_CASE("parallel and serial runs agree") {
    SuiteOptions o;
    o.tiers = {Tier::Exact};
    o.cases = 3;
    o.seed = 17;
    const auto serial = run_suite(o);
    o.jobs = 4;
    const auto parallel = run_suite(o);
    CHECK(same_reports(serial, parallel));
    CHECK(same_reports(serial, run_suite(o)));
}

TEST_CASE("workers inherit a perturbation") {
    SuiteOptions o;
    o.filter = "gauss";
    o.tiers = {Tier::Exact};
    o.cases = 4;
    o.jobs = 2;
    ScopedPerturbation guard(Formula::GaussFactor);
    CHECK(run_suite(o).failed == 4);
}
