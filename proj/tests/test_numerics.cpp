#include "hypred/errors.hpp"
#include "hypred/gamma.hpp"
#include "hypred/hpreal.hpp"
#include "hypred/rational.hpp"

#include <doctest.h>

#include <random>

using namespace hypred;

namespace {

// MPFR's own gamma and digamma serve as independent oracles here only.
HpReal mpfr_gamma_of(const Rat& x, int digits) {
    HpReal in(x, digits + 10), out(digits + 10);
    mpfr_gamma(out.raw(), in.raw(), MPFR_RNDN);
    return out;
}

HpReal mpfr_digamma_of(const Rat& x, int digits) {
    HpReal in(x, digits + 10), out(digits + 10);
    mpfr_digamma(out.raw(), in.raw(), MPFR_RNDN);
    return out;
}

bool close(const HpReal& a, const HpReal& b, long exponent) {
    return relative_difference(a, b) <= HpReal::pow10(exponent, 20);
}

bool abs_close(const HpReal& a, const HpReal& b, long exponent) {
    return abs(a - b) <= HpReal::pow10(exponent, 20);
}

Rat random_point(std::mt19937_64& g) {
    const long p = std::uniform_int_distribution<long>(1, 4000)(g);
    const long q = std::uniform_int_distribution<long>(1, 97)(g);
    Rat x(p, q);
    if (std::uniform_int_distribution<int>(0, 3)(g) == 0)
        x = -x + Rat(1, 7);  // some negative, non-integer points
    return x;
}

} // namespace

TEST_CASE("rational parsing and printing") {
    CHECK(Rat::parse("3/6") == Rat(1, 2));
    CHECK(Rat::parse("-7") == Rat(-7));
    CHECK(Rat(6, -4).str() == "-3/2");
    CHECK_THROWS_AS(Rat::parse("1/0"), ParseError);
    CHECK_THROWS_AS(Rat::parse("0.5"), ParseError);
    CHECK_THROWS_AS(Rat::parse(""), ParseError);
    CHECK_THROWS_AS(Rat(1) / Rat(0), std::domain_error);
}

TEST_CASE("pochhammer") {
    CHECK(pochhammer(Rat(7, 3), 0) == Rat(1));
    CHECK(pochhammer(Rat(1), 4) == Rat(24));
    CHECK(pochhammer(Rat(1, 2), 2) == Rat(3, 4));
    CHECK(pochhammer(Rat(-3), 5) == Rat(0));
    CHECK(factorial(10) == Rat(3628800));
}

TEST_CASE("gamma at classical points") {
    const int D = 40;
    CHECK(close(hp_gamma(Rat(5), D), HpReal(24L, D), 5 - D));
    CHECK(close(hp_gamma(Rat(1, 2), D), sqrt(HpReal::pi(D)), 5 - D));
    CHECK(close(hp_gamma(Rat(7, 3), D), mpfr_gamma_of(Rat(7, 3), D), 5 - D));
    CHECK(close(hp_gamma(Rat(-5, 2), D), mpfr_gamma_of(Rat(-5, 2), D), 5 - D));
    CHECK_THROWS_AS(hp_gamma(Rat(-3), D), PoleError);
    CHECK_THROWS_AS(hp_gamma(Rat(0), D), PoleError);
    CHECK(hp_rgamma(Rat(-3), D).is_zero());
}

TEST_CASE("digamma at classical points") {
    const int D = 40;
    const HpReal g = HpReal::euler_gamma(D);
    CHECK(abs_close(hp_digamma(HpReal(1L, D)), -g, 5 - D));
    CHECK(abs_close(hp_digamma(HpReal(2L, D)), HpReal(1L, D) - g, 5 - D));
    CHECK(abs_close(hp_digamma(HpReal(Rat(5, 2), D)), mpfr_digamma_of(Rat(5, 2), D), 5 - D));
    CHECK_THROWS_AS(hp_digamma(HpReal(-2L, D)), PoleError);
}

TEST_CASE("gamma and digamma against the mpfr oracle") {
    std::mt19937_64 g(7);
    for (int D : {30, 60}) {
        for (int i = 0; i < 60; ++i) {
            const Rat x = random_point(g);
            CAPTURE(x.str());
            CHECK(close(hp_gamma(x, D), mpfr_gamma_of(x, D), 5 - D));
            CHECK(abs_close(hp_digamma(HpReal(x, D)), mpfr_digamma_of(x, D), 5 - D));
        }
    }
}

TEST_CASE("recurrences hold to D-6 digits") {
    std::mt19937_64 g(11);
    const int D = 40;
    for (int i = 0; i < 100; ++i) {
        const Rat x = random_point(g);
        CAPTURE(x.str());
        const HpReal lhs = hp_gamma(x + 1, D);
        const HpReal rhs = HpReal(x, D) * hp_gamma(x, D);
        CHECK(close(lhs, rhs, 6 - D));
        const HpReal step = hp_digamma(HpReal(x + 1, D)) - hp_digamma(HpReal(x, D));
        CHECK(abs_close(step, HpReal(Rat(1) / x, D), 6 - D));
    }
}

TEST_CASE("gamma factor evaluation") {
    const int D = 40;
    CHECK(close(eval_gamma_factor({Rat(1), {Rat(3)}, {Rat(2), Rat(2)}}, D), HpReal(2L, D), 5 - D));
    CHECK(close(eval_gamma_factor({Rat(1, 2), {Rat(1, 2), Rat(1, 2)}, {Rat(1)}}, D), HpReal::pi(D) / 2L, 5 - D));
    CHECK(close(eval_gamma_factor({Rat(1), {Rat(4), Rat(1)}, {Rat(3), Rat(3)}}, D), HpReal(Rat(3, 2), D), 5 - D));
    CHECK_THROWS_AS(eval_gamma_factor({Rat(1), {Rat(-1)}, {}}, D), PoleError);
}

TEST_CASE("gamma factor rationalization") {
    const Rat e(7, 2);
    CHECK(rationalize_gamma_factor({Rat(1), {e}, {e - 2}}) == Rat(15, 4));

    const Rat a(2), c(-1), e2(7, 3);
    const GammaFactor gf{Rat(1), {e2, e2 - a - c}, {e2 - a, e2 - c}};
    const auto exact = rationalize_gamma_factor(gf);
    REQUIRE(exact);
    CHECK(close(HpReal(*exact, 50), eval_gamma_factor(gf, 50), -45));

    CHECK_FALSE(rationalize_gamma_factor({Rat(1), {Rat(1, 2)}, {Rat(1, 3)}}));
    // Gamma(-1/2)/Gamma(3/2) = (-2 sqrt(pi)) / (sqrt(pi)/2) = -4
    CHECK(rationalize_gamma_factor({Rat(1), {Rat(-1, 2)}, {Rat(3, 2)}}) == Rat(-4));
    CHECK_THROWS_AS(rationalize_gamma_factor({Rat(1), {Rat(0)}, {Rat(2)}}), PoleError);
}

TEST_CASE("precision bookkeeping") {
    const HpReal x(Rat(1, 3), 20), y(Rat(1, 3), 60);
    CHECK((x + y).digits() == 60);
    CHECK(x.with_digits(50).digits() == 50);
    CHECK_THROWS(HpReal(5));
}
