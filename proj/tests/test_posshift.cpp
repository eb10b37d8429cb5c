#include "hypred/errors.hpp"
#include "hypred/posshift.hpp"
#include "hypred/series.hpp"

#include <doctest.h>

#include <random>

using namespace hypred;

namespace {

PFQParams shifted_series(const ParamTuple6& p, long m) { return {{p.a, p.b, p.c, p.f + m}, {p.d, p.e, p.f}}; }
PFQParams unit_series(const ParamTuple6& p, const Rat& mu) { return {{p.a, p.b, p.c, mu + 1}, {p.d, p.e, mu}}; }

bool close(const HpReal& a, const HpReal& b, long exponent) {
    return relative_difference(a, b) <= HpReal::pow10(exponent, 20);
}

Rat small(std::mt19937_64& g) {
    return Rat(std::uniform_int_distribution<long>(-30, 30)(g), std::uniform_int_distribution<long>(1, 30)(g));
}

} // namespace

TEST_CASE("closed form for a shift of two") {
    const ParamTuple6 z{Rat(0), Rat(1, 3), Rat(1, 4), Rat(3), Rat(4), Rat(2, 5)};
    CHECK(w2_mu2(z).W == Rat(1));

    const ParamTuple6 p{Rat(1, 2), Rat(1, 3), Rat(1, 4), Rat(3), Rat(4), Rat(2, 5)};
    const auto r = w2_mu2(p);
    const SeriesOptions so{.digits = 30, .rel_tol = 1e-25};
    const auto lhs = eval_pfq1(shifted_series(p, 2), so);
    const auto rhs = eval_pfq1(unit_series(p, r.mu), so);
    CHECK(close(lhs.value, HpReal(r.W, 30) * rhs.value, -20));

    const ParamTuple6 t{Rat(1), Rat(2, 3), Rat(-2), Rat(3, 2), Rat(13, 2), Rat(4, 7)};
    const auto rt = w2_mu2(t);
    CHECK(eval_pfq1_exact(shifted_series(t, 2)) == rt.W * eval_pfq1_exact(unit_series(t, rt.mu)));

    // the templated form agrees with the Rat form
    const auto hp = w2_mu2_values<HpReal>(p.a, p.b, p.c, p.d, p.e, HpReal(p.f, 40));
    CHECK(close(hp.W, HpReal(r.W, 40), -38));
    CHECK(close(hp.mu, HpReal(r.mu, 40), -38));

    // s - 1 = 0
    CHECK_THROWS_AS(w2_mu2({Rat(1), Rat(1), Rat(1), Rat(2), Rat(3), Rat(1, 2)}), SingularReduction);
    CHECK_THROWS_AS(w2_mu2({Rat(1), Rat(1), Rat(1), Rat(4), Rat(3), Rat(-1)}), SingularReduction);
}

TEST_CASE("reduction of f+m") {
    const ParamTuple6 p{Rat(1, 2), Rat(1, 3), Rat(1, 4), Rat(3), Rat(4), Rat(2, 5)};
    const auto one = reduce_plus_m(p, 1);
    CHECK(one.W == Rat(1));
    CHECK(one.mu == p.f);

    const auto two = reduce_plus_m(p, 2);
    CHECK(two.W == w2_mu2(p).W);
    CHECK(two.mu == w2_mu2(p).mu);

    const ParamTuple6 t{Rat(1), Rat(2, 3), Rat(-3), Rat(3, 2), Rat(13, 2), Rat(4, 7)};
    for (long m = 1; m <= 6; ++m) {
        CAPTURE(m);
        const auto r = reduce_plus_m(t, m);
        CHECK(eval_pfq1_exact(shifted_series(t, m)) == r.W * eval_pfq1_exact(unit_series(t, r.mu)));
        CHECK(r.params.f == r.mu);
    }

    const ParamTuple6 n{Rat(1, 2), Rat(1, 3), Rat(1, 4), Rat(9), Rat(4), Rat(2, 5)};
    const auto r4 = reduce_plus_m(n, 4);
    const SeriesOptions so{.digits = 30, .rel_tol = 1e-20};
    CHECK(close(eval_pfq1(shifted_series(n, 4), so).value,
                HpReal(r4.W, 30) * eval_pfq1(unit_series(n, r4.mu), so).value, -15));
    CHECK_THROWS_AS(reduce_plus_m(n, 0), ShapeError);
}

TEST_CASE("memo orders agree") {
    std::mt19937_64 g(3);
    int compared = 0;
    for (int i = 0; i < 200 && compared < 60; ++i) {
        const ParamTuple6 p{small(g), small(g), small(g), small(g), small(g), small(g)};
        const long m = 2 + i % 5;
        try {
            const auto up = reduce_plus_m(p, m, MemoOrder::BottomUp);
            const auto down = reduce_plus_m(p, m, MemoOrder::TopDown);
            CHECK(up.W == down.W);
            CHECK(up.mu == down.mu);
            ++compared;
        } catch (const SingularReduction&) {
            CHECK_THROWS_AS(reduce_plus_m(p, m, MemoOrder::TopDown), SingularReduction);
        }
    }
    CHECK(compared >= 30);
}

TEST_CASE("killing the lower parameter d") {
    const Rat a(1), b(2, 3), c(-2), d(3, 2), e(13, 2), mu(4, 7);
    const auto kb = killbottom(a, b, c, d, e, mu);
    CHECK(eval_pfq1_exact({{a, b, c, mu + 1}, {d, e, mu}}) ==
          kb.coefficient * eval_pfq1_exact({{a, b, c, kb.eta + 1}, {d - 1, e, kb.eta}}));

    const Rat x(1, 2), y(1, 3), z(1, 4), dd(7, 2), ee(5);
    const Rat degenerate = x * y * z / ((dd - y - 1) * (dd - z - 1) - x * (dd - y - z - 1));
    CHECK_THROWS_AS(killbottom(x, y, z, dd, ee, degenerate), DegenerateCoefficient);

    const Rat m(2, 5);
    const auto nk = killbottom(x, y, z, dd, ee, m);
    const SeriesOptions so{.digits = 30, .rel_tol = 1e-14};
    const auto lhs = eval_pfq1({{x, y, z, m + 1}, {dd, ee, m}}, so);
    const auto rhs = eval_pfq1({{x, y, z, nk.eta + 1}, {dd - 1, ee, nk.eta}}, so);
    CHECK(relative_difference(lhs.value, HpReal(nk.coefficient, 30) * rhs.value) <= HpReal(1e-9, 20));
}

TEST_CASE("real roots of the unit-shift constraint") {
    const int D = 40;
    std::mt19937_64 g(5);
    int with_roots = 0;
    for (int i = 0; i < 200; ++i) {
        const Rat a = small(g), b = small(g), c = small(g), d = small(g);
        try {
            const auto roots = corollary1_f_roots(a, b, c, d, D);
            CHECK(roots.roots.size() <= 2);
            const auto k = corollary1_polynomial(a, b, c, d);
            for (const auto& f : roots.roots) {
                const HpReal res = HpReal(k[0], D + 10) + HpReal(k[1], D + 10) * f + HpReal(k[2], D + 10) * f * f;
                const HpReal scale = abs(HpReal(k[0], D)) + abs(HpReal(k[1], D) * f) + abs(HpReal(k[2], D) * f * f);
                CHECK(abs(res) <= HpReal::pow10(10 - D, 20) * scale);
            }
            ++with_roots;
        } catch (const NoRealRoot&) {
        } catch (const IdenticallyZero&) {
        } catch (const SingularReduction&) {
        }
    }
    CHECK(with_roots > 20);
}

TEST_CASE("degenerate constraint does not crash") {
    try {
        const auto r = corollary1_f_roots(Rat(0), Rat(1, 3), Rat(2, 5), Rat(7, 4), 30);
        CHECK(r.roots.size() <= 2);
    } catch (const IdenticallyZero&) {
    } catch (const NoRealRoot&) {
    } catch (const SingularReduction&) {
    }
}

TEST_CASE("closed form at a root, terminating c") {
    const int D = 40;
    const Rat a(1, 2), b(2, 3);
    int checked = 0;
    for (long cn = 1; cn <= 4; ++cn)
        for (long dn = 1; dn <= 12; ++dn) {
            const Rat c(-cn), d(dn, 5);
            const Rat e = a + b + c + 3 - d;
            Corollary1Roots roots;
            try {
                roots = corollary1_f_roots(a, b, c, d, D + 10);
            } catch (const HypError&) {
                continue;
            }
            for (const auto& f : roots.roots) {
                HpReal v(D);
                try {
                    v = corollary1_value(a, b, c, d, f.with_digits(D));
                } catch (const SingularReduction&) {
                    continue;
                }
                const auto s = sum_pfq1_finite({HpReal(a, D + 10), HpReal(b, D + 10), HpReal(c, D + 10), f + 2L},
                                               {HpReal(d, D + 10), HpReal(e, D + 10), f}, cn);
                CHECK(abs(v - s.value) <= HpReal::pow10(12 - D, 20) * std::max(HpReal(1L, 20), s.largest_term));
                ++checked;
            }
        }
    CHECK(checked >= 10);
    CHECK_THROWS_AS(corollary1_value(a, b, Rat(1, 3), Rat(0), HpReal(Rat(3, 7), D)), PoleError);
}

TEST_CASE("closed form at a root, nonterminating") {
    const int D = 30;
    const Rat a(1, 2), b(2, 3), c(3, 4), d(5, 2);
    const Rat e = a + b + c + 3 - d;
    const auto roots = corollary1_f_roots(a, b, c, d, D + 5);
    REQUIRE(!roots.roots.empty());
    const SeriesOptions so{.digits = D, .rel_tol = 1e-11};
    for (const auto& f : roots.roots) {
        const auto [W, mu] = w2_mu2_values<HpReal>(a, b, c, d, e, f);
        const auto s0 = eval_pfq1({{a, b, c}, {d, e}}, so);
        const auto s1 = eval_pfq1({{a + 1, b + 1, c + 1}, {d + 1, e + 1}}, so);
        const HpReal lhs = W * (s0.value + HpReal(a * b * c / (d * e), D + 5) / mu * s1.value);
        CHECK(relative_difference(lhs, corollary1_value(a, b, c, d, f.with_digits(D))) <= HpReal(1e-9, 20));
    }
}
