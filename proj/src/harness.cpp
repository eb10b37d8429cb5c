#include "hypred/harness.hpp"

#include "hypred/errors.hpp"
#include "hypred/negshift.hpp"
#include "hypred/perturb.hpp"
#include "hypred/posshift.hpp"
#include "hypred/psibridge.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <sstream>
#include <thread>

namespace hypred {

namespace {

// ---- parameter draws -------------------------------------------------------

Rat draw_in(Rng& g, const Rat& lo, const Rat& hi, long max_den = 12) {
    const long q = std::uniform_int_distribution<long>(1, max_den)(g);
    // ceil(lo q) .. floor(hi q)
    mpz_class p_lo, p_hi;
    const mpq_class lq = lo.get() * q, hq = hi.get() * q;
    mpz_cdiv_q(p_lo.get_mpz_t(), lq.get_num_mpz_t(), lq.get_den_mpz_t());
    mpz_fdiv_q(p_hi.get_mpz_t(), hq.get_num_mpz_t(), hq.get_den_mpz_t());
    if (p_lo > p_hi)
        return lo;
    const long p = std::uniform_int_distribution<long>(p_lo.get_si(), p_hi.get_si())(g);
    return Rat(p, q);
}

Rat free_param(Tier t, Rng& g) {
    if (t == Tier::Numeric)
        return draw_in(g, Rat(1, 12), Rat(4));
    const long p = std::uniform_int_distribution<long>(-40, 40)(g);
    const long q = std::uniform_int_distribution<long>(1, 40)(g);
    return Rat(p, q);
}

// Small positive integer on the exact tier.
Rat top_a(Tier t, Rng& g, long lo = 1) {
    if (t == Tier::Numeric)
        return free_param(t, g);
    return Rat(std::uniform_int_distribution<long>(lo, 3)(g));
}

// Negative integer on the exact tier; this makes every series terminate.
Rat top_c(Tier t, Rng& g) {
    if (t == Tier::Numeric)
        return free_param(t, g);
    return Rat(-std::uniform_int_distribution<long>(1, 6)(g));
}

Rat margin(Rng& g) { return draw_in(g, Rat(2), Rat(6)); }

ParamList P(std::initializer_list<std::pair<const char*, Rat>> xs) {
    ParamList out;
    for (const auto& [n, v] : xs)
        out.push_back({n, v});
    return out;
}

// ---- term helpers ----------------------------------------------------------

PFQParams F(std::vector<Rat> up, std::vector<Rat> lo) { return PFQParams{std::move(up), std::move(lo)}; }

Term series(Rat c, PFQParams p) { return Term{std::move(c), std::nullopt, std::move(p)}; }
Term gamma_term(Rat c, GammaFactor g) { return Term{std::move(c), std::move(g), std::monostate{}}; }
Term constant(Rat c) { return Term{std::move(c), std::nullopt, std::monostate{}}; }

std::vector<Term> psi_terms(const PsiBridgeResult& r) {
    return {Term{r.psi_coeff1, std::nullopt, r.psi_args1}, Term{r.psi_coeff2, std::nullopt, r.psi_args2},
            gamma_term(r.gamma_coeff, r.gamma)};
}

NegParams neg(const ParamList& ps) {
    return {param(ps, "a"), param(ps, "b"), param(ps, "c"), param(ps, "e"), param(ps, "f")};
}

ParamTuple6 six(const ParamList& ps) {
    return {param(ps, "a"), param(ps, "b"), param(ps, "c"), param(ps, "d"), param(ps, "e"), param(ps, "f")};
}

// a, b, c, e, f with e closed so that e - a - c = margin + extra.
ParamList draw_neg(Tier t, Rng& g, long extra) {
    const Rat a = top_a(t, g), b = free_param(t, g), c = top_c(t, g), f = free_param(t, g);
    const Rat e = t == Tier::Exact ? free_param(t, g) : margin(g) + extra + a + c;
    return P({{"a", a}, {"b", b}, {"c", c}, {"e", e}, {"f", f}});
}

// a, b, c, d, e, f with e closed so that d + e - a - b - c = margin + extra.
ParamList draw_six(Tier t, Rng& g, long extra, long a_lo = 1) {
    const Rat a = top_a(t, g, a_lo), b = free_param(t, g), c = top_c(t, g), d = free_param(t, g),
              f = free_param(t, g);
    const Rat e = t == Tier::Exact ? free_param(t, g) : margin(g) + extra + a + b + c - d;
    return P({{"a", a}, {"b", b}, {"c", c}, {"d", d}, {"e", e}, {"f", f}});
}

// ---- numeric admissibility -------------------------------------------------

void require_convergent(const PFQParams& p) {
    const auto last = p.termination_index();
    for (const auto& l : p.lower)
        if (l.is_nonpositive_integer() && (!last || *last > -l.to_long()))
            throw PoleError("lower parameter at a pole");
    if (!last && convergence_margin(p) < Rat(2))
        throw DivergentError("margin below 2");
}

void require_convergent(const PsiSeriesParams& p) {
    const bool terminating = p.a.is_nonpositive_integer() || p.c.is_nonpositive_integer();
    if (p.e.is_nonpositive_integer() || p.b.is_nonpositive_integer())
        throw PoleError("psi series parameter at a pole");
    if (!terminating && p.e - p.a - p.c < Rat(2))
        throw DivergentError("margin below 2");
}

void require_admissible_numeric(const IdentityInstance& inst) {
    for (const auto* side : {&inst.lhs, &inst.rhs})
        for (const auto& t : *side) {
            if (t.coeff.is_zero())
                continue;
            if (t.gamma)
                for (const auto* args : {&t.gamma->numer, &t.gamma->denom})
                    for (const auto& x : *args)
                        if (x.is_nonpositive_integer())
                            throw PoleError("gamma argument at a pole");
            if (auto* p = std::get_if<PFQParams>(&t.object))
                require_convergent(*p);
            else if (auto* q = std::get_if<PsiSeriesParams>(&t.object))
                require_convergent(*q);
            else if (auto* k = std::get_if<KdfSeries>(&t.object)) {
                require_convergent(k->p);
                if (k->p.b.is_zero())
                    throw PoleError("b = 0");
            }
        }
}

// A lower parameter at a pole leaves the cancelled form of the identity
// undefined even when an upper parameter cuts the series off first.
void require_admissible_exact(const IdentityInstance& inst) {
    for (const auto* side : {&inst.lhs, &inst.rhs})
        for (const auto& t : *side) {
            if (auto* p = std::get_if<PFQParams>(&t.object)) {
                for (const auto& l : p->lower)
                    if (l.is_nonpositive_integer())
                        throw PoleError("lower parameter " + l.str() + " at a pole");
            } else if (auto* q = std::get_if<PsiSeriesParams>(&t.object)) {
                if (q->e.is_nonpositive_integer() || q->b.is_nonpositive_integer())
                    throw PoleError("psi series parameter at a pole");
            }
        }
}

// Sum, or best partial sum once the term budget runs out.
template <class Fn>
SeriesResult budgeted(Fn&& fn) {
    try {
        return fn();
    } catch (const BudgetExceeded& e) {
        return e.best();
    }
}

// ---- corollary 1 -----------------------------------------------------------

HpReal corollary1_root(const ParamList& ps, int digits) {
    const auto roots = corollary1_f_roots(param(ps, "a"), param(ps, "b"), param(ps, "c"), param(ps, "d"), digits);
    const long idx = param(ps, "root").to_long();
    if (idx < 0 || idx >= static_cast<long>(roots.roots.size()))
        throw NoRealRoot("corollary1: root index out of range");
    return roots.roots[static_cast<std::size_t>(idx)];
}

// The left side through the unit-shift split of Lemma 1's right side:
//   4F3(a,b,c,f+2; d,e,f) = W2 (3F2(a,b,c; d,e) + abc/(de mu2) 3F2(a+1,b+1,c+1; d+1,e+1))
// whose two series have margins 3 and 2 when d + e = a + b + c + 3.
NumericSides corollary1_numeric(const ParamList& ps, const EvalOptions& opts) {
    const Rat &a = param(ps, "a"), &b = param(ps, "b"), &c = param(ps, "c"), &d = param(ps, "d");
    const Rat e = a + b + c + 3 - d;
    const int work = opts.digits + 5;
    const HpReal f = corollary1_root(ps, work);
    const auto [W, mu] = w2_mu2_values<HpReal>(a, b, c, d, e, f);
    const SeriesOptions so{opts.digits, opts.max_terms, opts.rel_tol};
    const SeriesResult s0 = budgeted([&] { return eval_pfq1(F({a, b, c}, {d, e}), so); });
    const SeriesResult s1 = budgeted([&] { return eval_pfq1(F({a + 1, b + 1, c + 1}, {d + 1, e + 1}), so); });
    const HpReal k1 = W * HpReal(a * b * c / (d * e), work) / mu;
    const HpReal t0 = W * s0.value, t1 = k1 * s1.value;

    NumericSides out{t0 + t1, corollary1_value(a, b, c, d, f.with_digits(opts.digits)).with_digits(work),
                     HpReal(0L, work), abs(W) * s0.tail_estimate + abs(k1) * s1.tail_estimate,
                     s0.terms_used + s1.terms_used};
    out.scale = std::max({abs(out.lhs), abs(out.rhs), abs(t0), abs(t1)});
    return out;
}

ParamList corollary1_draw(Tier t, Rng& g) {
    const Rat a = free_param(t, g), b = free_param(t, g), c = free_param(t, g), d = free_param(t, g);
    const Rat e = a + b + c + 3 - d;
    const auto roots = corollary1_f_roots(a, b, c, d, 30);
    const long idx = std::uniform_int_distribution<long>(0, static_cast<long>(roots.roots.size()) - 1)(g);
    const HpReal& f = roots.roots[static_cast<std::size_t>(idx)];
    w2_mu2_values<HpReal>(a, b, c, d, e, f);
    corollary1_value(a, b, c, d, f);
    if (e.is_nonpositive_integer() || d.is_nonpositive_integer())
        throw PoleError("gamma argument at a pole");
    return P({{"a", a}, {"b", b}, {"c", c}, {"d", d}, {"root", Rat(idx)}});
}

// ---- registry --------------------------------------------------------------

std::string indexed(const std::string& family, const char* var, long v) {
    return family + "(" + var + "=" + std::to_string(v) + ")";
}

std::vector<IdentitySpec> build_registry() {
    std::vector<IdentitySpec> r;
    auto add = [&](std::string name, std::string family, auto draw, auto build) {
        r.push_back(IdentitySpec{std::move(name), std::move(family), true, true, draw, build, nullptr});
    };

    add("lemma1", "lemma1", [](Tier t, Rng& g) { return draw_six(t, g, 2); },
        [](const ParamList& ps) {
            const auto p = six(ps);
            const auto red = w2_mu2(p);
            return IdentityInstance{{series(1, F({p.a, p.b, p.c, p.f + 2}, {p.d, p.e, p.f}))},
                                    {series(red.W, F({p.a, p.b, p.c, red.mu + 1}, {p.d, p.e, red.mu}))}};
        });

    for (long m = 2; m <= 6; ++m)
        add(indexed("theorem1", "m", m), "theorem1", [m](Tier t, Rng& g) { return draw_six(t, g, m); },
            [m](const ParamList& ps) {
                const auto p = six(ps);
                const auto red = reduce_plus_m(p, m);
                return IdentityInstance{{series(1, F({p.a, p.b, p.c, p.f + m}, {p.d, p.e, p.f}))},
                                        {series(red.W, F({p.a, p.b, p.c, red.mu + 1}, {p.d, p.e, red.mu}))}};
            });

    add("killbottom", "killbottom",
        [](Tier t, Rng& g) {
            auto ps = draw_six(t, g, 2);
            if (t == Tier::Numeric) {
                // keep d - 1 positive; re-close e
                const Rat shift = 1;
                for (auto& [n, v] : ps)
                    if (n == "d" || n == "e")
                        v += n == "d" ? shift : -shift;
            }
            return ps;
        },
        [](const ParamList& ps) {
            const auto p = six(ps);
            const auto kb = killbottom(p.a, p.b, p.c, p.d, p.e, p.f);
            return IdentityInstance{{series(1, F({p.a, p.b, p.c, p.f + 1}, {p.d, p.e, p.f}))},
                                    {series(kb.coefficient, F({p.a, p.b, p.c, kb.eta + 1}, {p.d - 1, p.e, kb.eta}))}};
        });

    r.push_back(IdentitySpec{"corollary1", "corollary1", false, true, corollary1_draw, nullptr, corollary1_numeric});

    for (long m = 2; m <= 8; ++m)
        add(indexed("dec2", "m", m), "dec2", [](Tier t, Rng& g) { return draw_neg(t, g, 0); },
            [m](const ParamList& ps) {
                const auto p = neg(ps);
                IdentityInstance inst{{series(1, neg_series(p, m))}, {}};
                for (auto& [A, s] : expand_negative_shift(p, m))
                    inst.rhs.push_back(series(A, s));
                return inst;
            });

    for (long m = 0; m <= 8; ++m)
        add(indexed("theorem2", "m", m), "theorem2", [](Tier t, Rng& g) { return draw_neg(t, g, 1); },
            [m](const ParamList& ps) {
                const auto p = neg(ps);
                const auto rq = rq_reduce(p, m);
                return IdentityInstance{{series(1, neg_series(p, m))},
                                        {series(rq.R, neg_series(p, 1)), gamma_term(rq.Q, rq.gamma)}};
            });

    for (long k = 0; k <= 6; ++k)
        add(indexed("theorem3", "k", k), "theorem3", [](Tier t, Rng& g) { return draw_neg(t, g, 1); },
            [k](const ParamList& ps) {
                const auto p = neg(ps);
                const auto [A, B, C] = three_term_coeffs(p, k);
                return IdentityInstance{
                    {series(A, neg_series(p, k + 2)), series(B, neg_series(p, k + 1)), series(C, neg_series(p, k))},
                    {}};
            });

    for (long k = 0; k <= 6; ++k)
        add(indexed("eq-3term3F2", "k", k), "eq-3term3F2",
            [](Tier t, Rng& g) {
                auto ps = draw_neg(t, g, 0);
                ps.pop_back();  // no f
                return ps;
            },
            [k](const ParamList& ps) {
                const Rat &a = param(ps, "a"), &b = param(ps, "b"), &c = param(ps, "c"), &e = param(ps, "e");
                const auto [R1, R2] = three_term_3f2_coeffs(a, b, c, e, k);
                return IdentityInstance{{series(1, F({a + 1, b, c}, {b + k + 1, e}))},
                                        {series(R2, F({a, b, c}, {b + k + 1, e})),
                                         series(R1, F({a + 1, b, c}, {b + k + 2, e}))}};
            });

    add("eq-inverse", "eq-inverse", [](Tier t, Rng& g) { return draw_six(t, g, 1, 2); },
        [](const ParamList& ps) {
            const auto p = six(ps);
            const auto inv = inverse_transform(p.a, p.b, p.c, p.d, p.e, p.f);
            return IdentityInstance{{series(1, F({p.a, p.b, p.c, p.f + 1}, {p.d, p.e, p.f}))},
                                    {series(inv.coefficient, F({p.a - 1, p.b, p.c, inv.mu + 1}, {p.d, p.e, inv.mu}))}};
        });

    add("corollary2", "corollary2", [](Tier t, Rng& g) { return draw_neg(t, g, 1); },
        [](const ParamList& ps) {
            const auto p = neg(ps);
            const auto rq = corollary2(p);
            return IdentityInstance{{series(1, neg_series(p, 2))},
                                    {series(rq.R, neg_series(p, 1)), gamma_term(rq.Q, rq.gamma)}};
        });

    add("section3-example", "section3-example",
        [](Tier t, Rng& g) {
            const Rat a = top_a(t, g), c = top_c(t, g), f = free_param(t, g);
            Rat b, e;
            if (t == Tier::Exact) {
                // e - b - 1 a nonpositive integer terminates the right side
                e = free_param(t, g);
                b = e - 1 + std::uniform_int_distribution<long>(0, 5)(g);
            } else {
                b = 1 + free_param(t, g);
                e = margin(g) + a + c;
            }
            return P({{"a", a}, {"b", b}, {"c", c}, {"e", e}, {"f", f}});
        },
        [](const ParamList& ps) {
            const auto p = neg(ps);
            const auto id = section3_identity(p.a, p.b, p.c, p.e, p.f);
            return IdentityInstance{{Term{Rat(1), id.lhs_factor, id.lhs_series}},
                                    {constant(id.constant), series(id.series_coeff, id.rhs_series)}};
        });

    add("theorem4", "theorem4", [](Tier t, Rng& g) { return draw_neg(t, g, 1); },
        [](const ParamList& ps) {
            const auto p = neg(ps);
            return IdentityInstance{{series(1, neg_series(p, 1))}, psi_terms(theorem4_decompose(p))};
        });

    add("corollary3", "corollary3",
        [](Tier t, Rng& g) {
            auto ps = draw_neg(t, g, 0);
            ps.pop_back();
            return ps;
        },
        [](const ParamList& ps) {
            const Rat &a = param(ps, "a"), &b = param(ps, "b"), &c = param(ps, "c"), &e = param(ps, "e");
            return IdentityInstance{{series(1, F({a, c, b}, {e, b + 1}))}, psi_terms(corollary3_decompose(a, b, c, e))};
        });

    add("gauss", "gauss",
        [](Tier t, Rng& g) {
            const Rat a = top_a(t, g), c = top_c(t, g);
            const Rat e = t == Tier::Exact ? free_param(t, g) : margin(g) + a + c;
            return P({{"a", a}, {"c", c}, {"e", e}});
        },
        [](const ParamList& ps) {
            const Rat &a = param(ps, "a"), &c = param(ps, "c"), &e = param(ps, "e");
            const auto g = gauss_2f1(a, c, e);
            return IdentityInstance{{series(1, F({a, c}, {e}))}, {gamma_term(1, g)}};
        });

    add("3f2-unit-sum", "3f2-unit-sum",
        [](Tier t, Rng& g) {
            const Rat a = top_a(t, g), c = top_c(t, g), f = free_param(t, g);
            const Rat e = t == Tier::Exact ? free_param(t, g) : margin(g) + 1 + a + c;
            return P({{"a", a}, {"c", c}, {"e", e}, {"f", f}});
        },
        [](const ParamList& ps) {
            const Rat &a = param(ps, "a"), &c = param(ps, "c"), &e = param(ps, "e"), &f = param(ps, "f");
            const auto u = sum_3f2_unit_shift(a, c, e, f);
            return IdentityInstance{{series(1, F({a, c, f + 1}, {e, f}))}, {gamma_term(u.prefactor, u.gamma)}};
        });

    add("thomae", "thomae",
        [](Tier t, Rng& g) {
            Rat a, b, c, d, e;
            if (t == Tier::Exact) {
                // d = a - k keeps both sides terminating and the gamma factor rational
                a = top_a(t, g);
                c = top_c(t, g);
                d = a - std::uniform_int_distribution<long>(0, a.to_long() - 1)(g);
                b = free_param(t, g);
                e = free_param(t, g);
            } else {
                // the transformed series has margin a
                const Rat m = margin(g);
                a = m + draw_in(g, Rat(0), Rat(2));
                b = free_param(t, g);
                c = free_param(t, g);
                d = free_param(t, g);
                e = m + a + b + c - d;
            }
            return P({{"a", a}, {"b", b}, {"c", c}, {"d", d}, {"e", e}});
        },
        [](const ParamList& ps) {
            const Rat &a = param(ps, "a"), &b = param(ps, "b"), &c = param(ps, "c"), &d = param(ps, "d"),
                      &e = param(ps, "e");
            const auto th = thomae_3f2(a, b, c, d, e);
            return IdentityInstance{{series(1, F({a, b, c}, {d, e}))},
                                    {Term{Rat(1), th.coefficient, th.transformed}}};
        });

    r.push_back(IdentitySpec{
        "kdf-check", "kdf-check", false, true,
        [](Tier t, Rng& g) {
            const Rat a = free_param(t, g), c = free_param(t, g), b = free_param(t, g);
            return P({{"a", a}, {"c", c}, {"e", margin(g) + a + c}, {"b", b}});
        },
        [](const ParamList& ps) {
            const PsiSeriesParams p{param(ps, "a"), param(ps, "c"), param(ps, "e"), param(ps, "b")};
            return IdentityInstance{{Term{Rat(1), std::nullopt, p}}, {Term{Rat(1), std::nullopt, KdfSeries{p}}}};
        },
        nullptr});

    add("unit-negshift-3f2", "unit-negshift-3f2", [](Tier t, Rng& g) { return draw_neg(t, g, 0); },
        [](const ParamList& ps) {
            const auto p = neg(ps);
            const auto br = unit_negshift_to_3f2(p);
            return IdentityInstance{{series(1, neg_series(p, 1))},
                                    {series(br.series_coeff, br.series), gamma_term(br.gamma_coeff, br.gamma)}};
        });

    for (auto which : {Decomposition::Middle, Decomposition::Lower, Decomposition::Upper})
        for (long k = 0; k <= 2; ++k) {
            const std::string family = "decompose-" + to_string(which);
            add(indexed(family, "k", k), family, [](Tier t, Rng& g) { return draw_neg(t, g, 1); },
                [k, which](const ParamList& ps) {
                    const auto d = decompose_to_3f2(neg(ps), k, which);
                    return IdentityInstance{{series(1, d.source)},
                                            {series(d.shifted_coeff, d.shifted),
                                             series(d.unshifted_coeff, d.unshifted)}};
                });
        }
    return r;
}

// ---- evaluation ------------------------------------------------------------

Rat eval_term_exact(const Term& t) {
    if (t.coeff.is_zero())
        return Rat(0);
    Rat v = t.coeff;
    if (t.gamma) {
        auto g = rationalize_gamma_factor(*t.gamma);
        if (!g)
            throw NotTerminating("gamma factor " + t.gamma->str() + " is not rational");
        v *= *g;
    }
    if (auto* p = std::get_if<PFQParams>(&t.object))
        v *= eval_pfq1_exact(*p);
    else if (auto* q = std::get_if<PsiSeriesParams>(&t.object))
        v *= eval_psi_series_exact(*q);
    else if (std::holds_alternative<KdfSeries>(t.object))
        throw NotTerminating("the double series has no exact evaluation");
    return v;
}

std::string rejection_key(const HypError& e) {
    std::string what = e.what();
    if (what.size() > 60)
        what = what.substr(0, 60) + "...";
    return std::string(to_string(e.kind())) + ": " + what;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001B3ULL;
    }
    return h;
}

} // namespace

std::string to_string(Tier t) { return t == Tier::Exact ? "exact" : "numeric"; }

std::optional<Tier> parse_tier(const std::string& s) {
    if (s == "exact")
        return Tier::Exact;
    if (s == "numeric")
        return Tier::Numeric;
    return std::nullopt;
}

const Rat& param(const ParamList& ps, const std::string& name) {
    for (const auto& p : ps)
        if (p.name == name)
            return p.value;
    throw ShapeError("missing parameter " + name);
}

const std::vector<IdentitySpec>& registry() {
    static const std::vector<IdentitySpec> r = build_registry();
    return r;
}

const IdentitySpec* find_identity(const std::string& name) {
    for (const auto& s : registry())
        if (s.name == name)
            return &s;
    return nullptr;
}

std::vector<const IdentitySpec*> select_identities(const std::string& filter) {
    std::vector<const IdentitySpec*> out;
    for (const auto& s : registry())
        if (filter.empty() || s.name == filter || s.family == filter)
            out.push_back(&s);
    return out;
}

Rat eval_side_exact(const std::vector<Term>& side) {
    Rat sum(0);
    for (const auto& t : side)
        sum += eval_term_exact(t);
    return sum;
}

NumericSides eval_instance_numeric(const IdentityInstance& inst, const EvalOptions& opts) {
    const int work = opts.digits + 5;
    const SeriesOptions so{opts.digits, opts.max_terms, opts.rel_tol};
    NumericSides out{HpReal(0L, work), HpReal(0L, work), HpReal(0L, work), HpReal(0L, work), 0};
    for (int side = 0; side < 2; ++side)
        for (const auto& t : side == 0 ? inst.lhs : inst.rhs) {
            if (t.coeff.is_zero())
                continue;
            HpReal k(t.coeff, work);
            if (t.gamma)
                k *= eval_gamma_factor(*t.gamma, work);
            HpReal v = k;
            if (auto* p = std::get_if<PFQParams>(&t.object)) {
                const auto s = budgeted([&] { return eval_pfq1(*p, so); });
                v *= s.value;
                out.tail += abs(k) * s.tail_estimate;
                out.terms_used += s.terms_used;
            } else if (auto* q = std::get_if<PsiSeriesParams>(&t.object)) {
                const auto s = budgeted([&] { return eval_psi_series(*q, so); });
                v *= s.value;
                out.tail += abs(k) * s.tail_estimate;
                out.terms_used += s.terms_used;
            } else if (auto* d = std::get_if<KdfSeries>(&t.object)) {
                const auto s = budgeted([&] { return eval_kdf_check(d->p, so); });
                v *= s.value;
                out.tail += abs(k) * s.tail_estimate;
                out.terms_used += s.terms_used;
            }
            (side == 0 ? out.lhs : out.rhs) += v;
            out.scale = std::max(out.scale, abs(v));
        }
    out.scale = std::max({out.scale, abs(out.lhs), abs(out.rhs)});
    return out;
}

IdentityCase sample_params(const IdentitySpec& spec, Tier tier, std::uint64_t seed, const EvalOptions& opts,
                           int max_attempts) {
    if ((tier == Tier::Exact && !spec.exact) || (tier == Tier::Numeric && !spec.numeric))
        throw SamplingExhausted(spec.name + " has no " + to_string(tier) + " tier");
    Rng g(seed);
    std::map<std::string, int> rejected;
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        try {
            ParamList ps = spec.draw(tier, g);
            if (tier == Tier::Exact) {
                const auto inst = spec.build(ps);
                require_admissible_exact(inst);
                eval_side_exact(inst.lhs);
                eval_side_exact(inst.rhs);
            } else if (spec.build) {
                require_admissible_numeric(spec.build(ps));
            }
            (void)opts;
            return IdentityCase{spec.name, tier, seed, std::move(ps)};
        } catch (const HypError& e) {
            ++rejected[rejection_key(e)];
        } catch (const std::domain_error& e) {
            ++rejected[std::string("division by zero: ") + e.what()];
        }
    }
    std::ostringstream os;
    os << "no admissible " << to_string(tier) << " parameters for " << spec.name << " after " << max_attempts
       << " attempts; rejections:";
    for (const auto& [k, n] : rejected)
        os << " [" << n << "x " << k << "]";
    throw SamplingExhausted(os.str());
}

IdentityReport run_identity(const IdentitySpec& spec, const IdentityCase& c, const EvalOptions& opts) {
    const auto t0 = std::chrono::steady_clock::now();
    IdentityReport rep;
    rep.identity_case = c;
    try {
        if (c.tier == Tier::Exact) {
            const auto inst = spec.build(c.params);
            const Rat l = eval_side_exact(inst.lhs), r = eval_side_exact(inst.rhs);
            rep.lhs = l.str();
            rep.rhs = r.str();
            rep.pass = l == r;
            if (!rep.pass) {
                const int work = opts.digits;
                rep.rel_error = relative_difference(HpReal(l, work), HpReal(r, work)).to_double();
                rep.reason = "exact sides differ";
            }
        } else {
            const NumericSides s =
                spec.numeric_eval ? spec.numeric_eval(c.params, opts) : eval_instance_numeric(spec.build(c.params), opts);
            rep.lhs = s.lhs.str(opts.digits);
            rep.rhs = s.rhs.str(opts.digits);
            rep.terms_used = s.terms_used;
            const HpReal diff = abs(s.lhs - s.rhs);
            const HpReal rel = s.scale.is_zero() ? diff : diff / s.scale;
            rep.rel_error = rel.to_double();
            const double tail = s.scale.is_zero() ? s.tail.to_double() : (s.tail / s.scale).to_double();
            rep.tolerance = std::max(opts.tolerance, 10 * tail);
            rep.pass = rep.rel_error <= rep.tolerance;
            if (!rep.pass)
                rep.reason = "relative error above tolerance";
        }
    } catch (const HypError& e) {
        rep.pass = false;
        rep.reason = std::string(to_string(e.kind())) + ": " + e.what();
    } catch (const std::exception& e) {
        rep.pass = false;
        rep.reason = std::string("internal: ") + e.what();
    }
    rep.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

std::uint64_t case_seed(std::uint64_t base, const std::string& identity, Tier tier, int index) {
    std::uint64_t x = splitmix64(base) ^ fnv1a(identity);
    x = splitmix64(x + (tier == Tier::Numeric ? 0x5851F42D4C957F2DULL : 0));
    return splitmix64(x + static_cast<std::uint64_t>(index));
}

SuiteSummary run_suite(const SuiteOptions& opts) {
    struct Task {
        const IdentitySpec* spec;
        Tier tier;
        int index;
    };
    std::vector<Task> tasks;
    for (const auto* spec : select_identities(opts.filter))
        for (Tier t : opts.tiers) {
            if ((t == Tier::Exact && !spec->exact) || (t == Tier::Numeric && !spec->numeric))
                continue;
            for (int i = 0; i < opts.cases; ++i)
                tasks.push_back({spec, t, i});
        }

    SuiteSummary out;
    out.reports.resize(tasks.size());
    std::atomic<std::size_t> next{0};
    const auto perturbation = active_perturbation();
    auto worker = [&] {
        std::optional<ScopedPerturbation> scope;
        if (perturbation)
            scope.emplace(*perturbation);
        for (std::size_t i = next++; i < tasks.size(); i = next++) {
            const auto& task = tasks[i];
            const auto seed = case_seed(opts.seed, task.spec->name, task.tier, task.index);
            try {
                const auto c = sample_params(*task.spec, task.tier, seed, opts.eval);
                out.reports[i] = run_identity(*task.spec, c, opts.eval);
            } catch (const HypError& e) {
                IdentityReport rep;
                rep.identity_case = IdentityCase{task.spec->name, task.tier, seed, {}};
                rep.reason = std::string(to_string(e.kind())) + ": " + e.what();
                out.reports[i] = std::move(rep);
            }
        }
    };
    const int jobs = std::max(1, opts.jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j)
            pool.emplace_back(worker);
        for (auto& th : pool)
            th.join();
    }
    for (const auto& r : out.reports)
        (r.pass ? out.passed : out.failed)++;
    return out;
}

} // namespace hypred
