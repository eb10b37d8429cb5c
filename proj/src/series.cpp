#include "hypred/series.hpp"

#include "hypred/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hypred {

namespace {

constexpr int kGuardDigits = 10;
constexpr int kSmallRunLength = 20;

std::string join(const std::vector<Rat>& xs) {
    std::ostringstream os;
    for (std::size_t i = 0; i < xs.size(); ++i)
        os << (i ? "," : "") << xs[i];
    return os.str();
}

std::optional<long> first_nonpositive_integer(std::initializer_list<const Rat*> xs) {
    std::optional<long> n;
    for (const Rat* x : xs)
        if (x->is_nonpositive_integer()) {
            const long k = -x->to_long();
            n = n ? std::min(*n, k) : k;
        }
    return n;
}

// A lower parameter -N makes (lower)_k vanish for k > N; only an error when
// the series reaches such a k (or never terminates).
void check_lower_pole(const Rat& lower, std::optional<long> last_index, const std::string& what) {
    if (!lower.is_nonpositive_integer())
        return;
    const long n = -lower.to_long();
    if (!last_index || *last_index > n)
        throw PoleError(what + ": lower parameter " + lower.str() +
                        " is reached before the series terminates");
}

// Smallest index from which the term ratio is in its asymptotic regime.
long asymptotic_start(const std::vector<Rat>& params) {
    double biggest = 0;
    for (const auto& p : params)
        biggest = std::max(biggest, std::abs(p.to_double()));
    return static_cast<long>(2 * biggest) + 10;
}

double magnitude(const HpReal& x) { return std::abs(x.to_double()); }

// Running state of a one-index series sum_{n} t_n weight_n with relative
// stopping rules. Everything stays in mpfr without temporaries.
class SeriesDriver {
public:
    SeriesDriver(const SeriesOptions& opts, double margin, long asymptotic_from, bool log_weighted)
        : opts_(opts),
          work_(opts.digits + kGuardDigits),
          sum_(0L, work_),
          margin_(margin),
          asymptotic_from_(asymptotic_from),
          log_weighted_(log_weighted),
          small_(std::pow(10.0, -opts.digits - 10)),
          tol_(opts.rel_tol.value_or(std::pow(10.0, -opts.digits))) {}

    int work() const { return work_; }

    /// Adds term n; returns true when the sum may stop after it.
    bool add(const HpReal& term, long n) {
        sum_ += term;
        last_ = magnitude(term);
        last_index_ = n;
        const double s = magnitude(sum_);
        small_run_ = (last_ < small_ * s) ? small_run_ + 1 : 0;
        if (small_run_ >= kSmallRunLength)
            return true;
        return n >= asymptotic_from_ && tail() <= tol_ * s;
    }

    /// Tail model: |t_n| ~ C n^(-1-margin) (times log n for psi weights).
    double tail() const {
        const double n = static_cast<double>(std::max(last_index_, 1L));
        double factor = 1.0 / margin_;
        if (log_weighted_)
            factor += 1.0 / (margin_ * margin_ * std::log(std::max(n, 2.0)));
        return last_ * n * factor;
    }

    SeriesResult finish(long terms, bool terminated) const {
        SeriesResult r{sum_.with_digits(opts_.digits), terms, HpReal(0L, opts_.digits), terminated};
        if (!terminated)
            r.tail_estimate = HpReal(tail(), opts_.digits);
        return r;
    }

    [[noreturn]] void exceeded(long terms, const std::string& what) const {
        std::ostringstream os;
        os << what << ": " << terms << " terms without reaching tolerance (tail estimate "
           << tail() << ")";
        throw BudgetExceeded(os.str(), finish(terms, false));
    }

private:
    const SeriesOptions& opts_;
    int work_;
    HpReal sum_;
    double margin_;
    long asymptotic_from_;
    bool log_weighted_;
    double small_;
    double tol_;
    double last_ = 0;
    long last_index_ = 0;
    int small_run_ = 0;
};

std::vector<HpReal> to_reals(const std::vector<Rat>& xs, int digits) {
    std::vector<HpReal> out;
    out.reserve(xs.size());
    for (const auto& x : xs)
        out.emplace_back(x, digits);
    return out;
}

} // namespace

std::optional<long> PFQParams::termination_index() const {
    std::optional<long> n;
    for (const auto& u : upper)
        if (u.is_nonpositive_integer()) {
            const long k = -u.to_long();
            n = n ? std::min(*n, k) : k;
        }
    return n;
}

std::string PFQParams::str() const {
    std::ostringstream os;
    os << upper.size() << "F" << lower.size() << "(" << join(upper) << ";" << join(lower) << ")";
    return os.str();
}

Rat convergence_margin(const PFQParams& p) {
    if (p.upper.size() != p.lower.size() + 1)
        throw ShapeError("convergence margin needs p = q+1, got " + p.str());
    Rat m(0);
    for (const auto& l : p.lower)
        m += l;
    for (const auto& u : p.upper)
        m -= u;
    return m;
}

Rat eval_pfq1_exact(const PFQParams& p) {
    const auto last = p.termination_index();
    if (!last)
        throw NotTerminating("exact evaluation needs a terminating series: " + p.str());
    for (const auto& l : p.lower)
        check_lower_pole(l, last, p.str());

    Rat sum(0);
    Rat term(1);
    for (long n = 0;; ++n) {
        sum += term;
        if (n == *last)
            return sum;
        Rat num(1);
        for (const auto& u : p.upper)
            num *= u + Rat(n);
        Rat den(n + 1);
        for (const auto& l : p.lower)
            den *= l + Rat(n);
        term *= num / den;
    }
}

SeriesResult eval_pfq1(const PFQParams& params, const SeriesOptions& opts) {
    // Canonical order makes the result independent of parameter order.
    PFQParams p = params;
    std::sort(p.upper.begin(), p.upper.end());
    std::sort(p.lower.begin(), p.lower.end());

    const auto last = p.termination_index();
    double margin = 1;
    if (!last) {
        const Rat m = convergence_margin(p);
        if (m.sign() <= 0)
            throw DivergentError("series diverges at unit argument (margin " + m.str() + "): " + p.str());
        margin = m.to_double();
    }
    for (const auto& l : p.lower)
        check_lower_pole(l, last, p.str());

    std::vector<Rat> all = p.upper;
    all.insert(all.end(), p.lower.begin(), p.lower.end());
    SeriesDriver driver(opts, margin, asymptotic_start(all), false);
    const int work = driver.work();

    auto up = to_reals(p.upper, work);
    auto lo = to_reals(p.lower, work);
    HpReal term(1L, work), num(work), den(work);

    for (long n = 0;; ++n) {
        const bool may_stop = driver.add(term, n);
        if (last && n == *last)
            return driver.finish(n + 1, true);
        if (!last && may_stop)
            return driver.finish(n + 1, false);
        if (n + 1 >= opts.max_terms)
            driver.exceeded(n + 1, "eval_pfq1 " + p.str());

        mpfr_set_ui(num.raw(), 1, MPFR_RNDN);
        for (auto& u : up) {
            mpfr_mul(num.raw(), num.raw(), u.raw(), MPFR_RNDN);
            mpfr_add_ui(u.raw(), u.raw(), 1, MPFR_RNDN);
        }
        mpfr_set_si(den.raw(), n + 1, MPFR_RNDN);
        for (auto& l : lo) {
            mpfr_mul(den.raw(), den.raw(), l.raw(), MPFR_RNDN);
            mpfr_add_ui(l.raw(), l.raw(), 1, MPFR_RNDN);
        }
        mpfr_mul(term.raw(), term.raw(), num.raw(), MPFR_RNDN);
        mpfr_div(term.raw(), term.raw(), den.raw(), MPFR_RNDN);
    }
}

FiniteSum sum_pfq1_finite(const std::vector<HpReal>& upper, const std::vector<HpReal>& lower, long last_index) {
    int digits = kMinDigits;
    for (const auto& x : upper)
        digits = std::max(digits, x.digits());
    for (const auto& x : lower)
        digits = std::max(digits, x.digits());
    const int work = digits + kGuardDigits;
    HpReal term(1L, work), sum(0L, work), largest(0L, work);
    for (long n = 0;; ++n) {
        sum += term;
        if (abs(term) > largest)
            largest = abs(term);
        if (n == last_index)
            return {sum.with_digits(digits), largest.with_digits(digits)};
        HpReal num(1L, work), den(n + 1, work);
        for (const auto& u : upper)
            num *= u + n;
        for (const auto& l : lower)
            den *= l + n;
        if (den.is_zero())
            throw PoleError("finite sum: lower parameter reaches zero at n = " + std::to_string(n));
        term *= num / den;
    }
}

GammaFactor gauss_2f1(const Rat& a, const Rat& c, const Rat& e) {
    if ((e - a - c).sign() <= 0 && !first_nonpositive_integer({&a, &c}))
        throw DivergentError("Gauss sum needs e-a-c > 0 or a terminating series");
    return GammaFactor{tweak(Formula::GaussFactor, Rat(1)), {e, e - a - c}, {e - a, e - c}};
}

UnitShiftSum sum_3f2_unit_shift(const Rat& a, const Rat& c, const Rat& e, const Rat& f) {
    if (f.is_zero())
        throw PoleError("3F2 unit-shift sum: f = 0");
    const Rat excess = e - a - c - 1;
    if (excess.sign() <= 0 && !first_nonpositive_integer({&a, &c}))
        throw DivergentError("3F2 unit-shift sum needs e-a-c-1 > 0 or a terminating series");
    return UnitShiftSum{tweak(Formula::UnitSumPrefactor, (excess * f + a * c) / f),
                        GammaFactor{Rat(1), {e, excess}, {e - a, e - c}}};
}

ThomaeResult thomae_3f2(const Rat& a, const Rat& b, const Rat& c, const Rat& d, const Rat& e) {
    const Rat s = d + e - a - b - c;
    if (s.sign() <= 0 && !first_nonpositive_integer({&a, &b, &c}))
        throw DivergentError("Thomae transformation needs d+e-a-b-c > 0, got " + s.str());
    return ThomaeResult{
        GammaFactor{tweak(Formula::ThomaeCoefficient, Rat(1)), {d, e, s}, {a, s + b, s + c}},
        PFQParams{{d - a, e - a, s}, {s + b, s + c}}};
}

std::string PsiSeriesParams::str() const {
    std::ostringstream os;
    os << "2F1hat(" << a << "," << c << ";" << e << "|" << b << ")";
    return os.str();
}

namespace {

struct PsiPlan {
    std::optional<long> last;  // last index k with a nonzero term
    double margin = 1;
};

PsiPlan plan_psi_series(const PsiSeriesParams& p) {
    PsiPlan plan;
    if (auto n = first_nonpositive_integer({&p.a, &p.c}))
        plan.last = *n;
    if (!plan.last) {
        const Rat m = p.e - p.a - p.c;
        if (m.sign() <= 0)
            throw DivergentError("psi series needs e-a-c > 0: " + p.str());
        plan.margin = m.to_double();
    }
    // (e)_k vanishes for k > -e; 1/(b+j) for j = 0..k-1.
    check_lower_pole(p.e, plan.last, p.str());
    if (p.b.is_nonpositive_integer()) {
        const long j = -p.b.to_long();
        if (!plan.last || j <= *plan.last - 1)
            throw PoleError(p.str() + ": b + j = 0 at j = " + std::to_string(j));
    }
    return plan;
}

} // namespace

Rat eval_psi_series_exact(const PsiSeriesParams& p) {
    if (!first_nonpositive_integer({&p.a, &p.c}))
        throw NotTerminating("exact psi series needs a or c a nonpositive integer: " + p.str());
    const PsiPlan plan = plan_psi_series(p);
    Rat sum(0), term(1), harmonic(0);
    for (long k = 1; k <= *plan.last; ++k) {
        term *= (p.a + Rat(k - 1)) * (p.c + Rat(k - 1)) / ((p.e + Rat(k - 1)) * Rat(k));
        harmonic += Rat(1) / (p.b + Rat(k - 1));
        sum += term * harmonic;
    }
    return sum;
}

SeriesResult eval_psi_series(const PsiSeriesParams& p, const SeriesOptions& opts) {
    const PsiPlan plan = plan_psi_series(p);
    SeriesDriver driver(opts, plan.margin, asymptotic_start({p.a, p.c, p.e, p.b}), true);
    const int work = driver.work();
    if (plan.last && *plan.last == 0)
        return driver.finish(0, true);

    HpReal a(p.a, work), c(p.c, work), e(p.e, work), b(p.b, work);
    HpReal term(1L, work), harmonic(0L, work), weighted(work), num(work), den(work), inv(work);
    for (long k = 1;; ++k) {
        // term_k = term_{k-1} (a+k-1)(c+k-1) / ((e+k-1) k)
        mpfr_mul(num.raw(), a.raw(), c.raw(), MPFR_RNDN);
        mpfr_mul_si(den.raw(), e.raw(), k, MPFR_RNDN);
        mpfr_mul(term.raw(), term.raw(), num.raw(), MPFR_RNDN);
        mpfr_div(term.raw(), term.raw(), den.raw(), MPFR_RNDN);
        // harmonic_k = harmonic_{k-1} + 1/(b+k-1), accumulated directly
        mpfr_ui_div(inv.raw(), 1, b.raw(), MPFR_RNDN);
        mpfr_add(harmonic.raw(), harmonic.raw(), inv.raw(), MPFR_RNDN);
        mpfr_mul(weighted.raw(), term.raw(), harmonic.raw(), MPFR_RNDN);

        const bool may_stop = driver.add(weighted, k);
        if (plan.last && k == *plan.last)
            return driver.finish(k, true);
        if (!plan.last && may_stop)
            return driver.finish(k, false);
        if (k >= opts.max_terms)
            driver.exceeded(k, "eval_psi_series " + p.str());
        a += 1;
        c += 1;
        e += 1;
        b += 1;
    }
}

SeriesResult eval_kdf_check(const PsiSeriesParams& p, const SeriesOptions& opts) {
    if (p.b.is_zero() || p.e.is_zero())
        throw PoleError("Kampe de Feriet prefactor ac/(be) has b or e = 0: " + p.str());
    const Rat prefactor = tweak(Formula::KdfPrefactor, p.a * p.c / (p.b * p.e));
    const int work = opts.digits + kGuardDigits;
    if (prefactor.is_zero())
        return SeriesResult{HpReal(0L, opts.digits), 0, HpReal(0L, opts.digits), true};

    // The joint factor (a+1)_N (c+1)_N / ((e+1)_N (2)_N) vanishes for N >= -a
    // (a <= -1 integer) and likewise for c.
    const Rat a1 = p.a + 1, c1 = p.c + 1, e1 = p.e + 1, b1 = p.b + 1;
    std::optional<long> last;
    if (auto n = first_nonpositive_integer({&a1, &c1}))
        last = *n;
    double margin = 1;
    if (!last) {
        const Rat m = p.e - p.a - p.c;
        if (m.sign() <= 0)
            throw DivergentError("Kampe de Feriet series needs e-a-c > 0: " + p.str());
        margin = m.to_double();
    }
    check_lower_pole(e1, last, "kdf " + p.str());
    check_lower_pole(b1, last, "kdf " + p.str());

    SeriesDriver driver(opts, margin, asymptotic_start({p.a, p.c, p.e, p.b}), true);
    HpReal joint(1L, work), xr(1L, work), row(0L, work), diag(work), num(work), den(work);
    HpReal a_n(a1, work), c_n(c1, work), e_n(e1, work), b_r(p.b, work), b1_r(b1, work);
    for (long n = 0;; ++n) {
        // Diagonal r + s = n. The y-factor (1)_s / s! is identically one, so the
        // inner sum over r is the running sum of x_r = (1)_r (b)_r / ((b+1)_r r!).
        mpfr_add(row.raw(), row.raw(), xr.raw(), MPFR_RNDN);
        mpfr_mul(diag.raw(), joint.raw(), row.raw(), MPFR_RNDN);

        const bool may_stop = driver.add(diag, n);
        if (last && n == *last) {
            SeriesResult r = driver.finish(n + 1, true);
            r.value *= HpReal(prefactor, opts.digits);
            return r;
        }
        if (!last && may_stop) {
            SeriesResult r = driver.finish(n + 1, false);
            r.value *= HpReal(prefactor, opts.digits);
            r.tail_estimate *= abs(HpReal(prefactor, opts.digits));
            return r;
        }
        if (n + 1 >= opts.max_terms) {
            try {
                driver.exceeded(n + 1, "eval_kdf_check " + p.str());
            } catch (const BudgetExceeded& e) {
                SeriesResult r = e.best();
                r.value *= HpReal(prefactor, opts.digits);
                r.tail_estimate *= abs(HpReal(prefactor, opts.digits));
                throw BudgetExceeded(e.what(), std::move(r));
            }
        }

        mpfr_mul(num.raw(), a_n.raw(), c_n.raw(), MPFR_RNDN);
        mpfr_mul_si(den.raw(), e_n.raw(), n + 2, MPFR_RNDN);
        mpfr_mul(joint.raw(), joint.raw(), num.raw(), MPFR_RNDN);
        mpfr_div(joint.raw(), joint.raw(), den.raw(), MPFR_RNDN);
        a_n += 1;
        c_n += 1;
        e_n += 1;

        mpfr_mul(xr.raw(), xr.raw(), b_r.raw(), MPFR_RNDN);
        mpfr_div(xr.raw(), xr.raw(), b1_r.raw(), MPFR_RNDN);
        b_r += 1;
        b1_r += 1;
    }
}

} // namespace hypred
