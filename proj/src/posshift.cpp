#include "hypred/posshift.hpp"

#include "hypred/gamma.hpp"

#include <map>
#include <optional>
#include <sstream>

namespace hypred {

namespace {

struct WV {
    Rat W;
    Rat V;  // W / mu
};

std::string where(long level, long shift) {
    return " at level " + std::to_string(level) + ", shift " + std::to_string(shift);
}

WV base_level(const ParamTuple6& p, long shift) {
    const Rat f = p.f + shift;
    if (f.is_zero())
        throw SingularReduction("f + j = 0" + where(1, shift));
    return {Rat(1), Rat(1) / f};
}

// One step of the recursion in the W / (W/mu) form:
//   W_{k+1} = W_k + abc V'_k / ((s-1) f)
//   V_{k+1} = V_k + (V'_k (ab+ac+bc-de+d+e-s) + (s-1) W'_k) / ((s-1) f)
// where primes are level-k values at the next shift.
WV step(const ParamTuple6& p, long level, long shift, const WV& here, const WV& next) {
    const ParamTuple6 q = p.shifted(shift);
    const Rat s1 = q.s() - 1;
    if (s1.is_zero())
        throw SingularReduction("s - 1 = 0" + where(level, shift));
    const Rat den = s1 * q.f;
    if (den.is_zero())
        throw SingularReduction("f = 0" + where(level, shift));
    const Rat abc = q.a * q.b * q.c;
    const Rat sum2 = q.a * q.b + q.a * q.c + q.b * q.c - q.d * q.e + q.d + q.e - q.s();
    return {here.W + abc * next.V / den, here.V + (next.V * sum2 + s1 * next.W) / den};
}

WV bottom_up(const ParamTuple6& p, long m) {
    std::vector<WV> row;
    for (long j = 0; j < m; ++j)
        row.push_back(base_level(p, j));
    for (long k = 1; k < m; ++k) {
        std::vector<WV> up;
        for (long j = 0; j + k < m; ++j)
            up.push_back(step(p, k, j, row[j], row[j + 1]));
        row = std::move(up);
    }
    return row.front();
}

class TopDown {
public:
    explicit TopDown(const ParamTuple6& p) : p_(p) {}

    const WV& get(long level, long shift) {
        const auto key = std::make_pair(level, shift);
        if (auto it = memo_.find(key); it != memo_.end())
            return it->second;
        WV v = level == 1 ? base_level(p_, shift)
                          : step(p_, level - 1, shift, get(level - 1, shift), get(level - 1, shift + 1));
        return memo_.emplace(key, std::move(v)).first->second;
    }

private:
    const ParamTuple6& p_;
    std::map<std::pair<long, long>, WV> memo_;
};

Rat horner(const std::vector<Rat>& coeffs, const Rat& x) {
    Rat r(0);
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
        r = r * x + *it;
    return r;
}

// Bisection on an interval whose endpoints have opposite signs.
Rat bisect(const std::vector<Rat>& poly, Rat lo, Rat hi, int digits) {
    const int slo = horner(poly, lo).sign();
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits + 5));
    const Rat eps(mpq_class(1, scale));
    Rat bound = std::max(abs(lo), abs(hi));
    if (bound < Rat(1))
        bound = Rat(1);
    while (hi - lo > eps * bound) {
        const Rat mid = (lo + hi) / 2;
        const int sm = horner(poly, mid).sign();
        if (sm == 0)
            return mid;
        (sm == slo ? lo : hi) = mid;
    }
    return (lo + hi) / 2;
}

} // namespace

ParamTuple6 ParamTuple6::shifted(long j) const {
    return {a + j, b + j, c + j, d + j, e + j, f + j};
}

std::string ParamTuple6::str() const {
    std::ostringstream os;
    os << "(a=" << a << ", b=" << b << ", c=" << c << ", d=" << d << ", e=" << e << ", f=" << f << ")";
    return os.str();
}

UnitShiftReduction w2_mu2(const ParamTuple6& p) {
    auto [W, mu] = w2_mu2_values<Rat>(p.a, p.b, p.c, p.d, p.e, p.f);
    ParamTuple6 target = p;
    target.f = mu;
    return {W, mu, target};
}

UnitShiftReduction reduce_plus_m(const ParamTuple6& p, long m, MemoOrder order) {
    if (m < 1)
        throw ShapeError("reduce_plus_m needs m >= 1, got " + std::to_string(m));
    if (p.f.is_zero())
        throw SingularReduction("f = 0");
    if (m == 1)
        return {Rat(1), p.f, p};

    const WV top = order == MemoOrder::BottomUp ? bottom_up(p, m) : TopDown(p).get(m, 0);
    if (top.V.is_zero())
        throw SingularReduction("W/mu = 0" + where(m, 0) + " (mu is infinite)");
    if (top.W.is_zero())
        throw SingularReduction("W = 0" + where(m, 0) + " (mu = 0)");
    const Rat W = tweak(Formula::WRecursion, top.W);
    const Rat mu = tweak(Formula::MuRecursion, top.W / top.V);
    ParamTuple6 target = p;
    target.f = mu;
    return {W, mu, target};
}

KillbottomResult killbottom(const Rat& a, const Rat& b, const Rat& c, const Rat& d, const Rat& e,
                            const Rat& mu) {
    const Rat den1 = (d - a - 1) * (d - b - 1) * (d - c - 1);
    if (den1.is_zero())
        throw SingularReduction("killbottom: (d-a-1)(d-b-1)(d-c-1) = 0");
    if (mu.is_zero())
        throw SingularReduction("killbottom: mu = 0");
    const Rat den2 = (d + e - a - b - c - 2) * (mu - d + 1);
    if (den2.is_zero())
        throw SingularReduction("killbottom: (d+e-a-b-c-2)(mu-d+1) = 0");

    const Rat abc = a * b * c;
    const Rat coefficient =
        (((d - b - 1) * (d - c - 1) - a * (d - b - c - 1)) * mu - abc) * (d - 1) / (den1 * mu);
    if (coefficient.is_zero())
        throw DegenerateCoefficient("killbottom: coefficient vanishes at mu = " + mu.str());
    const Rat eta = (abc + ((1 - d) * (d - a - b - c - 1) - a * b - a * c - b * c) * mu) / den2;
    if (eta.is_zero())
        throw SingularReduction("killbottom: eta = 0");
    return {tweak(Formula::KillbottomCoeff, coefficient), tweak(Formula::KillbottomEta, eta)};
}

std::vector<Rat> corollary1_polynomial(const Rat& a, const Rat& b, const Rat& c, const Rat& d) {
    const Rat e = a + b + c + 3 - d;
    const Rat s3 = a * b * c;
    const Rat s2 = a * b + a * c + b * c;
    const Rat k = s2 - (2 - d) * (1 - e);
    if (k.is_zero())
        throw SingularReduction("corollary1: s2 - (2-d)(1-e) = 0");
    const Rat u = s2 - d * e + d + e;
    const Rat g = 2 - e - 2 * d + d * e - s2;
    return {s3 * (s3 + (1 - d) * u) - k * s3 * (u + g),
            s3 * (3 - 2 * d) - k * (2 * s3 + g),
            s3 - k * g};
}

namespace {

std::optional<Rat> rational_sqrt(const Rat& x) {
    const mpz_class n = x.num(), d = x.den();
    if (sgn(n) < 0 || !mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t()))
        return std::nullopt;
    mpz_class rn, rd;
    mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
    return Rat(mpq_class(rn, rd));
}

} // namespace

Corollary1Roots corollary1_f_roots(const Rat& a, const Rat& b, const Rat& c, const Rat& d, int digits) {
    auto poly = corollary1_polynomial(a, b, c, d);
    const Rat& c0 = poly[0];
    const Rat& c1 = poly[1];
    const Rat& c2 = poly[2];

    std::vector<Rat> exact;
    std::vector<std::pair<Rat, Rat>> brackets;
    Corollary1Roots out;
    if (c2.is_zero()) {
        if (c1.is_zero()) {
            if (c0.is_zero())
                throw IdenticallyZero("corollary1: constraint holds for every f");
            throw NoRealRoot("corollary1: constraint reduces to a nonzero constant");
        }
        exact.push_back(-c0 / c1);
    } else {
        const Rat disc = c1 * c1 - 4 * c2 * c0;
        const Rat vertex = -c1 / (2 * c2);
        if (disc.sign() < 0)
            throw NoRealRoot("corollary1: complex conjugate roots only");
        if (disc.is_zero()) {
            exact.push_back(vertex);
        } else if (auto r = rational_sqrt(disc)) {
            exact.push_back(vertex - *r / (2 * c2));
            exact.push_back(vertex + *r / (2 * c2));
        } else {
            const Rat bound = 1 + std::max(abs(c1 / c2), abs(c0 / c2));
            brackets.emplace_back(-bound, vertex);
            brackets.emplace_back(vertex, bound);
        }
    }

    const int work = digits + 10;
    std::vector<HpReal> candidates;
    for (const auto& r : exact)
        candidates.emplace_back(r, work);
    for (const auto& [lo, hi] : brackets)
        candidates.emplace_back(bisect(poly, lo, hi, work), work);

    const Rat s3 = a * b * c;
    const Rat u = a * b + a * c + b * c - d * (a + b + c + 3 - d) + d + (a + b + c + 3 - d);
    const HpReal tiny = HpReal::pow10(-(digits - 10), work);
    for (const auto& f : candidates) {
        // Denominator of the right side of the constraint.
        const HpReal quad = HpReal(s3, work) + f * f + f;
        const HpReal lin = HpReal(1 - d, work) * (HpReal(u, work) + f * 2);
        const HpReal scale = abs(quad) + abs(lin) + HpReal(1L, work);
        // f = 0 or -1 puts a pole in the lower parameter f itself
        const bool pole = abs(f * (f + 1L)) < tiny;
        auto& bucket = pole || abs(quad + lin) < tiny * scale ? out.spurious : out.roots;
        bucket.push_back(f.with_digits(digits));
    }
    if (out.roots.empty())
        throw NoRealRoot("corollary1: every real root of the cleared polynomial is spurious");
    return out;
}

HpReal corollary1_value(const Rat& a, const Rat& b, const Rat& c, const Rat& d, const HpReal& f_in) {
    const int digits = f_in.digits();
    const int work = digits + 10;
    const HpReal f = f_in.with_digits(work);
    const HpReal tiny = HpReal::pow10(-(digits - 5), work);
    auto lift = [work](const Rat& r) { return HpReal(r, work); };
    auto vanishes = [&](const HpReal& x, const HpReal& scale) {
        return abs(x) < tiny * (abs(scale) + HpReal(1L, work));
    };

    const Rat e = a + b + c + 3 - d;
    const Rat s3 = a * b * c;
    const Rat s2 = a * b + a * c + b * c;
    if (s3.is_zero())
        throw SingularReduction("corollary1: abc = 0");
    const Rat den1 = (d - a - 1) * (d - b - 1) * (d - c - 1);
    if (den1.is_zero())
        throw SingularReduction("corollary1: (d-a-1)(d-b-1)(d-c-1) = 0");

    const HpReal mu_den = lift(s2 - d * e + d + e) + f * 2;
    if (vanishes(mu_den, f))
        throw SingularReduction("corollary1: s2-de+d+e+2f = 0");
    const HpReal f2 = f * (f + 1);
    if (vanishes(f2, f))
        throw SingularReduction("corollary1: (f)_2 = 0");
    const HpReal mu = (lift(s3) + f2) / mu_den;
    if (vanishes(mu, f2))
        throw SingularReduction("corollary1: mu = 0");

    const HpReal bracket = lift((d - b - 1) * (d - c - 1) - a * (d - b - c - 1)) * mu - lift(s3);
    HpReal value = bracket * (f2 + lift(s3)) / (lift(s3 * den1) * f2 * mu);
    value *= hp_gamma(d, work) * hp_gamma(e, work);
    value *= hp_rgamma(a, work) * hp_rgamma(b, work) * hp_rgamma(c, work);
    return tweak(Formula::Corollary1Value, value.with_digits(digits));
}

} // namespace hypred
