// hypred: evaluate, reduce and verify hypergeometric identities at unit argument.
#include "hypred/errors.hpp"
#include "hypred/harness.hpp"
#include "hypred/negshift.hpp"
#include "hypred/posshift.hpp"
#include "hypred/psibridge.hpp"
#include "hypred/series.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace hypred;
using nlohmann::ordered_json;

namespace {

enum Exit { Ok = 0, VerifyFailed = 1, BadInput = 2, Internal = 3 };

struct Defaults {
    int digits = 50;
    long max_terms = 2'000'000;
    int jobs = 1;
};

// key = value lines; '#' starts a comment.
Defaults read_config(const std::string& path) {
    Defaults d;
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open config file " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos)
            line.erase(h);
        const auto eq = line.find('=');
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        if (trim(line).empty())
            continue;
        if (eq == std::string::npos)
            throw ParseError(path + ":" + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
        try {
            if (key == "digits")
                d.digits = std::stoi(val);
            else if (key == "maxTerms")
                d.max_terms = std::stol(val);
            else if (key == "jobs")
                d.jobs = std::stoi(val);
            else
                throw ParseError(path + ":" + std::to_string(lineno) + ": unknown key " + key);
        } catch (const std::logic_error&) {
            throw ParseError(path + ":" + std::to_string(lineno) + ": bad value for " + key);
        }
    }
    return d;
}

std::vector<Rat> parse_list(const std::string& s) {
    std::vector<Rat> out;
    if (s.empty())
        return out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(Rat::parse(item));
    return out;
}

ordered_json rats(const std::vector<Rat>& xs) {
    ordered_json j = ordered_json::array();
    for (const auto& x : xs)
        j.push_back(x.str());
    return j;
}

ordered_json to_json(const PFQParams& p) { return {{"upper", rats(p.upper)}, {"lower", rats(p.lower)}}; }

ordered_json to_json(const GammaFactor& g) {
    return {{"prefactor", g.prefactor.str()}, {"numer", rats(g.numer)}, {"denom", rats(g.denom)}};
}

ordered_json to_json(const IdentityReport& r, bool timing) {
    ordered_json params = ordered_json::object();
    for (const auto& p : r.identity_case.params)
        params[p.name] = p.value.str();
    ordered_json j{{"identity", r.identity_case.identity},
                   {"tier", to_string(r.identity_case.tier)},
                   {"seed", r.identity_case.seed},
                   {"params", params},
                   {"lhs", r.lhs},
                   {"rhs", r.rhs},
                   {"relError", r.rel_error},
                   {"pass", r.pass}};
    if (r.reason)
        j["reason"] = *r.reason;
    j["termsUsed"] = r.terms_used;
    j["elapsedMs"] = timing ? r.elapsed_ms : 0.0;
    return j;
}

// A budget-limited sum is still a result; the tail estimate says how good.
template <class Fn>
std::pair<SeriesResult, bool> sum_within_budget(Fn&& fn) {
    try {
        return {fn(), false};
    } catch (const BudgetExceeded& e) {
        std::cerr << "warning: " << e.what() << "\n";
        return {e.best(), true};
    }
}

void print_series(const char* label, const SeriesResult& s, int digits) {
    std::cout << label << " = " << s.value.str(digits) << "\n"
              << "  terms used     " << s.terms_used << (s.terminated ? " (terminated)" : "") << "\n"
              << "  tail estimate  " << s.tail_estimate.str(6) << "\n";
}

ordered_json series_json(const SeriesResult& s, int digits) {
    return {{"value", s.value.str(digits)},
            {"termsUsed", s.terms_used},
            {"tailEstimate", s.tail_estimate.str(6)},
            {"terminated", s.terminated}};
}

struct Args {
    std::string config;
    bool json = false;
    std::optional<int> digits;
    std::optional<long> max_terms;
    std::optional<int> jobs;

    std::string upper, lower;
    std::string a, b, c, d, e, f;
    long m = 1;
    bool to_3f2 = false;
    bool kdf_check = false;

    std::string identity;
    std::string tier = "both";
    int cases = 10;
    std::uint64_t seed = 1;
    bool no_timing = false;
};

Rat req(const std::string& s, const char* name) {
    if (s.empty())
        throw ParseError(std::string("missing --") + name);
    return Rat::parse(s);
}

int cmd_eval(const Args& args, const Defaults& d) {
    const PFQParams p{parse_list(args.upper), parse_list(args.lower)};
    const int digits = args.digits.value_or(d.digits);
    const SeriesOptions so{digits, args.max_terms.value_or(d.max_terms), std::nullopt};
    const auto [s, exhausted] = sum_within_budget([&] { return eval_pfq1(p, so); });
    if (args.json) {
        auto j = to_json(p);
        j.update(series_json(s, digits));
        j["budgetExhausted"] = exhausted;
        std::cout << j.dump(2) << "\n";
    } else {
        print_series(p.str().c_str(), s, digits);
    }
    return Ok;
}

int cmd_reduce_pos(const Args& args) {
    const ParamTuple6 p{req(args.a, "a"), req(args.b, "b"), req(args.c, "c"),
                        req(args.d, "d"), req(args.e, "e"), req(args.f, "f")};
    const auto r = reduce_plus_m(p, args.m);
    const PFQParams target{{p.a, p.b, p.c, r.mu + 1}, {p.d, p.e, r.mu}};
    if (args.json) {
        std::cout << ordered_json{{"m", args.m}, {"W", r.W.str()}, {"mu", r.mu.str()}, {"target", to_json(target)}}
                         .dump(2)
                  << "\n";
    } else {
        std::cout << "W_" << args.m << "  = " << r.W << "\n"
                  << "mu_" << args.m << " = " << r.mu << "\n"
                  << "target " << target.str() << "\n";
    }
    return Ok;
}

int cmd_reduce_neg(const Args& args) {
    const NegParams p{req(args.a, "a"), req(args.b, "b"), req(args.c, "c"), req(args.e, "e"), req(args.f, "f")};
    const auto r = rq_reduce(p, args.m);
    ordered_json j{{"m", args.m},
                   {"R", r.R.str()},
                   {"Q", r.Q.str()},
                   {"gamma", to_json(r.gamma)},
                   {"target", to_json(neg_series(p, 1))}};
    std::ostringstream text;
    text << "R_" << args.m << " = " << r.R << "\n"
         << "Q_" << args.m << " = " << r.Q << "\n"
         << "gamma  " << r.gamma.str() << "\n"
         << "target " << neg_series(p, 1).str() << "\n";
    if (args.to_3f2) {
        const auto br = unit_negshift_to_3f2(p);
        // R * (k1 3F2 + k2 gamma') + Q gamma
        j["to3F2"] = {{"seriesCoeff", (r.R * br.series_coeff).str()},
                      {"series", to_json(br.series)},
                      {"gammaTerms",
                       ordered_json::array({to_json(br.gamma.scaled(r.R * br.gamma_coeff)), to_json(r.gamma.scaled(r.Q))})}};
        text << "3F2 form: " << r.R * br.series_coeff << " * " << br.series.str() << "\n"
             << "  + " << br.gamma.scaled(r.R * br.gamma_coeff).str() << "\n"
             << "  + " << r.gamma.scaled(r.Q).str() << "\n";
    }
    std::cout << (args.json ? j.dump(2) + "\n" : text.str());
    return Ok;
}

int cmd_psi(const Args& args, const Defaults& d) {
    const PsiSeriesParams p{req(args.a, "a"), req(args.c, "c"), req(args.e, "e"), req(args.b, "b")};
    const int digits = args.digits.value_or(d.digits);
    const SeriesOptions so{digits, args.max_terms.value_or(d.max_terms), std::nullopt};
    const auto [s, exhausted] = sum_within_budget([&] { return eval_psi_series(p, so); });
    std::optional<SeriesResult> k;
    bool k_exhausted = false;
    if (args.kdf_check)
        std::tie(k, k_exhausted) = sum_within_budget([&] { return eval_kdf_check(p, so); });
    if (args.json) {
        ordered_json j{{"params", p.str()}, {"psi", series_json(s, digits)}};
        j["psi"]["budgetExhausted"] = exhausted;
        if (k) {
            j["kdf"] = series_json(*k, digits);
            j["kdf"]["budgetExhausted"] = k_exhausted;
            j["relDifference"] = relative_difference(s.value, k->value).str(6);
        }
        std::cout << j.dump(2) << "\n";
    } else {
        print_series(("psi series " + p.str()).c_str(), s, digits);
        if (k) {
            print_series("double series", *k, digits);
            std::cout << "relative difference " << relative_difference(s.value, k->value).str(6) << "\n";
        }
    }
    return Ok;
}

int cmd_verify(const Args& args, const Defaults& d) {
    SuiteOptions so;
    so.filter = args.identity;
    if (!so.filter.empty() && select_identities(so.filter).empty())
        throw ParseError("unknown identity " + so.filter);
    if (args.tier == "both")
        so.tiers = {Tier::Exact, Tier::Numeric};
    else if (auto t = parse_tier(args.tier))
        so.tiers = {*t};
    else
        throw ParseError("tier must be exact, numeric or both");
    if (args.cases < 0)
        throw ParseError("cases must be nonnegative");
    so.cases = args.cases;
    so.seed = args.seed;
    so.jobs = args.jobs.value_or(d.jobs);
    so.eval.digits = args.digits.value_or(30);
    so.eval.max_terms = args.max_terms.value_or(d.max_terms);

    const auto summary = run_suite(so);
    if (args.json) {
        ordered_json reports = ordered_json::array();
        for (const auto& r : summary.reports)
            reports.push_back(to_json(r, !args.no_timing));
        std::cout << ordered_json{{"passed", summary.passed}, {"failed", summary.failed}, {"reports", reports}}.dump(2)
                  << "\n";
    } else {
        for (const auto& r : summary.reports) {
            std::cout << (r.pass ? "PASS " : "FAIL ") << r.identity_case.identity << " ["
                      << to_string(r.identity_case.tier) << "] seed=" << r.identity_case.seed;
            if (r.identity_case.tier == Tier::Numeric)
                std::cout << " relErr=" << r.rel_error;
            if (r.reason)
                std::cout << "  " << *r.reason;
            std::cout << "\n";
        }
        std::cout << summary.passed << " passed, " << summary.failed << " failed\n";
    }
    return summary.all_passed() ? Ok : VerifyFailed;
}

bool is_input_error(ErrorKind k) {
    switch (k) {
    case ErrorKind::Parse:
    case ErrorKind::Shape:
    case ErrorKind::Pole:
    case ErrorKind::Divergent:
    case ErrorKind::SingularReduction:
    case ErrorKind::DegenerateCoefficient:
    case ErrorKind::NotTerminating:
    case ErrorKind::IdenticallyZero:
    case ErrorKind::NoRealRoot:
        return true;
    default:
        return false;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reduce and verify hypergeometric series at unit argument"};
    app.require_subcommand(1);
    Args args;
    app.add_option("--config", args.config, "key = value file with digits, maxTerms, jobs");

    auto common = [&](CLI::App* sub, bool with_digits) {
        sub->add_flag("--json", args.json, "JSON output");
        if (with_digits) {
            sub->add_option("--digits", args.digits, "decimal digits")->check(CLI::Range(15, 10000));
            sub->add_option("--max-terms", args.max_terms, "series term budget")->check(CLI::PositiveNumber);
        }
    };

    auto* eval = app.add_subcommand("eval", "sum a pFq at unit argument");
    eval->add_option("--upper", args.upper, "comma-separated rationals")->required();
    eval->add_option("--lower", args.lower, "comma-separated rationals");
    common(eval, true);

    auto* reduce = app.add_subcommand("reduce", "reduce an integral parameter difference");
    reduce->require_subcommand(1);
    auto* pos = reduce->add_subcommand("pos", "4F3(a,b,c,f+m; d,e,f) to a unit shift");
    auto* negc = reduce->add_subcommand("neg", "4F3(a,b,c,f+1; b+m,e,f) to the b+1 case");
    for (auto* sub : {pos, negc}) {
        for (auto [name, dst] : {std::pair{"--a", &args.a}, {"--b", &args.b}, {"--c", &args.c}, {"--e", &args.e},
                                 {"--f", &args.f}})
            sub->add_option(name, *dst)->required();
        sub->add_option("--m", args.m)->required();
        common(sub, false);
    }
    pos->add_option("--d", args.d)->required();
    negc->add_flag("--to-3f2", args.to_3f2, "rewrite the result through 3F2");

    auto* psi = app.add_subcommand("psi", "psi-weighted 2F1 series");
    for (auto [name, dst] : {std::pair{"--a", &args.a}, {"--c", &args.c}, {"--e", &args.e}, {"--b", &args.b}})
        psi->add_option(name, *dst)->required();
    psi->add_flag("--kdf-check", args.kdf_check, "also sum the double series");
    common(psi, true);

    auto* verify = app.add_subcommand("verify", "run the identity suite");
    verify->add_option("--identity", args.identity, "identity name or family");
    verify->add_option("--tier", args.tier, "exact, numeric or both");
    verify->add_option("--cases", args.cases, "cases per identity and tier");
    verify->add_option("--seed", args.seed);
    verify->add_option("--jobs", args.jobs)->check(CLI::PositiveNumber);
    verify->add_flag("--no-timing", args.no_timing, "report elapsedMs as 0");
    common(verify, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? Ok : BadInput;
    }

    try {
        const Defaults d = args.config.empty() ? Defaults{} : read_config(args.config);
        if (*eval)
            return cmd_eval(args, d);
        if (*pos)
            return cmd_reduce_pos(args);
        if (*negc)
            return cmd_reduce_neg(args);
        if (*psi)
            return cmd_psi(args, d);
        return cmd_verify(args, d);
    } catch (const HypError& e) {
        std::cerr << "error: " << to_string(e.kind()) << ": " << e.what() << "\n";
        return is_input_error(e.kind()) ? BadInput : Internal;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return Internal;
    }
}
