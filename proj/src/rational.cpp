#include "hypred/rational.hpp"

#include "hypred/errors.hpp"

#include <cctype>
#include <ostream>
#include <stdexcept>

namespace hypred {

namespace {

bool is_integer_literal(std::string_view s) {
    std::size_t i = 0;
    if (i < s.size() && (s[i] == '+' || s[i] == '-'))
        ++i;
    if (i == s.size())
        return false;
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i])))
            return false;
    return true;
}

mpz_class parse_integer(std::string_view s) {
    if (!s.empty() && s.front() == '+')
        s.remove_prefix(1);
    return mpz_class(std::string(s), 10);
}

} // namespace

Rat::Rat(long num, long den) : v_(num, den) {
    if (den == 0)
        throw std::domain_error("Rat: zero denominator");
    v_.canonicalize();
}

Rat Rat::parse(std::string_view text) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front())))
        text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
        text.remove_suffix(1);

    const auto slash = text.find('/');
    const auto num_text = text.substr(0, slash);
    if (!is_integer_literal(num_text))
        throw ParseError("not a rational: '" + std::string(text) + "'");
    if (slash == std::string_view::npos)
        return Rat(mpq_class(parse_integer(num_text)));

    const auto den_text = text.substr(slash + 1);
    if (!is_integer_literal(den_text))
        throw ParseError("not a rational: '" + std::string(text) + "'");
    mpz_class den = parse_integer(den_text);
    if (den == 0)
        throw ParseError("zero denominator in '" + std::string(text) + "'");
    return Rat(mpq_class(parse_integer(num_text), den));
}

long Rat::to_long() const {
    const mpz_class n = v_.get_num();
    if (!n.fits_slong_p())
        throw std::overflow_error("Rat::to_long: value out of range");
    return n.get_si();
}

std::string Rat::str() const { return v_.get_str(); }

Rat& Rat::operator/=(const Rat& o) {
    if (o.is_zero())
        throw std::domain_error("Rat: division by zero");
    v_ /= o.v_;
    return *this;
}

std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }

Rat abs(const Rat& r) { return r.sign() < 0 ? -r : r; }

Rat pochhammer(const Rat& x, long n) {
    Rat result(1);
    Rat term = x;
    for (long k = 0; k < n; ++k) {
        result *= term;
        term += 1;
    }
    return result;
}

Rat factorial(long n) { return pochhammer(Rat(1), n); }

} // namespace hypred
