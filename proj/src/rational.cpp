#include "nuexpr/rational.hpp"

#include <cctype>

#include "nuexpr/errors.hpp"

namespace nuexpr {

namespace {

bool all_digits(const std::string& s) {
    if (s.empty())
        return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c)))
            return false;
    return true;
}

} // namespace

Rational parse_rational(const std::string& text) {
    std::string num = text;
    std::string den = "1";
    auto slash = text.find('/');
    if (slash != std::string::npos) {
        num = text.substr(0, slash);
        den = text.substr(slash + 1);
    }
    if (!all_digits(num) || !all_digits(den))
        throw Error("bad rational literal '" + text + "'");
    mpz_class p(num), q(den);
    if (q == 0)
        throw Error("zero denominator in rational literal '" + text + "'");
    Rational r(p, q);
    r.canonicalize();
    return r;
}

std::string rational_to_string(const Rational& value) {
    if (value.get_den() == 1)
        return value.get_num().get_str();
    return value.get_num().get_str() + "/" + value.get_den().get_str();
}

} // namespace nuexpr
