#include "chorefair/rational.hpp"

#include "chorefair/errors.hpp"

#include <cctype>

namespace chorefair {

namespace {

bool is_canonical_integer(std::string_view digits, bool allow_sign) {
    if (allow_sign && !digits.empty() && digits.front() == '-') {
        digits.remove_prefix(1);
        // "-0" is not canonical
        if (digits == "0") return false;
    }
    if (digits.empty()) return false;
    for (char c : digits) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return digits.size() == 1 || digits.front() != '0';
}

} // namespace

Rational parse_rational(std::string_view text) {
    const auto slash = text.find('/');
    const std::string_view num = text.substr(0, slash);
    if (!is_canonical_integer(num, true)) {
        throw ParseError("malformed rational \"" + std::string(text) + "\"");
    }
    Integer p(std::string(num), 10);
    Integer q(1);
    if (slash != std::string_view::npos) {
        const std::string_view den = text.substr(slash + 1);
        if (!is_canonical_integer(den, false)) {
            throw ParseError("malformed rational \"" + std::string(text) + "\"");
        }
        q = Integer(std::string(den), 10);
        if (q == 0) {
            throw ParseError("zero denominator in \"" + std::string(text) + "\"");
        }
    }
    Integer g;
    mpz_gcd(g.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t());
    if (g != 1) {
        throw ParseError("rational \"" + std::string(text) + "\" is not in lowest terms");
    }
    Rational r(p, q);
    r.canonicalize();
    return r;
}

std::string to_string(const Rational& value) {
    return value.get_str(10);
}

std::string to_decimal(const Rational& value, int digits) {
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
    const bool negative = sgn(value) < 0;
    Rational magnitude = abs(value);
    // round half up on the magnitude
    Integer scaled = (magnitude.get_num() * scale * 2 + magnitude.get_den()) /
                     (magnitude.get_den() * 2);
    std::string body = scaled.get_str(10);
    if (digits > 0) {
        if (body.size() <= static_cast<std::size_t>(digits)) {
            body.insert(0, static_cast<std::size_t>(digits) + 1 - body.size(), '0');
        }
        body.insert(body.size() - static_cast<std::size_t>(digits), 1, '.');
    }
    if (negative && scaled != 0) body.insert(0, 1, '-');
    return body;
}

} // namespace chorefair
