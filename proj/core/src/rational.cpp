#include "limitlab/rational.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>

#include "limitlab/errors.hpp"

namespace limitlab {

namespace mp = boost::multiprecision;

double to_double(const Rational& q) {
    if (q == 0) return 0.0;
    Int num = mp::numerator(q);
    Int den = mp::denominator(q);
    const bool negative = num < 0;
    if (negative) num = -num;

    // Scale num/den so the integer quotient has 54 or 55 bits, round down to
    // 53 half-to-even, then apply the binary exponent with ldexp.
    const long nbits = static_cast<long>(mp::msb(num)) + 1;
    const long dbits = static_cast<long>(mp::msb(den)) + 1;
    const long shift = 54 - (nbits - dbits);
    if (shift > 0)
        num <<= shift;
    else if (shift < 0)
        den <<= -shift;

    Int quot, rem;
    mp::divide_qr(num, den, quot, rem);
    const long qbits = static_cast<long>(mp::msb(quot)) + 1;
    const int extra = static_cast<int>(qbits - 53);  // 1 or 2
    Int kept = quot >> extra;
    const Int dropped = quot - (kept << extra);
    const Int half = Int(1) << (extra - 1);
    if (dropped > half || (dropped == half && rem != 0)) {
        kept += 1;
    } else if (dropped == half && rem == 0 && mp::bit_test(kept, 0)) {
        kept += 1;  // ties to even
    }
    const double mant = static_cast<double>(kept.convert_to<std::uint64_t>());
    // value = kept * 2^extra / 2^shift
    const double result = std::ldexp(mant, static_cast<int>(extra - shift));
    return negative ? -result : result;
}

namespace {

// Decimal-only integer parse; leading zeros stay decimal (cpp_int's string
// constructor would read them as octal).
Int parse_decimal_int(std::string s) {
    bool negative = false;
    if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
        negative = s[0] == '-';
        s.erase(s.begin());
    }
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
        throw validation_error("not an integer: '" + s + "'");
    const auto first = s.find_first_not_of('0');
    s = first == std::string::npos ? "0" : s.substr(first);
    Int value(s);
    return negative ? -value : value;
}

}  // namespace

Rational parse_rational(const std::string& text) {
    auto fail = [&]() -> Rational {
        throw validation_error("not a rational: '" + text + "'");
    };
    std::string s = text;
    s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }),
            s.end());
    if (s.empty()) return fail();
    try {
        const auto slash = s.find('/');
        if (slash != std::string::npos) {
            const Int num = parse_decimal_int(s.substr(0, slash));
            const Int den = parse_decimal_int(s.substr(slash + 1));
            if (den == 0) return fail();
            return Rational(num, den);
        }
        const auto dot = s.find('.');
        if (dot != std::string::npos) {
            const std::string digits = s.substr(0, dot) + s.substr(dot + 1);
            const std::size_t frac_len = s.size() - dot - 1;
            Int den = 1;
            for (std::size_t i = 0; i < frac_len; ++i) den *= 10;
            return Rational(parse_decimal_int(digits), den);
        }
        return Rational(parse_decimal_int(s));
    } catch (const validation_error&) {
        return fail();
    }
}

std::string to_string(const Rational& q) {
    if (mp::denominator(q) == 1) return mp::numerator(q).str();
    return mp::numerator(q).str() + "/" + mp::denominator(q).str();
}

std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

}  // namespace limitlab
